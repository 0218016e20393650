#pragma once

#include <string>
#include <vector>

#include "condopt/geometry.hpp"

namespace condopt {

enum class Edge : int { bottom = 0, right = 1, top = 2, left = 3 };

enum class BoundaryKind {
    dirichlet_temperature, // value = wall temperature T_b [K]
    neumann_influx,        // value = influx magnitude [W/m^2], heat enters the domain
    adiabatic,
};

/// One boundary strip on an edge, given as the half-open interval
/// [start, end) of the edge coordinate (x on bottom/top, y on left/right).
struct BoundarySegment {
    Edge edge = Edge::bottom;
    Real start = 0.0;
    Real end = 0.0;
    BoundaryKind kind = BoundaryKind::adiabatic;
    Real value = 0.0;
};

struct GaussianSource {
    Vec2 center;
    Real intensity = 0.0; // C_i [W/m^3]
};

/// Internal heat source: either a uniform rate or a sum of Gaussian bumps
/// C_i * exp(-10 * |r - r_i|^2).
struct SourceField {
    Real uniform_rate = 0.0;
    std::vector<GaussianSource> gaussians;

    bool is_uniform() const { return gaussians.empty(); }
};

struct ProblemSpec {
    Real side_length = 1.0;
    int resolution = 100;  // inner particles per side
    int dummy_layers = 4;
    Real k0 = 1.0;         // reference (budget) conductivity [W/(m K)]
    std::vector<BoundarySegment> segments;
    SourceField source;

    /// Throws std::invalid_argument on bad geometry, overlapping segments,
    /// segments outside an edge, or non-positive Gaussian intensities.
    void validate() const;

    /// Lowest Dirichlet wall temperature; base for initial temperature fields.
    /// Falls back to 300 K when no Dirichlet segment exists.
    Real min_sink_temperature() const;
};

/// The seven built-in benchmark configurations.
ProblemSpec builtin_problem(int id);

/// Heat-source rate at a position inside the domain. [W/m^3]
Real source_at(const ProblemSpec& spec, Vec2 position);

std::string edge_name(Edge edge);
Edge edge_from_name(const std::string& name);

} // namespace condopt
