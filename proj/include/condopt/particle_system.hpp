#pragma once

#include <cstdint>
#include <vector>

#include "condopt/geometry.hpp"
#include "condopt/problem.hpp"

namespace condopt {

enum class Role : std::uint8_t {
    inner = 0,
    dirichlet_dummy = 1,
    neumann_dummy = 2,
    adiabatic_dummy = 3,
};

/// Structure-of-arrays particle discretization of a square thermal domain.
///
/// Inner particles sit at cell centers of an N x N lattice and occupy
/// indices [0, N^2) in row-major order (x fastest). Dummy particles fill an
/// L-layer frame around the domain and follow in row-major scan order of the
/// extended lattice. Particles never move.
struct ParticleSystem {
    std::vector<Vec2> position;
    std::vector<Real> temperature;   // T [K]
    std::vector<Real> conductivity;  // k [W/(m K)]
    std::vector<Real> source_rate;   // Q-dot, includes volumetric flux term [K/s with rho*C = 1]
    std::vector<Real> volume;        // dx^2 in 2D [m^2]
    std::vector<Vec2> normal;        // outward unit normal; zero for inner particles
    std::vector<Role> role;
    std::vector<int> segment;        // boundary segment id; -1 for inner / implicit adiabatic
    std::vector<Real> boundary_value; // T_b for Dirichlet, influx magnitude for Neumann dummies
    std::vector<std::uint32_t> mirror; // inner mirror index (dummies); identity for inner

    std::vector<std::uint32_t> inner;   // inner indices in row-major sweep order
    std::vector<std::uint32_t> dummies; // all dummy indices

    Real spacing = 0.0;     // dx [m]
    Real side = 0.0;        // domain side length [m]
    int resolution = 0;     // N
    int layers = 0;         // L

    std::size_t size() const { return position.size(); }

    Real domain_area() const { return side * side; }

    /// Volume-weighted average temperature over inner particles.
    Real average_temperature() const;

    /// Largest inner conductivity (sets the diffusive time-step bound).
    Real max_conductivity() const;
};

/// Lattice construction per the problem geometry. Roles, normals, segment
/// membership and mirror pairings are assigned here; temperatures start at
/// zero and conductivity at k0.
ParticleSystem build_lattice(const ProblemSpec& spec);

} // namespace condopt
