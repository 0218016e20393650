#include "condopt/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace condopt {

void ProblemSpec::validate() const
{
    if (!(side_length > 0.0)) {
        throw std::invalid_argument("side_length must be positive");
    }
    if (resolution < 8) {
        throw std::invalid_argument("resolution must be at least 8");
    }
    if (dummy_layers < 1) {
        throw std::invalid_argument("dummy_layers must be at least 1");
    }
    if (!(k0 > 0.0)) {
        throw std::invalid_argument("k0 must be positive");
    }
    for (const auto& g : source.gaussians) {
        if (!(g.intensity > 0.0)) {
            throw std::invalid_argument("Gaussian source intensity must be positive");
        }
    }
    // Segments must lie on their edge and must not overlap on a shared edge.
    for (std::size_t a = 0; a < segments.size(); ++a) {
        const auto& s = segments[a];
        if (!(s.start < s.end)) {
            throw std::invalid_argument("boundary segment must have start < end");
        }
        if (s.start < 0.0 || s.end > side_length) {
            throw std::invalid_argument("boundary segment lies outside its edge");
        }
        for (std::size_t b = a + 1; b < segments.size(); ++b) {
            const auto& t = segments[b];
            if (t.edge != s.edge) {
                continue;
            }
            if (s.start < t.end && t.start < s.end) {
                throw std::invalid_argument("boundary segments overlap on one edge");
            }
        }
    }
}

Real ProblemSpec::min_sink_temperature() const
{
    Real best = std::numeric_limits<Real>::infinity();
    for (const auto& s : segments) {
        if (s.kind == BoundaryKind::dirichlet_temperature) {
            best = std::min(best, s.value);
        }
    }
    return std::isfinite(best) ? best : 300.0;
}

namespace {

BoundarySegment centered_sink(Edge edge, Real side, Real fraction, Real temperature)
{
    const Real half = 0.5 * fraction * side;
    return {edge, 0.5 * side - half, 0.5 * side + half,
            BoundaryKind::dirichlet_temperature, temperature};
}

SourceField four_gaussians(Real intensity)
{
    SourceField f;
    f.gaussians = {{{0.25, 0.25}, intensity},
                   {{0.25, 0.75}, intensity},
                   {{0.75, 0.25}, intensity},
                   {{0.75, 0.75}, intensity}};
    return f;
}

} // namespace

ProblemSpec builtin_problem(int id)
{
    ProblemSpec p;
    p.side_length = 1.0;
    p.resolution = 100;
    p.dummy_layers = 4;
    switch (id) {
    case 1:
        p.k0 = 1.0;
        p.source.uniform_rate = 1000.0;
        p.segments = {centered_sink(Edge::left, 1.0, 0.2, 300.0),
                      centered_sink(Edge::right, 1.0, 0.2, 300.0)};
        break;
    case 2:
        p.k0 = 1.0;
        p.source.uniform_rate = 1000.0;
        p.segments = {centered_sink(Edge::left, 1.0, 0.2, 300.0),
                      centered_sink(Edge::right, 1.0, 0.2, 350.0)};
        break;
    case 3:
        p.k0 = 4.0;
        p.source.uniform_rate = 2000.0;
        p.segments = {centered_sink(Edge::left, 1.0, 0.2, 280.0),
                      centered_sink(Edge::right, 1.0, 0.2, 280.0)};
        break;
    case 4:
        p.k0 = 4.0;
        p.source.uniform_rate = 2000.0;
        p.segments = {centered_sink(Edge::left, 1.0, 0.2, 280.0),
                      centered_sink(Edge::right, 1.0, 0.2, 350.0)};
        break;
    case 5:
        p.k0 = 4.0;
        p.source = four_gaussians(3000.0);
        p.segments = {centered_sink(Edge::left, 1.0, 0.2, 280.0),
                      centered_sink(Edge::right, 1.0, 0.2, 350.0)};
        break;
    case 6:
        // Source rate and k0 are calibrated against the published uniform-k
        // average (365.1 K); see README for how to override them.
        p.k0 = 1.0;
        p.source.uniform_rate = 100.0;
        p.segments = {centered_sink(Edge::top, 1.0, 0.1, 350.0),
                      centered_sink(Edge::bottom, 1.0, 0.1, 300.0)};
        break;
    case 7: {
        p.k0 = 1.0;
        p.source.uniform_rate = 0.0;
        BoundarySegment heater = centered_sink(Edge::top, 1.0, 0.1, 0.0);
        heater.kind = BoundaryKind::neumann_influx;
        heater.value = 2000.0;
        BoundarySegment sink_cold{Edge::bottom, 0.20, 0.30,
                                  BoundaryKind::dirichlet_temperature, 300.0};
        BoundarySegment sink_warm{Edge::bottom, 0.70, 0.80,
                                  BoundaryKind::dirichlet_temperature, 350.0};
        p.segments = {heater, sink_cold, sink_warm};
        break;
    }
    default:
        throw std::invalid_argument("built-in problem id must be in 1..7");
    }
    p.validate();
    return p;
}

Real source_at(const ProblemSpec& spec, Vec2 position)
{
    if (spec.source.is_uniform()) {
        return spec.source.uniform_rate;
    }
    Real total = 0.0;
    for (const auto& g : spec.source.gaussians) {
        total += g.intensity * std::exp(-10.0 * (position - g.center).squared_norm());
    }
    return total;
}

std::string edge_name(Edge edge)
{
    switch (edge) {
    case Edge::bottom: return "bottom";
    case Edge::right: return "right";
    case Edge::top: return "top";
    case Edge::left: return "left";
    }
    return "unknown";
}

Edge edge_from_name(const std::string& name)
{
    if (name == "bottom") return Edge::bottom;
    if (name == "right") return Edge::right;
    if (name == "top") return Edge::top;
    if (name == "left") return Edge::left;
    throw std::invalid_argument("unknown edge: " + name);
}

} // namespace condopt
