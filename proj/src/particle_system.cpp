#include "condopt/particle_system.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <stdexcept>
#include <utility>

namespace condopt {

Real ParticleSystem::average_temperature() const
{
    Real weighted = 0.0;
    Real total = 0.0;
    for (std::uint32_t i : inner) {
        weighted += temperature[i] * volume[i];
        total += volume[i];
    }
    return weighted / total;
}

Real ParticleSystem::max_conductivity() const
{
    Real best = 0.0;
    for (std::uint32_t i : inner) {
        best = std::max(best, conductivity[i]);
    }
    return best;
}

namespace {

struct EdgeGeometry {
    Edge edge;
    Vec2 outward;
};

// Precedence for corner ties: bottom, then left, then top, then right.
constexpr std::array<EdgeGeometry, 4> edge_order = {{
    {Edge::bottom, {0.0, -1.0}},
    {Edge::left, {-1.0, 0.0}},
    {Edge::top, {0.0, 1.0}},
    {Edge::right, {1.0, 0.0}},
}};

Real depth_outside(Edge edge, Vec2 p, Real side)
{
    switch (edge) {
    case Edge::bottom: return -p.y;
    case Edge::top: return p.y - side;
    case Edge::left: return -p.x;
    case Edge::right: return p.x - side;
    }
    return -1.0;
}

Real edge_coordinate(Edge edge, Vec2 p)
{
    return (edge == Edge::bottom || edge == Edge::top) ? p.x : p.y;
}

} // namespace

ParticleSystem build_lattice(const ProblemSpec& spec)
{
    spec.validate();

    const int n = spec.resolution;
    const int layers = spec.dummy_layers;
    if (layers > n) {
        throw std::invalid_argument("dummy layer count exceeds the lattice resolution");
    }
    const Real dx = spec.side_length / static_cast<Real>(n);
    const Real cell_volume = dx * dx;

    ParticleSystem ps;
    ps.spacing = dx;
    ps.side = spec.side_length;
    ps.resolution = n;
    ps.layers = layers;

    const int total_side = n + 2 * layers;
    const std::size_t total = static_cast<std::size_t>(total_side) * total_side;
    ps.position.reserve(total);
    ps.role.reserve(total);

    auto lattice_pos = [dx](int gi, int gj) {
        return Vec2{(static_cast<Real>(gi) + 0.5) * dx, (static_cast<Real>(gj) + 0.5) * dx};
    };
    // Reflection of an out-of-range lattice index back into [0, n).
    auto mirrored_index = [n](int g) {
        if (g < 0) return -g - 1;
        if (g >= n) return 2 * n - g - 1;
        return g;
    };

    // Inner particles first, row-major, so sweep order equals index order.
    for (int gj = 0; gj < n; ++gj) {
        for (int gi = 0; gi < n; ++gi) {
            ps.position.push_back(lattice_pos(gi, gj));
            ps.role.push_back(Role::inner);
        }
    }
    // Dummy frame in extended-lattice scan order.
    std::vector<std::pair<int, int>> dummy_cells;
    for (int gj = -layers; gj < n + layers; ++gj) {
        for (int gi = -layers; gi < n + layers; ++gi) {
            const bool is_inner = gi >= 0 && gi < n && gj >= 0 && gj < n;
            if (!is_inner) {
                ps.position.push_back(lattice_pos(gi, gj));
                ps.role.push_back(Role::adiabatic_dummy);
                dummy_cells.emplace_back(gi, gj);
            }
        }
    }

    const std::size_t count = ps.position.size();
    ps.temperature.assign(count, 0.0);
    ps.conductivity.assign(count, spec.k0);
    ps.source_rate.assign(count, 0.0);
    ps.volume.assign(count, cell_volume);
    ps.normal.assign(count, Vec2{});
    ps.segment.assign(count, -1);
    ps.boundary_value.assign(count, 0.0);
    ps.mirror.resize(count);

    ps.inner.resize(static_cast<std::size_t>(n) * n);
    for (std::uint32_t i = 0; i < ps.inner.size(); ++i) {
        ps.inner[i] = i;
        ps.mirror[i] = i;
        ps.source_rate[i] = source_at(spec, ps.position[i]);
    }

    ps.dummies.reserve(count - ps.inner.size());
    for (std::size_t d = 0; d < dummy_cells.size(); ++d) {
        const std::uint32_t w = static_cast<std::uint32_t>(ps.inner.size() + d);
        ps.dummies.push_back(w);
        const auto [gi, gj] = dummy_cells[d];
        const Vec2 p = ps.position[w];

        // Nearest edge by penetration depth; corner ties resolved by the
        // fixed precedence order.
        Edge owner = Edge::bottom;
        Real best_depth = std::numeric_limits<Real>::infinity();
        Vec2 outward{};
        for (const auto& eg : edge_order) {
            const Real depth = depth_outside(eg.edge, p, spec.side_length);
            if (depth > 0.0 && depth < best_depth) {
                best_depth = depth;
                owner = eg.edge;
                outward = eg.outward;
            }
        }
        ps.normal[w] = outward;

        // Segment membership by projection onto the owning edge, half-open.
        const Real c = edge_coordinate(owner, p);
        for (std::size_t s = 0; s < spec.segments.size(); ++s) {
            const auto& seg = spec.segments[s];
            if (seg.edge != owner || c < seg.start || c >= seg.end) {
                continue;
            }
            ps.segment[w] = static_cast<int>(s);
            ps.boundary_value[w] = seg.value;
            switch (seg.kind) {
            case BoundaryKind::dirichlet_temperature: ps.role[w] = Role::dirichlet_dummy; break;
            case BoundaryKind::neumann_influx: ps.role[w] = Role::neumann_dummy; break;
            case BoundaryKind::adiabatic: ps.role[w] = Role::adiabatic_dummy; break;
            }
            break;
        }

        const int mi = mirrored_index(gi);
        const int mj = mirrored_index(gj);
        ps.mirror[w] = static_cast<std::uint32_t>(mj * n + mi);
    }

    return ps;
}

} // namespace condopt
