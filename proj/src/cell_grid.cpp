#include "condopt/cell_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace condopt {

int CellGrid::cell_index(Vec2 p) const
{
    int cx = static_cast<int>(std::floor((p.x - origin.x) / cell_size));
    int cy = static_cast<int>(std::floor((p.y - origin.y) / cell_size));
    cx = std::clamp(cx, 0, nx - 1);
    cy = std::clamp(cy, 0, ny - 1);
    return cy * nx + cx;
}

int CellGrid::color_of_cell(int cell) const
{
    const int cx = cell % nx;
    const int cy = cell / nx;
    return (cy % 3) * 3 + (cx % 3);
}

CellGrid build_cell_grid(const ParticleSystem& ps, Real support_radius)
{
    if (!(support_radius > 0.0)) {
        throw std::invalid_argument("support radius must be positive");
    }
    CellGrid grid;
    grid.cell_size = support_radius;
    grid.support_radius = support_radius;

    const Real pad = 0.5 * ps.spacing;
    const Real lo = -static_cast<Real>(ps.layers) * ps.spacing - pad;
    const Real hi = ps.side + static_cast<Real>(ps.layers) * ps.spacing + pad;
    grid.origin = {lo, lo};
    grid.nx = std::max(1, static_cast<int>(std::ceil((hi - lo) / grid.cell_size)));
    grid.ny = grid.nx;

    grid.cells.assign(static_cast<std::size_t>(grid.nx) * grid.ny, {});
    for (std::uint32_t i = 0; i < ps.size(); ++i) {
        grid.cells[static_cast<std::size_t>(grid.cell_index(ps.position[i]))].push_back(i);
    }

    grid.color_batches.assign(9, {});
    for (int cell = 0; cell < grid.nx * grid.ny; ++cell) {
        if (!grid.cells[static_cast<std::size_t>(cell)].empty()) {
            grid.color_batches[static_cast<std::size_t>(grid.color_of_cell(cell))]
                .push_back(static_cast<std::uint32_t>(cell));
        }
    }
    return grid;
}

std::vector<Neighbor> neighbors(const ParticleSystem& ps, const CellGrid& grid,
                                std::uint32_t i)
{
    std::vector<Neighbor> out;
    const Vec2 pi = ps.position[i];
    const int cx = static_cast<int>(std::floor((pi.x - grid.origin.x) / grid.cell_size));
    const int cy = static_cast<int>(std::floor((pi.y - grid.origin.y) / grid.cell_size));
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            const int nxc = cx + dx;
            const int nyc = cy + dy;
            if (nxc < 0 || nxc >= grid.nx || nyc < 0 || nyc >= grid.ny) {
                continue;
            }
            for (std::uint32_t j : grid.cells[static_cast<std::size_t>(nyc * grid.nx + nxc)]) {
                if (j == i) {
                    continue;
                }
                const Vec2 diff = pi - ps.position[j];
                const Real r = diff.norm();
                if (r < grid.support_radius) {
                    out.push_back({j, r, diff / r});
                }
            }
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.index < b.index; });
    return out;
}

NeighborTable build_neighbor_table(const ParticleSystem& ps, const CellGrid& grid,
                                   const KernelSpec& kernel)
{
    NeighborTable table;
    table.offsets.resize(ps.size() + 1, 0);

    std::vector<std::vector<Neighbor>> rows(ps.size());
    std::size_t total = 0;
    for (std::uint32_t i = 0; i < ps.size(); ++i) {
        rows[i] = neighbors(ps, grid, i);
        total += rows[i].size();
    }
    table.index.reserve(total);
    table.geom.reserve(total);
    table.is_dummy.reserve(total);
    for (std::uint32_t i = 0; i < ps.size(); ++i) {
        table.offsets[i + 1] = table.offsets[i] + static_cast<std::uint32_t>(rows[i].size());
        for (const Neighbor& nb : rows[i]) {
            table.index.push_back(nb.index);
            table.geom.push_back(kernel_dr(kernel, nb.distance) / nb.distance *
                                 ps.volume[nb.index]);
            table.is_dummy.push_back(ps.role[nb.index] == Role::inner ? 0 : 1);
        }
    }
    return table;
}

} // namespace condopt
