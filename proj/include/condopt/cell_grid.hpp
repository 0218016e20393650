#pragma once

#include <cstdint>
#include <vector>

#include "condopt/kernel.hpp"
#include "condopt/particle_system.hpp"

namespace condopt {

/// Uniform background grid for neighbor search. Cells are at least one
/// support radius wide, so neighbors always live in the same or an adjacent
/// cell. Cells are grouped into nine color batches on a stride-3 pattern in
/// each direction; particles of same-colored cells have disjoint
/// neighbor-write sets, which is what the parallel sweeps rely on.
struct CellGrid {
    Real cell_size = 0.0;
    Real support_radius = 0.0;
    Vec2 origin;
    int nx = 0;
    int ny = 0;
    std::vector<std::vector<std::uint32_t>> cells;          // cell -> particles
    std::vector<std::vector<std::uint32_t>> color_batches;  // color -> cells

    int cell_index(Vec2 p) const;
    int color_of_cell(int cell) const;
};

CellGrid build_cell_grid(const ParticleSystem& ps, Real support_radius);

struct Neighbor {
    std::uint32_t index;
    Real distance;  // r_ij
    Vec2 direction; // e_ij = (r_i - r_j) / r_ij
};

/// All particles j != i strictly within the grid's support radius.
std::vector<Neighbor> neighbors(const ParticleSystem& ps, const CellGrid& grid,
                                std::uint32_t i);

/// Flattened neighbor lists with the cached pair factor
/// a_j = (dW/dr)(r_ij) / r_ij * V_j used by every SPH sum. Particles are
/// static, so this is built once per domain.
struct NeighborTable {
    std::vector<std::uint32_t> offsets; // size() + 1
    std::vector<std::uint32_t> index;
    std::vector<Real> geom;             // a_j [1/m^2]
    std::vector<std::uint8_t> is_dummy; // role of the column particle

    std::size_t row_begin(std::uint32_t i) const { return offsets[i]; }
    std::size_t row_end(std::uint32_t i) const { return offsets[i + 1]; }
};

NeighborTable build_neighbor_table(const ParticleSystem& ps, const CellGrid& grid,
                                   const KernelSpec& kernel);

} // namespace condopt
