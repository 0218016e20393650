#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "condopt/cell_grid.hpp"
#include "condopt/kernel.hpp"
#include "condopt/particle_system.hpp"
#include "condopt/problem.hpp"
#include "condopt/thread_pool.hpp"

namespace condopt {

struct DomainOptions {
    Real h_ratio = 1.3; // smoothing length as multiple of the lattice spacing
    KernelFamily kernel_family = KernelFamily::wendland_c2;
    // Interior normal used in the flux-to-volume sum. The default mirrors the
    // wall normal (n_i = n_j), which injects exactly the prescribed power in
    // the continuum limit; n_i = 0 is kept as an alternative.
    bool neumann_mirror_normal = true;
};

/// Everything a run needs: the problem, the discretization and the cached
/// neighbor geometry. Particles are static, so grid and table never change.
struct Domain {
    ProblemSpec spec;
    DomainOptions options;
    KernelSpec kernel;
    ParticleSystem ps;
    CellGrid grid;
    NeighborTable table;
};

Domain make_domain(const ProblemSpec& spec, const DomainOptions& options = {});

// --- Boundary treatment -----------------------------------------------------

/// T_w = 2 T_b - T_i at every Dirichlet dummy (i = lattice mirror of w).
void apply_dirichlet(ParticleSystem& ps);

/// T_w = T_i at adiabatic dummies. Neumann dummies mirror the same way: the
/// prescribed flux enters through the volumetric source term instead, so the
/// wall itself conducts nothing.
void apply_adiabatic(ParticleSystem& ps);

void refresh_boundary_temperatures(ParticleSystem& ps);

/// Dummy conductivity follows the mirror particle; used by the
/// regularization sweep (conduction sums use the pairwise rule instead).
void refresh_dummy_conductivity(ParticleSystem& ps);

/// Flux-to-volume discretization of one Neumann segment: per-particle source
/// rates induced by the segment's dummies, zero outside kernel reach of the
/// segment. `influx` > 0 means heat enters the domain.
std::vector<Real> neumann_volumetric(const ParticleSystem& ps, const CellGrid& grid,
                                     const KernelSpec& kernel, int segment_id,
                                     Real influx, bool mirror_normal = true);

// --- Conduction operator and residuals ---------------------------------------

/// dT_i/dt from the SPH conduction sum plus the particle's source rate.
/// Dummy pairs take the pairwise conductivity k_j := k_i.
Real conduction_rhs(const ParticleSystem& ps, const NeighborTable& table, std::uint32_t i);

struct ResidualStats {
    std::vector<Real> per_particle; // indexed by inner particle index
    Real max_abs = 0.0;
    Real mean_abs = 0.0;
};

/// Residuals of the live field over inner particles. Refreshes boundary
/// temperatures first so the result is well defined after any sweep.
ResidualStats compute_residuals(ParticleSystem& ps, const NeighborTable& table);

// --- Splitting-operator implicit scheme --------------------------------------

struct LocalImplicitSystem {
    std::vector<Real> coefficients;  // B_j per neighbor, table row order
    Real residual = 0.0;             // E_i
    Real learning_rate = 0.0;        // eta_i
    Real increment_self = 0.0;       // change applied to particle i
    std::vector<Real> increments;    // change applied to each neighbor
};

/// One local gradient-descent step of the implicit temperature equation at
/// particle i, applied in place (neighbors included; dummy values are
/// re-derived at the next boundary refresh). Returns the assembled system.
LocalImplicitSystem implicit_local_step(ParticleSystem& ps, const NeighborTable& table,
                                        std::uint32_t i, Real dt);

/// Sweep executor. Default-constructed it runs serial row-major sweeps
/// (the deterministic mode); with threads > 1 it processes the cell grid's
/// color batches in fixed order, particles within a batch concurrently.
class Sweeper {
public:
    Sweeper() = default;
    Sweeper(const Domain& domain, int threads);

    bool parallel() const { return pool_ != nullptr; }

    template <class Step>
    void half_sweep(const ParticleSystem& ps, bool backward, Step&& step) const
    {
        if (!pool_) {
            if (!backward) {
                for (std::uint32_t i : ps.inner) {
                    step(i);
                }
            } else {
                for (auto it = ps.inner.rbegin(); it != ps.inner.rend(); ++it) {
                    step(*it);
                }
            }
            return;
        }
        const auto run_batch = [&](const std::vector<std::uint32_t>& batch) {
            pool_->parallel_for(static_cast<int>(batch.size()),
                                [&](int n) { step(batch[static_cast<std::size_t>(n)]); });
        };
        if (!backward) {
            for (const auto& batch : batches_) {
                run_batch(batch);
            }
        } else {
            for (auto it = batches_.rbegin(); it != batches_.rend(); ++it) {
                run_batch(*it);
            }
        }
    }

private:
    std::shared_ptr<ThreadPool> pool_;
    std::vector<std::vector<std::uint32_t>> batches_; // inner particles per color
};

/// Strang sweep: boundary refresh + forward half-sweep at dt/2, then refresh
/// + backward half-sweep at dt/2.
void strang_sweep(ParticleSystem& ps, const NeighborTable& table, Real dt,
                  const Sweeper& sweeper = {});

/// Forward-Euler step of all inner particles simultaneously (consistency
/// reference for the implicit scheme).
void explicit_advance(ParticleSystem& ps, const NeighborTable& table, Real dt);

// --- Steady-state driver ------------------------------------------------------

struct TimeStepPolicy {
    Real dt_multiplier = 10.0;

    Real diffusive_dt(Real smoothing_length, Real k_max) const
    {
        return 0.5 * smoothing_length * smoothing_length / k_max; // rho C = 1
    }
    Real step(Real smoothing_length, Real k_max) const
    {
        return dt_multiplier * diffusive_dt(smoothing_length, k_max);
    }
};

struct SteadySolveOptions {
    TimeStepPolicy policy;
    Real tolerance = 1e-3;   // on the max-abs residual [K/s]
    long max_steps = 200000;
    bool explicit_mode = false;
    // Forward Euler needs a fraction of the diffusive step: the discrete
    // operator's spectral radius exceeds the 0.5 h^2 / k heuristic by ~2.3x
    // on this stencil, so the full diffusive_dt diverges.
    Real explicit_dt_fraction = 0.2;
};

struct SteadySolveResult {
    ResidualStats stats;
    long steps = 0;
    bool converged = false;
};

SteadySolveResult solve_steady(Domain& domain, const SteadySolveOptions& options,
                               const Sweeper& sweeper = {});

} // namespace condopt
