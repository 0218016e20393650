#include "condopt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "condopt/detail/local_steps.hpp"

namespace condopt {

ResidualStats impose_target(ParticleSystem& ps, const NeighborTable& table, Real beta)
{
    refresh_boundary_temperatures(ps);
    ResidualStats stats;
    stats.per_particle.resize(ps.inner.size());
    Real total = 0.0;
    for (std::uint32_t i : ps.inner) {
        const Real k_i = ps.conductivity[i];
        const Real tc_i = ps.temperature[i] - beta;
        Real e = ps.source_rate[i];
        for (std::size_t n = table.row_begin(i); n < table.row_end(i); ++n) {
            const std::uint32_t j = table.index[n];
            const Real k_j = table.is_dummy[n] ? k_i : ps.conductivity[j];
            e += (k_i + k_j) * ((tc_i - ps.temperature[j]) * table.geom[n]);
        }
        stats.per_particle[i] = e;
        const Real a = std::abs(e);
        total += a;
        stats.max_abs = std::max(stats.max_abs, a);
    }
    stats.mean_abs = total / static_cast<Real>(ps.inner.size());
    return stats;
}

LocalImplicitSystem conductivity_local_step(ParticleSystem& ps, const NeighborTable& table,
                                            std::uint32_t i, Real dtau, Real beta,
                                            const std::vector<Real>& e_star, bool literal_sign)
{
    LocalImplicitSystem sys;
    const std::size_t width = table.row_end(i) - table.row_begin(i);
    sys.coefficients.resize(width);

    const auto r = detail::conductivity_evolve_step(ps, table, i, dtau, beta, e_star.data(),
                                                    literal_sign, sys.coefficients.data());
    sys.residual = r.residual;
    sys.learning_rate = r.learning_rate;
    sys.increment_self = r.learning_rate * (r.sum_c - 1.0);
    sys.increments.resize(width);
    for (std::size_t m = 0; m < width; ++m) {
        sys.increments[m] = r.learning_rate * sys.coefficients[m];
    }
    return sys;
}

namespace {

void clip_conductivity(ParticleSystem& ps, Real floor)
{
    for (std::uint32_t i : ps.inner) {
        ps.conductivity[i] = std::max(ps.conductivity[i], floor);
    }
}

Real inner_mean_conductivity(const ParticleSystem& ps)
{
    Real weighted = 0.0;
    Real total = 0.0;
    for (std::uint32_t i : ps.inner) {
        weighted += ps.conductivity[i] * ps.volume[i];
        total += ps.volume[i];
    }
    return weighted / total;
}

} // namespace

void evolve_k(Domain& domain, Real dtau, Real beta, const std::vector<Real>& e_star,
              bool literal_sign, Real k_floor, const Sweeper& sweeper)
{
    ParticleSystem& ps = domain.ps;
    const NeighborTable& table = domain.table;
    const Real half = 0.5 * dtau;

    refresh_boundary_temperatures(ps);
    sweeper.half_sweep(ps, false, [&](std::uint32_t i) {
        detail::conductivity_evolve_step(ps, table, i, half, beta, e_star.data(), literal_sign);
    });
    sweeper.half_sweep(ps, true, [&](std::uint32_t i) {
        detail::conductivity_evolve_step(ps, table, i, half, beta, e_star.data(), literal_sign);
    });
    clip_conductivity(ps, k_floor);
    refresh_dummy_conductivity(ps);
}

void renormalize_k(ParticleSystem& ps, Real k0, Real k_floor)
{
    const Real target = k0;
    for (int pass = 0; pass < 100; ++pass) {
        const Real mean = inner_mean_conductivity(ps);
        if (!(mean > 0.0)) {
            throw std::runtime_error("conductivity mean vanished during renormalization");
        }
        if (std::abs(mean - target) <= 1e-10 * target) {
            refresh_dummy_conductivity(ps);
            return;
        }
        const Real scale = target / mean;
        for (std::uint32_t i : ps.inner) {
            ps.conductivity[i] = std::max(ps.conductivity[i] * scale, k_floor);
        }
    }
    throw std::runtime_error("conductivity renormalization did not settle; "
                             "budget k0 may be unreachable above the floor");
}

Real regularize_k(Domain& domain, Real mu, Real dtau, Real k_floor, const Sweeper& sweeper)
{
    ParticleSystem& ps = domain.ps;
    const NeighborTable& table = domain.table;
    const Real half = 0.5 * dtau;

    std::vector<Real> before(ps.inner.size());
    for (std::uint32_t i : ps.inner) {
        before[i] = ps.conductivity[i];
    }

    refresh_dummy_conductivity(ps);
    sweeper.half_sweep(ps, false, [&](std::uint32_t i) {
        detail::conductivity_regularize_step(ps, table, i, mu, half);
    });
    refresh_dummy_conductivity(ps);
    sweeper.half_sweep(ps, true, [&](std::uint32_t i) {
        detail::conductivity_regularize_step(ps, table, i, mu, half);
    });
    clip_conductivity(ps, k_floor);
    refresh_dummy_conductivity(ps);

    Real change = 0.0;
    for (std::uint32_t i : ps.inner) {
        change = std::max(change, std::abs(ps.conductivity[i] - before[i]));
    }
    return change;
}

RelaxResult pde_relax(Domain& domain, const ResidualStats& previous, int cap,
                      const TimeStepPolicy& policy, const Sweeper& sweeper)
{
    RelaxResult result;
    const Real h = domain.kernel.smoothing_length;
    const Real dt = policy.step(h, domain.ps.max_conductivity());

    result.stats = compute_residuals(domain.ps, domain.table);
    while (!(result.stats.max_abs < previous.max_abs &&
             result.stats.mean_abs < previous.mean_abs)) {
        if (result.steps >= cap) {
            result.capped = true;
            break;
        }
        strang_sweep(domain.ps, domain.table, dt, sweeper);
        ++result.steps;
        result.stats = compute_residuals(domain.ps, domain.table);
    }
    result.avg_T = domain.ps.average_temperature();
    return result;
}

void update_schedules(OptimizerState& state, const OptimizerOptions& options, Real new_avg_T)
{
    const Real factor =
        new_avg_T < state.prev_avg_T ? options.schedule_growth : options.schedule_decay;
    state.beta *= factor;
    state.mu *= factor;
    if (options.beta0 > 0.0) {
        state.beta = std::clamp(state.beta, options.beta_floor,
                                options.beta_ceiling_factor * options.beta0);
    }
    state.mu = std::clamp(state.mu, options.mu_floor, options.mu_ceiling_factor * options.mu0);
    state.prev_avg_T = new_avg_T;
}

OptimizationReport run_optimization(Domain& domain, const OptimizerOptions& options,
                                    const Sweeper& sweeper)
{
    ParticleSystem& ps = domain.ps;
    OptimizationReport report;
    OptimizerState state;
    state.beta = options.beta0;
    state.mu = options.mu0;
    state.k0 = domain.spec.k0;
    state.domain_volume = ps.domain_area();
    report.min_conductivity_seen = std::numeric_limits<Real>::infinity();

    // Initialization: uniform budget conductivity, assigned initial
    // temperature (seeded uniform in [base, base + 50] or the symmetric
    // constant field), residual statistics of that state.
    std::fill(ps.conductivity.begin(), ps.conductivity.end(), state.k0);
    const Real base = domain.spec.min_sink_temperature();
    if (options.constant_init) {
        for (std::uint32_t i : ps.inner) {
            ps.temperature[i] = base + 25.0;
        }
    } else {
        std::uint64_t s = options.seed ? options.seed : 0x9e3779b97f4a7c15ULL;
        auto next_unit = [&s]() {
            // splitmix64; fixed algorithm so runs are reproducible across
            // standard libraries.
            s += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = s;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            z ^= z >> 31;
            return static_cast<Real>(z >> 11) * 0x1.0p-53;
        };
        for (std::uint32_t i : ps.inner) {
            ps.temperature[i] = base + 50.0 * next_unit();
        }
    }
    refresh_boundary_temperatures(ps);

    if (options.presolve) {
        SteadySolveOptions steady;
        steady.policy = options.policy;
        steady.tolerance = options.steady_tolerance;
        steady.max_steps = options.steady_max_steps;
        solve_steady(domain, steady, sweeper);
    }

    state.prev_avg_T = ps.average_temperature();
    report.initial_avg_T = state.prev_avg_T;
    state.prev_stats = compute_residuals(ps, domain.table);

    const Real h = domain.kernel.smoothing_length;
    for (state.loop_index = 1; state.loop_index <= options.loop_cap; ++state.loop_index) {
        // Step 1 + 2: the target shift enters the evolution residual directly.
        const Real dt_loop = options.policy.step(h, ps.max_conductivity());
        evolve_k(domain, dt_loop, state.beta, state.prev_stats.per_particle,
                 options.literal_recovery_sign, options.k_floor, sweeper);
        renormalize_k(ps, state.k0, options.k_floor);

        const Real dtau_reg = options.reg_shares_pde_step
                                  ? options.policy.step(h, ps.max_conductivity())
                                  : options.policy.dt_multiplier * 0.5 * h * h / state.mu;
        const Real k_change = regularize_k(domain, state.mu, dtau_reg, options.k_floor, sweeper);
        renormalize_k(ps, state.k0, options.k_floor);

        const Real mean_k = inner_mean_conductivity(ps);
        report.max_constraint_violation =
            std::max(report.max_constraint_violation, std::abs(mean_k - state.k0) / state.k0);
        Real min_k = std::numeric_limits<Real>::infinity();
        for (std::uint32_t i : ps.inner) {
            min_k = std::min(min_k, ps.conductivity[i]);
        }
        report.min_conductivity_seen = std::min(report.min_conductivity_seen, min_k);

        // Step 3: advance the PDE until both residual gauges improve.
        const RelaxResult relax =
            pde_relax(domain, state.prev_stats, options.relax_cap, options.policy, sweeper);
        state.inner_steps_total += relax.steps;

        const Real new_avg_T = relax.avg_T;
        const Real dT = std::abs(new_avg_T - state.prev_avg_T);
        report.history.push_back({state.loop_index, new_avg_T, relax.stats.max_abs,
                                  relax.stats.mean_abs, state.beta, state.mu, relax.steps});

        const bool done = relax.stats.max_abs < options.tol_e_max && dT < options.tol_avg_dT &&
                          k_change < options.tol_dk;
        update_schedules(state, options, new_avg_T);
        state.prev_stats = relax.stats;

        if (done) {
            report.converged = true;
            report.reason = "residual, temperature and conductivity thresholds met";
            break;
        }
    }
    if (!report.converged) {
        report.reason = "loop cap reached";
    }

    report.final_avg_T = state.prev_avg_T;
    report.total_pde_steps = state.inner_steps_total;
    report.final_temperature = ps.temperature;
    report.final_conductivity = ps.conductivity;
    if (report.history.empty()) {
        report.min_conductivity_seen = domain.spec.k0;
    }
    return report;
}

} // namespace condopt
