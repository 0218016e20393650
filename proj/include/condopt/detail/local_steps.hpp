#pragma once

#include <cstdint>

#include "condopt/cell_grid.hpp"
#include "condopt/particle_system.hpp"

namespace condopt::detail {

// Stack budget for one neighbor stencil; a uniform lattice with support
// 2.6 dx has 20 neighbors, so this leaves generous headroom for custom
// h ratios (checked at domain construction).
inline constexpr std::size_t max_stencil = 96;

// One local gradient-descent step of the implicit temperature equation:
//   B_j  = (k_i + k_j) a_j dt            (a_j = dW/dr / r * V_j, so B_j <= 0)
//   E_i  = -sum B_j (T_i - T_j) - Qdot_i dt
//   eta  = E_i / ((sum B_j - 1)^2 + sum B_j^2)
//   T_i += eta (sum B_j - 1),  T_j -= eta B_j
// The denominator is positive: with all B_j <= 0, (sum B - 1)^2 >= 1.
// Each step zeroes its own linearized residual exactly (single-equation
// least-squares along the gradient), which is the line-search optimality the
// tests assert. Dummy pairs use the pairwise conductivity k_j := k_i.
struct TemperatureStepResult {
    Real sum_b = 0.0;
    Real residual = 0.0;
    Real learning_rate = 0.0;
};

inline TemperatureStepResult temperature_step(ParticleSystem& ps, const NeighborTable& table,
                                              std::uint32_t i, Real dt,
                                              Real* coefficients_out = nullptr)
{
    Real buffer[max_stencil];
    Real* b = coefficients_out ? coefficients_out : buffer;

    const Real k_i = ps.conductivity[i];
    const Real t_i = ps.temperature[i];
    Real sum_b = 0.0;
    Real sum_b2 = 0.0;
    Real sum_bt = 0.0;

    const std::size_t begin = table.row_begin(i);
    const std::size_t end = table.row_end(i);
    for (std::size_t e = begin; e < end; ++e) {
        const std::uint32_t j = table.index[e];
        const Real k_j = table.is_dummy[e] ? k_i : ps.conductivity[j];
        const Real bj = (k_i + k_j) * table.geom[e] * dt;
        b[e - begin] = bj;
        sum_b += bj;
        sum_b2 += bj * bj;
        sum_bt += bj * (t_i - ps.temperature[j]);
    }

    const Real residual = -sum_bt - ps.source_rate[i] * dt;
    const Real eta = residual / ((sum_b - 1.0) * (sum_b - 1.0) + sum_b2);

    ps.temperature[i] = t_i + eta * (sum_b - 1.0);
    for (std::size_t e = begin; e < end; ++e) {
        ps.temperature[table.index[e]] -= eta * b[e - begin];
    }
    return {sum_b, residual, eta};
}

// Design-variable evolution step. The local residual drives the shifted
// conduction residual e_i^c(k) back to the frozen reference e_i^*:
//   C_j  = (T_i - beta - T_j) a_j dtau
//   E    = -dtau (e_i^c(k) -+ e_i^*)
//   eta  = E / ((sum C - 1)^2 + sum C^2)
//   k_i += eta (sum C - 1),  k_j += eta C_j
// Both dk_i and dk_j enter through the pair sum k_i + k_j, hence the plus
// sign on the neighbor update (unlike the difference form above). The
// literal_sign variant keeps the published +e^* term for comparison.
struct ConductivityStepResult {
    Real sum_c = 0.0;
    Real residual = 0.0;
    Real learning_rate = 0.0;
};

inline ConductivityStepResult conductivity_evolve_step(ParticleSystem& ps,
                                                       const NeighborTable& table,
                                                       std::uint32_t i, Real dtau, Real beta,
                                                       const Real* e_star, bool literal_sign,
                                                       Real* coefficients_out = nullptr)
{
    Real buffer[max_stencil];
    Real* c = coefficients_out ? coefficients_out : buffer;

    const Real k_i = ps.conductivity[i];
    const Real tc_i = ps.temperature[i] - beta;
    Real sum_c = 0.0;
    Real sum_c2 = 0.0;
    Real e_shift = ps.source_rate[i];

    const std::size_t begin = table.row_begin(i);
    const std::size_t end = table.row_end(i);
    for (std::size_t e = begin; e < end; ++e) {
        const std::uint32_t j = table.index[e];
        const Real k_j = table.is_dummy[e] ? k_i : ps.conductivity[j];
        const Real ct = (tc_i - ps.temperature[j]) * table.geom[e];
        e_shift += (k_i + k_j) * ct;
        const Real cj = ct * dtau;
        c[e - begin] = cj;
        sum_c += cj;
        sum_c2 += cj * cj;
    }

    const Real drive = literal_sign ? e_shift + e_star[i] : e_shift - e_star[i];
    const Real residual = -drive * dtau;
    const Real eta = residual / ((sum_c - 1.0) * (sum_c - 1.0) + sum_c2);

    ps.conductivity[i] = k_i + eta * (sum_c - 1.0);
    for (std::size_t e = begin; e < end; ++e) {
        ps.conductivity[table.index[e]] += eta * c[e - begin];
    }
    return {sum_c, residual, eta};
}

// Diffusion-analogy regularization step on the conductivity field, same
// difference form as the temperature equation with diffusivity mu and no
// source. Dummy neighbors carry mirrored stored values here.
inline void conductivity_regularize_step(ParticleSystem& ps, const NeighborTable& table,
                                         std::uint32_t i, Real mu, Real dtau)
{
    Real b[max_stencil];

    const Real k_i = ps.conductivity[i];
    Real sum_b = 0.0;
    Real sum_b2 = 0.0;
    Real sum_bk = 0.0;

    const std::size_t begin = table.row_begin(i);
    const std::size_t end = table.row_end(i);
    for (std::size_t e = begin; e < end; ++e) {
        const Real bj = 2.0 * mu * table.geom[e] * dtau;
        b[e - begin] = bj;
        sum_b += bj;
        sum_b2 += bj * bj;
        sum_bk += bj * (k_i - ps.conductivity[table.index[e]]);
    }

    const Real eta = -sum_bk / ((sum_b - 1.0) * (sum_b - 1.0) + sum_b2);
    ps.conductivity[i] = k_i + eta * (sum_b - 1.0);
    for (std::size_t e = begin; e < end; ++e) {
        ps.conductivity[table.index[e]] -= eta * b[e - begin];
    }
}

} // namespace condopt::detail
