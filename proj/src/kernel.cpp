#include "condopt/kernel.hpp"

#include <numbers>
#include <stdexcept>

namespace condopt {

namespace {

constexpr Real pi = std::numbers::pi_v<Real>;

// Wendland C2 in 2D: W = 7/(4*pi*h^2) * (1 - q/2)^4 * (1 + 2q), q = r/h in [0, 2].
Real wendland_value(Real q, Real h)
{
    const Real sigma = 7.0 / (4.0 * pi * h * h);
    const Real t = 1.0 - 0.5 * q;
    return sigma * t * t * t * t * (1.0 + 2.0 * q);
}

Real wendland_dr(Real q, Real h)
{
    // d/dq [(1-q/2)^4 (1+2q)] = -5q (1-q/2)^3
    const Real sigma = 7.0 / (4.0 * pi * h * h);
    const Real t = 1.0 - 0.5 * q;
    return -sigma * 5.0 * q * t * t * t / h;
}

// Cubic B-spline (M4) in 2D: sigma = 10/(7*pi*h^2), support 2h.
Real cubic_value(Real q, Real h)
{
    const Real sigma = 10.0 / (7.0 * pi * h * h);
    if (q < 1.0) {
        return sigma * (1.0 - 1.5 * q * q + 0.75 * q * q * q);
    }
    const Real t = 2.0 - q;
    return sigma * 0.25 * t * t * t;
}

Real cubic_dr(Real q, Real h)
{
    const Real sigma = 10.0 / (7.0 * pi * h * h);
    if (q < 1.0) {
        return sigma * (-3.0 * q + 2.25 * q * q) / h;
    }
    const Real t = 2.0 - q;
    return sigma * (-0.75 * t * t) / h;
}

} // namespace

KernelSpec KernelSpec::make(KernelFamily family, Real smoothing_length)
{
    if (!(smoothing_length > 0.0)) {
        throw std::invalid_argument("kernel smoothing length must be positive");
    }
    KernelSpec spec;
    spec.family = family;
    spec.smoothing_length = smoothing_length;
    spec.support_radius = 2.0 * smoothing_length;
    return spec;
}

Real kernel_value(const KernelSpec& spec, Real r)
{
    if (r >= spec.support_radius) {
        return 0.0;
    }
    const Real q = r / spec.smoothing_length;
    switch (spec.family) {
    case KernelFamily::wendland_c2: return wendland_value(q, spec.smoothing_length);
    case KernelFamily::cubic_spline: return cubic_value(q, spec.smoothing_length);
    }
    return 0.0;
}

Real kernel_dr(const KernelSpec& spec, Real r)
{
    if (r >= spec.support_radius) {
        return 0.0;
    }
    const Real q = r / spec.smoothing_length;
    switch (spec.family) {
    case KernelFamily::wendland_c2: return wendland_dr(q, spec.smoothing_length);
    case KernelFamily::cubic_spline: return cubic_dr(q, spec.smoothing_length);
    }
    return 0.0;
}

KernelFamily kernel_family_from_name(const std::string& name)
{
    if (name == "wendland_c2") {
        return KernelFamily::wendland_c2;
    }
    if (name == "cubic_spline") {
        return KernelFamily::cubic_spline;
    }
    throw std::invalid_argument("unknown kernel family: " + name);
}

std::string kernel_family_name(KernelFamily family)
{
    switch (family) {
    case KernelFamily::wendland_c2: return "wendland_c2";
    case KernelFamily::cubic_spline: return "cubic_spline";
    }
    return "unknown";
}

} // namespace condopt
