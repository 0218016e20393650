#pragma once

#include <string>

#include "condopt/geometry.hpp"

namespace condopt {

enum class KernelFamily {
    wendland_c2,
    cubic_spline,
};

/// Smoothing kernel with compact support, 2D normalization. Both families
/// supported here have support radius 2h.
struct KernelSpec {
    KernelFamily family = KernelFamily::wendland_c2;
    Real smoothing_length = 0.0; // h [m]
    Real support_radius = 0.0;   // 2h for both families [m]

    static KernelSpec make(KernelFamily family, Real smoothing_length);
};

/// W(r, h), zero at and beyond the support radius. [1/m^2]
Real kernel_value(const KernelSpec& spec, Real r);

/// dW/dr: zero at r = 0 and beyond the support, strictly negative inside. [1/m^3]
Real kernel_dr(const KernelSpec& spec, Real r);

KernelFamily kernel_family_from_name(const std::string& name);
std::string kernel_family_name(KernelFamily family);

} // namespace condopt
