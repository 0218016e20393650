#pragma once

#include <cmath>

namespace condopt {

using Real = double;

struct Vec2 {
    Real x = 0.0;
    Real y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(Real s) const { return {x * s, y * s}; }
    Vec2 operator/(Real s) const { return {x / s, y / s}; }

    Real dot(Vec2 o) const { return x * o.x + y * o.y; }
    Real norm() const { return std::hypot(x, y); }
    Real squared_norm() const { return x * x + y * y; }
};

inline Vec2 operator*(Real s, Vec2 v) { return v * s; }

} // namespace condopt
