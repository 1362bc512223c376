#pragma once

#include "varfield/expr.hpp"

#include <array>

namespace varfield {

using Vec3 = std::array<Expr, 3>;

Vec3 operator+(const Vec3& a, const Vec3& b);
Vec3 operator-(const Vec3& a, const Vec3& b);
Vec3 operator-(const Vec3& a);
Vec3 operator*(const Expr& s, const Vec3& v);

Expr dot(const Vec3& a, const Vec3& b);

// Spatial operators built from total derivatives wrt x1..x3.
Vec3 grad(const Expr& s);
Expr divergence(const Vec3& v);
Vec3 curl(const Vec3& v);
Expr laplacian(const Expr& s);
Vec3 dt(const Vec3& v);

} // namespace varfield
