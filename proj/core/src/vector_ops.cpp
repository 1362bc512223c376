#include "varfield/vector_ops.hpp"

namespace varfield {

Vec3 operator+(const Vec3& a, const Vec3& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

Vec3 operator-(const Vec3& a) { return {-a[0], -a[1], -a[2]}; }

Vec3 operator*(const Expr& s, const Vec3& v) {
    return {s * v[0], s * v[1], s * v[2]};
}

Expr dot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

Vec3 grad(const Expr& s) {
    return {total_derivative(s, 1), total_derivative(s, 2), total_derivative(s, 3)};
}

Expr divergence(const Vec3& v) {
    return total_derivative(v[0], 1) + total_derivative(v[1], 2) + total_derivative(v[2], 3);
}

Vec3 curl(const Vec3& v) {
    return {
        total_derivative(v[2], 2) - total_derivative(v[1], 3),
        total_derivative(v[0], 3) - total_derivative(v[2], 1),
        total_derivative(v[1], 1) - total_derivative(v[0], 2),
    };
}

Expr laplacian(const Expr& s) {
    Expr out;
    for (int i = 1; i <= 3; ++i) out += total_derivative(total_derivative(s, i), i);
    return out;
}

Vec3 dt(const Vec3& v) {
    return {total_derivative(v[0], 0), total_derivative(v[1], 0), total_derivative(v[2], 0)};
}

} // namespace varfield
