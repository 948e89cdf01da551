#pragma once

#include <cmath>
#include <stdexcept>

namespace otmesh {

/// 2-vector with the handful of operations the mesh machinery needs.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    /// Counter-clockwise 90-degree rotation.
    Vec2 perp() const { return {-y, x}; }
    Vec2 normalized() const {
        const double n = norm();
        if (n == 0.0) throw std::domain_error("cannot normalize zero vector");
        return {x / n, y / n};
    }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// General 2x2 matrix. Used both for mesh Jacobians (rows are the physical
/// components, columns the computational derivatives: a11 = x_xi, a12 = x_eta,
/// a21 = y_xi, a22 = y_eta) and for intermediate products.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 diagonal(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }
    /// Rank-one symmetric outer product s * v v^T.
    static Mat2 outer(const Vec2& v, double s = 1.0) {
        return {s * v.x * v.x, s * v.x * v.y, s * v.y * v.x, s * v.y * v.y};
    }

    double det() const { return a11 * a22 - a12 * a21; }
    double trace() const { return a11 + a22; }
    double frobenius2() const { return a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22; }
    Mat2 transpose() const { return {a11, a21, a12, a22}; }
    Mat2 symmetric_part() const {
        const double off = 0.5 * (a12 + a21);
        return {a11, off, off, a22};
    }

    Mat2 operator+(const Mat2& o) const {
        return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
    }
    Mat2 operator-(const Mat2& o) const {
        return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
    }
    Mat2 operator*(double s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }
    Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    Vec2 operator*(const Vec2& v) const {
        return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y};
    }
};

/// Mesh Jacobian [x_xi, x_eta; y_xi, y_eta].
using Jacobian2 = Mat2;

/// Symmetric positive-definite 2x2 metric plus its normalization constant.
struct MetricTensor2 {
    double m11 = 1.0, m12 = 0.0, m22 = 1.0;
    double theta = 1.0;

    Mat2 as_mat() const { return {m11, m12, m12, m22}; }
    double det() const { return m11 * m22 - m12 * m12; }
    bool spd() const { return m11 > 0.0 && det() > 0.0; }
};

/// Eigen-decomposition of a symmetric 2x2 matrix.
/// Ordering convention: |lambda1| >= |lambda2|; e1 has nonnegative first
/// component (ties broken by nonnegative second component) so output is
/// deterministic. `degenerate` is set when the eigenvalues coincide to
/// relative precision 1e-10, in which case any orthonormal pair works and
/// (1,0)/(0,1) is returned.
struct EigenPair2 {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    Vec2 e1{1.0, 0.0};
    Vec2 e2{0.0, 1.0};
    bool degenerate = false;
};

/// Closed-form eigendecomposition of (j + j^T)/2.
EigenPair2 eig_sym2(const Mat2& j);

/// Skewness Q_s = tr(J^T J) / (2 sqrt(det(J^T J))) = (s1/s2 + s2/s1)/2 >= 1,
/// where s_i are the singular values. Throws std::domain_error("degenerate
/// element ...") for singular J.
double skewness(const Jacobian2& j);

/// Alignment measure Q_a = tr(K) / (2 sqrt(det K)) with K = sym(J^T M J).
/// Equals 1 exactly when the element is equilateral with respect to m.
double alignment_measure(const Jacobian2& j, const MetricTensor2& m);

/// Metric with the same eigenvectors as sym(j) and eigenvalues
/// theta / lambda_i^2, so that sqrt(det M) * det J = theta.
MetricTensor2 metric_from_jacobian(const Jacobian2& j, double theta);

}  // namespace otmesh
