#include "otmesh/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace otmesh {

namespace {

constexpr double kDegenerateRel = 1e-10;

/// Flip v so its first nonzero component (checking x then y) is nonnegative.
Vec2 canonical_sign(Vec2 v) {
    if (v.x < 0.0 || (v.x == 0.0 && v.y < 0.0)) return {-v.x, -v.y};
    return v;
}

}  // namespace

EigenPair2 eig_sym2(const Mat2& j) {
    const Mat2 s = j.symmetric_part();
    const double a = s.a11, b = s.a12, c = s.a22;
    const double mid = 0.5 * (a + c);
    const double half_gap = std::hypot(0.5 * (a - c), b);

    EigenPair2 out;
    const double lo = mid - half_gap;
    const double hi = mid + half_gap;
    const double scale = std::max(std::abs(lo), std::abs(hi));
    if (2.0 * half_gap <= kDegenerateRel * scale || scale == 0.0) {
        out.lambda1 = out.lambda2 = mid;
        out.degenerate = true;
        return out;  // default axes: any orthonormal pair is valid
    }

    // Eigenvector for `hi`: pick the better-conditioned of the two column
    // forms of (S - hi I) kernel.
    Vec2 v1{b, hi - a};
    Vec2 v2{hi - c, b};
    Vec2 e_hi = (v1.norm() >= v2.norm()) ? v1 : v2;
    e_hi = canonical_sign(e_hi.normalized());
    Vec2 e_lo = canonical_sign(e_hi.perp());

    if (std::abs(hi) >= std::abs(lo)) {
        out.lambda1 = hi;
        out.lambda2 = lo;
        out.e1 = e_hi;
        out.e2 = e_lo;
    } else {
        out.lambda1 = lo;
        out.lambda2 = hi;
        out.e1 = e_lo;
        out.e2 = e_hi;
    }
    return out;
}

double skewness(const Jacobian2& j) {
    const double tr = j.frobenius2();        // tr(J^T J)
    const double d = j.det();                // det(J^T J) = d^2
    const double det_g = d * d;
    if (!(det_g > 0.0)) throw std::domain_error("degenerate element: singular Jacobian in skewness");
    return 0.5 * tr / std::sqrt(det_g);
}

double alignment_measure(const Jacobian2& j, const MetricTensor2& m) {
    if (!m.spd()) throw std::domain_error("alignment_measure: metric not positive definite");
    const Mat2 k = (j.transpose() * m.as_mat() * j).symmetric_part();
    const double det_k = k.det();
    if (!(det_k > 0.0)) throw std::domain_error("degenerate element: singular J^T M J in alignment_measure");
    return 0.5 * k.trace() / std::sqrt(det_k);
}

MetricTensor2 metric_from_jacobian(const Jacobian2& j, double theta) {
    if (!(theta > 0.0)) throw std::domain_error("metric_from_jacobian: theta must be positive");
    const EigenPair2 eig = eig_sym2(j);
    if (eig.lambda1 == 0.0 || eig.lambda2 == 0.0)
        throw std::domain_error("degenerate element: singular Jacobian in metric_from_jacobian");
    const double inv1 = theta / (eig.lambda1 * eig.lambda1);
    const double inv2 = theta / (eig.lambda2 * eig.lambda2);
    const Mat2 m = Mat2::outer(eig.e1, inv1) + Mat2::outer(eig.e2, inv2);
    MetricTensor2 out;
    out.m11 = m.a11;
    out.m12 = 0.5 * (m.a12 + m.a21);
    out.m22 = m.a22;
    out.theta = theta;
    return out;
}

}  // namespace otmesh
