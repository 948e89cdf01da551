#include "otmesh/feature_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "otmesh/errors.hpp"

namespace otmesh {

void FeatureCurve::check() const {
    if (!psi || !grad || !hessian)
        throw ConfigError("feature curve needs psi, gradient, and Hessian callables");
}

Vec2 FeatureCurve::normal(Vec2 x) const {
    const Vec2 g = grad(x);
    const double n = g.norm();
    if (!(n > 0.0))
        throw std::domain_error("level-set gradient vanishes at the query point");
    return g / n;
}

double FeatureCurve::curvature_radius(Vec2 x) const {
    const Vec2 g = grad(x);
    const Mat2 h = hessian(x).symmetric_part();
    const double denom =
        std::abs(h.a11 * g.y * g.y - 2.0 * h.a12 * g.x * g.y + h.a22 * g.x * g.x);
    const double num = std::pow(g.norm(), 3);
    if (denom == 0.0) return std::numeric_limits<double>::infinity();
    return num / denom;
}

FeatureCurve sine_feature_curve(double amplitude) {
    const double two_pi = 2.0 * std::acos(-1.0);
    FeatureCurve c;
    c.psi = [amplitude, two_pi](Vec2 x) {
        return x.y - amplitude * std::sin(two_pi * (x.x + 0.5));
    };
    c.grad = [amplitude, two_pi](Vec2 x) {
        return Vec2{-amplitude * two_pi * std::cos(two_pi * (x.x + 0.5)), 1.0};
    };
    c.hessian = [amplitude, two_pi](Vec2 x) {
        const double pxx = amplitude * two_pi * two_pi * std::sin(two_pi * (x.x + 0.5));
        return Mat2{pxx, 0.0, 0.0, 0.0};
    };
    return c;
}

DensityField feature_density(const FeatureCurve& curve, double alpha1, double alpha2) {
    curve.check();
    if (!(alpha1 > 0.0) || !(alpha2 > 0.0))
        throw ConfigError("feature density needs alpha1 > 0 and alpha2 > 0");
    const auto psi = curve.psi;
    return DensityField::from_function([psi, alpha1, alpha2](double x, double y) {
        const double s = 1.0 / std::cosh(alpha2 * psi({x, y}));
        return 1.0 + alpha1 * s * s;
    });
}

LocalModelPrediction linear_surrogate(const DensityField& rho, double theta, Vec2 x,
                                      const FeatureCurve& curve) {
    curve.check();
    if (!rho.rho) throw ConfigError("linear surrogate needs a density callable");
    if (!(theta > 0.0)) throw ConfigError("linear surrogate needs theta > 0");
    const double r = rho(x.x, x.y);
    if (!(r > 0.0))
        throw ConfigError("density must be positive at the surrogate point");

    LocalModelPrediction p;
    p.kind = LocalModelKind::linear;
    p.e_normal = curve.normal(x);
    p.e_tangential = p.e_normal.perp();
    p.jac_tangential = 1.0;
    p.jac_normal = theta / r;
    p.met_tangential = theta;
    p.met_normal = r * r / theta;
    return p;
}

LocalModelPrediction radial_surrogate(const RadialDensity& rho_params, Vec2 center,
                                      double theta, Vec2 x) {
    rho_params.check();
    if (!(theta > 0.0)) throw ConfigError("radial surrogate needs theta > 0");

    LocalModelPrediction p;
    p.kind = LocalModelKind::radial;
    const Vec2 d = x - center;
    const double R = d.norm();
    if (R == 0.0) {
        // Isotropic at the fit centre; any orthonormal pair serves.
        const double lam = std::sqrt(theta / rho_params.rho(0.0));
        p.degenerate = true;
        p.jac_tangential = p.jac_normal = lam;
        p.met_tangential = p.met_normal = theta / (lam * lam);
        return p;
    }
    const double f = F_of_R(rho_params, R);
    const double lam_t = R * std::sqrt(theta / f);
    const double lam_n = theta / (rho_params.rho(R) * lam_t);
    p.jac_tangential = lam_t;
    p.jac_normal = lam_n;
    p.met_tangential = theta / (lam_t * lam_t);
    p.met_normal = theta / (lam_n * lam_n);
    p.e_normal = d / R;
    p.e_tangential = p.e_normal.perp();
    return p;
}

AlignmentReport alignment_diagnostics(
    const MeshMapping& mesh, const DensityField& rho, double band_threshold,
    const std::function<LocalModelPrediction(Vec2)>& model,
    const std::function<bool(Vec2)>& region) {
    const Grid2D& g = mesh.grid;
    g.check();
    if (!rho.rho) throw ConfigError("alignment diagnostics needs a density callable");
    if (!model) throw ConfigError("alignment diagnostics needs a model callable");
    if (!(band_threshold > 1.0))
        throw ConfigError("band threshold must exceed the background density 1");

    AlignmentReport report;
    double err_sum = 0.0;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            const Vec2 x = mesh.pos(i, j);
            if (!(rho(x.x, x.y) > band_threshold)) continue;
            if (region && !region(x)) continue;

            const LocalModelPrediction pred = model(x);
            const EigenPair2 eig = eig_sym2(discrete_jacobian(mesh, i, j));

            NodeAlignment node;
            node.i = i;
            node.j = j;
            node.x = x;
            node.near_boundary =
                (g.bcx == AxisBC::neumann && (i < 3 || i >= g.nx - 3)) ||
                (g.bcy == AxisBC::neumann && (j < 3 || j >= g.ny - 3));

            // Match the computed pair to the predicted frame by overlap.
            const double dot_n = std::abs(eig.e1.dot(pred.e_normal));
            const double dot_t = std::abs(eig.e1.dot(pred.e_tangential));
            double lam_n, lam_t, overlap;
            if (dot_n >= dot_t) {
                lam_n = eig.lambda1;
                lam_t = eig.lambda2;
                overlap = dot_n;
            } else {
                lam_t = eig.lambda1;
                lam_n = eig.lambda2;
                overlap = dot_t;
            }
            node.angle_error = (eig.degenerate || pred.degenerate)
                                   ? 0.0
                                   : std::acos(std::min(1.0, overlap));
            node.err_tangential =
                std::abs(lam_t - pred.jac_tangential) / std::abs(pred.jac_tangential);
            node.err_normal =
                std::abs(lam_n - pred.jac_normal) / std::abs(pred.jac_normal);

            ++report.band_count;
            if (!node.near_boundary) {
                ++report.interior_count;
                report.max_angle_interior =
                    std::max(report.max_angle_interior, node.angle_error);
                report.max_err_tangential_interior =
                    std::max(report.max_err_tangential_interior, node.err_tangential);
                report.max_err_normal_interior =
                    std::max(report.max_err_normal_interior, node.err_normal);
                err_sum += 0.5 * (node.err_tangential + node.err_normal);
            }
            report.nodes.push_back(node);
        }

    if (report.nodes.empty())
        throw ConfigError("alignment diagnostics: no node lies in the feature band");
    if (report.interior_count > 0)
        report.mean_eig_err_interior = err_sum / report.interior_count;
    return report;
}

}  // namespace otmesh
