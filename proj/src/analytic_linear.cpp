#include "otmesh/analytic_linear.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "otmesh/errors.hpp"
#include "otmesh/quadrature.hpp"

namespace otmesh {

namespace {

constexpr int kBumpLo = -3;  // bump indices kept around the [0,1] window
constexpr int kBumpHi = 4;

bool near_integer(double v, double tol) { return std::abs(v - std::round(v)) <= tol; }

/// Wraps the profile with a positivity check used while sampling.
double checked_rho(const Profile1D& rho, double t) {
    const double v = rho(t);
    if (!(v > 0.0))
        throw ConfigError("density profile must be positive; sampled " + std::to_string(v) +
                          " at t = " + std::to_string(t));
    return v;
}

}  // namespace

double LinearDensity::rho(const Vec2& x) const {
    return rho1(kappa1 * x.dot(e1)) * rho2(kappa2 * x.dot(e2));
}

void LinearDensity::check() const {
    const double tol = 1e-9;
    if (std::abs(e1.norm() - 1.0) > tol || std::abs(e2.norm() - 1.0) > tol)
        throw ConfigError("feature frame vectors must be unit length");
    if (std::abs(e1.dot(e2)) > tol) throw ConfigError("feature frame vectors must be orthogonal");
    if (!(kappa1 > 0.0) || !(kappa2 > 0.0))
        throw ConfigError("period scale factors kappa must be positive");
    if (!rho1 || !rho2) throw ConfigError("both density profiles must be set");
    // The density tiles the unit square iff kappa_i * e_i has integer entries.
    if (!near_integer(kappa1 * e1.x, tol) || !near_integer(kappa1 * e1.y, tol) ||
        !near_integer(kappa2 * e2.x, tol) || !near_integer(kappa2 * e2.y, tol))
        throw ConfigError(
            "density is not periodic on the unit square: kappa_i * e_i must have "
            "integer components");
}

Profile1D sech_bump_profile(double magnitude, double width) {
    if (magnitude < 0.0 || !(width > 0.0))
        throw ConfigError("bump profile needs magnitude >= 0 and width > 0");
    return [magnitude, width](double t) {
        t -= std::floor(t);  // profile is 1-periodic by construction
        double v = 1.0;
        for (int n = kBumpLo; n <= kBumpHi; ++n) {
            const double c = std::cosh(width * (t - n));
            v += magnitude / (c * c);
        }
        return v;
    };
}

Profile1D sech_bump_antiderivative(double magnitude, double width) {
    if (magnitude < 0.0 || !(width > 0.0))
        throw ConfigError("bump profile needs magnitude >= 0 and width > 0");
    return [magnitude, width](double t) {
        double v = t;
        for (int n = kBumpLo; n <= kBumpHi; ++n)
            v += (magnitude / width) *
                 (std::tanh(width * (t - n)) - std::tanh(width * (0.0 - n)));
        return v;
    };
}

LinearDensity single_shock_density(double alpha) {
    const double s = 1.0 / std::sqrt(2.0);
    LinearDensity d;
    d.e1 = {s, s};
    d.e2 = d.e1.perp();  // (-s, s)
    d.kappa1 = d.kappa2 = std::sqrt(2.0);
    d.rho1 = sech_bump_profile(alpha, alpha);
    d.antiderivative1 = sech_bump_antiderivative(alpha, alpha);
    d.rho2 = [](double) { return 1.0; };
    d.antiderivative2 = [](double t) { return t; };
    return d;
}

LinearDensity crossing_shock_density(double alpha, double magnitude2, double width2) {
    LinearDensity d = single_shock_density(alpha);
    d.rho2 = sech_bump_profile(magnitude2, width2);
    d.antiderivative2 = sech_bump_antiderivative(magnitude2, width2);
    return d;
}

std::pair<double, double> theta_components(const LinearDensity& d) {
    d.check();
    const auto mean = [](const Profile1D& rho, const Profile1D& anti) {
        if (anti) return anti(1.0) - anti(0.0);
        return adaptive_simpson([&rho](double t) { return checked_rho(rho, t); }, 0.0, 1.0,
                                1e-10);
    };
    return {mean(d.rho1, d.antiderivative1), mean(d.rho2, d.antiderivative2)};
}

CumulativeDensity::CumulativeDensity() {
    rho_ = [](double) { return 1.0; };
    fwd_ = pchip_build({0.0, 0.5, 1.0}, {0.0, 0.5, 1.0});
    inv_ = fwd_;
    theta_ = 1.0;
}

double CumulativeDensity::forward(double t) const {
    const double k = std::floor(t);
    return k * theta_ + fwd_.eval(t - k);
}

double CumulativeDensity::inverse(double y) const {
    const double k = std::floor(y / theta_);
    double r = y - k * theta_;
    if (r < 0.0) r = 0.0;
    if (r > theta_) r = theta_;
    double t = k + inv_.eval(r);
    // Newton polish against the forward spline: makes the round trip
    // inverse(forward(t)) == t to machine precision.
    for (int it = 0; it < 8; ++it) {
        const double res = forward(t) - y;
        if (std::abs(res) <= 1e-14 * std::max(1.0, std::abs(y))) break;
        const double slope = std::max(density(t), 1e-12);
        t -= res / slope;
    }
    return t;
}

CumulativeDensity build_cumulative(Profile1D rho, int nprime, Profile1D antiderivative) {
    if (!rho) throw ConfigError("cumulative table needs a density profile");
    if (nprime < 100) throw ConfigError("cumulative table resolution must be at least 100");

    std::vector<double> t(nprime + 1), r(nprime + 1);
    for (int i = 0; i <= nprime; ++i) {
        t[i] = static_cast<double>(i) / nprime;
        checked_rho(rho, t[i]);
    }
    if (antiderivative) {
        const double r0 = antiderivative(0.0);
        for (int i = 0; i <= nprime; ++i) r[i] = antiderivative(t[i]) - r0;
    } else {
        r[0] = 0.0;
        const double seg_tol = 1e-10 / nprime;
        for (int i = 0; i < nprime; ++i)
            r[i + 1] = r[i] + adaptive_simpson([&rho](double s) { return checked_rho(rho, s); },
                                               t[i], t[i + 1], seg_tol);
    }
    for (int i = 0; i < nprime; ++i)
        if (!(r[i + 1] > r[i]))
            throw ConfigError("cumulative density table is not strictly increasing");

    CumulativeDensity c;
    c.rho_ = std::move(rho);
    c.theta_ = r.back();
    c.fwd_ = pchip_build(t, r);
    c.inv_ = pchip_build(std::move(r), std::move(t));
    return c;
}

LinearMap::LinearMap(LinearDensity d, int nprime) : d_(std::move(d)) {
    d_.check();
    c1_ = build_cumulative(d_.rho1, nprime, d_.antiderivative1);
    c2_ = build_cumulative(d_.rho2, nprime, d_.antiderivative2);
}

Vec2 LinearMap::map(const Vec2& xi) const {
    const double tau = d_.kappa1 * xi.dot(d_.e1);
    const double sig = d_.kappa2 * xi.dot(d_.e2);
    const double t = c1_.inverse(theta1() * tau);
    const double s = c2_.inverse(theta2() * sig);
    return d_.e1 * (t / d_.kappa1) + d_.e2 * (s / d_.kappa2);
}

Vec2 LinearMap::inverse_map(const Vec2& x) const {
    const double t = d_.kappa1 * x.dot(d_.e1);
    const double s = d_.kappa2 * x.dot(d_.e2);
    const double tau = c1_.forward(t) / theta1();
    const double sig = c2_.forward(s) / theta2();
    return d_.e1 * (tau / d_.kappa1) + d_.e2 * (sig / d_.kappa2);
}

Jacobian2 LinearMap::jacobian(const Vec2& xi) const {
    const double t = c1_.inverse(theta1() * d_.kappa1 * xi.dot(d_.e1));
    const double s = c2_.inverse(theta2() * d_.kappa2 * xi.dot(d_.e2));
    const double lam1 = theta1() / c1_.density(t);
    const double lam2 = theta2() / c2_.density(s);
    return Mat2::outer(d_.e1, lam1) + Mat2::outer(d_.e2, lam2);
}

EigenPair2 LinearMap::eigenvalues_at(const Vec2& x) const {
    const double rho1 = c1_.density(d_.kappa1 * x.dot(d_.e1));
    const double rho2 = c2_.density(d_.kappa2 * x.dot(d_.e2));
    EigenPair2 p;
    p.lambda1 = theta1() / rho1;
    p.lambda2 = theta2() / rho2;
    p.e1 = d_.e1;
    p.e2 = d_.e2;
    p.degenerate = std::abs(p.lambda1 - p.lambda2) <=
                   1e-10 * std::max(std::abs(p.lambda1), std::abs(p.lambda2));
    return p;
}

double LinearMap::skewness_at(const Vec2& x) const {
    const EigenPair2 p = eigenvalues_at(x);
    const double q = p.lambda1 / p.lambda2;
    return 0.5 * (q + 1.0 / q);
}

MetricTensor2 LinearMap::metric_at(const Vec2& x) const {
    const double rho1 = c1_.density(d_.kappa1 * x.dot(d_.e1));
    const double rho2 = c2_.density(d_.kappa2 * x.dot(d_.e2));
    const double t1 = theta1(), t2 = theta2();
    const Mat2 m = Mat2::outer(d_.e1, t2 * rho1 * rho1 / t1) +
                   Mat2::outer(d_.e2, t1 * rho2 * rho2 / t2);
    MetricTensor2 metric;
    metric.m11 = m.a11;
    metric.m12 = m.a12;
    metric.m22 = m.a22;
    metric.theta = t1 * t2;
    return metric;
}

MeshMapping LinearMap::mesh(const Grid2D& grid) const {
    grid.check();
    MeshMapping out(grid);
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j) out.set_pos(i, j, map({grid.xi(i), grid.eta(j)}));
    return out;
}

double shock_width_skewness(double alpha, double theta) {
    if (!(theta > 0.0) || alpha < 0.0)
        throw std::invalid_argument("shock_width_skewness needs theta > 0 and alpha >= 0");
    const double q = (1.0 + alpha) / theta;
    return 0.5 * (q + 1.0 / q);
}

double shock_width_skewness_asymptotic(double alpha, double theta) {
    if (!(theta > 0.0) || alpha < 0.0)
        throw std::invalid_argument("shock_width_skewness needs theta > 0 and alpha >= 0");
    return (1.0 + alpha) / (2.0 * theta);
}

}  // namespace otmesh
