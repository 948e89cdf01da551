#include "otmesh/analytic_radial.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "otmesh/errors.hpp"
#include "otmesh/quadrature.hpp"

namespace otmesh {

namespace {

double half_sum(double q) { return 0.5 * (q + 1.0 / q); }

}  // namespace

double RadialDensity::rho(double R) const {
    const double c = std::cosh(alpha2 * (R * R - a * a));
    return 1.0 + alpha1 / (c * c);
}

double RadialDensity::rho_at(const Vec2& x) const { return rho(x.norm()); }

void RadialDensity::check() const {
    if (!(alpha1 > 0.0) || !(alpha2 > 0.0))
        throw ConfigError("radial density needs alpha1 > 0 and alpha2 > 0");
    if (a < 0.0) throw ConfigError("radial feature radius a must be >= 0");
    if (!(r_star > 0.0) || !(R_star > 0.0))
        throw ConfigError("disc radii r_star and R_star must be positive");
}

double theta_from_boundary(const RadialDensity& d) {
    return (d.R_star * d.R_star + d.gamma()) / (d.r_star * d.r_star);
}

double F_of_R(const RadialDensity& d, double R) {
    const double r2 = R * R, a2 = d.a * d.a;
    return r2 + d.alpha_r() * (std::tanh(d.alpha2 * (r2 - a2)) + std::tanh(d.alpha2 * a2));
}

RadialMap::RadialMap(RadialDensity d, int table_size) : d_(std::move(d)) {
    d_.check();
    if (table_size < 16) throw ConfigError("radial map table needs at least 16 samples");

    theta_ = F_of_R(d_, d_.R_star) / (d_.r_star * d_.r_star);
    const double surrogate = theta_from_boundary(d_);
    if (std::abs(theta_ - surrogate) > 1e-4 * surrogate)
        throw ConfigError("radial normalization mismatch: exact theta " +
                          std::to_string(theta_) + " vs boundary surrogate " +
                          std::to_string(surrogate) +
                          " (peak too wide or too close to the boundary)");

    std::vector<double> rs(table_size + 1), Rs(table_size + 1);
    seed_ = PchipSpline{};  // R_of_r below must not consult the empty seed
    for (int i = 0; i <= table_size; ++i) {
        rs[i] = d_.r_star * static_cast<double>(i) / table_size;
        Rs[i] = R_of_r(rs[i]);
    }
    seed_ = pchip_build(std::move(rs), std::move(Rs));
}

double RadialMap::R_of_r(double r) const {
    if (r < 0.0 || r > d_.r_star * (1.0 + 1e-12))
        throw std::domain_error("radius " + std::to_string(r) +
                                " outside the computational disc [0, " +
                                std::to_string(d_.r_star) + "]");
    if (r == 0.0) return 0.0;
    r = std::min(r, d_.r_star);

    const double target = theta_ * r * r;
    const double tol = 1e-13 * std::max(1.0, target);
    double hi = std::sqrt(target);  // F(R) >= R^2, so the root is below
    double R = seed_.x.empty() ? hi : std::min(seed_.eval(r), hi);

    const auto newton = [&](double guess, int steps) {
        for (int it = 0; it < steps; ++it) {
            const double res = F_of_R(d_, guess) - target;
            if (std::abs(res) <= tol) return guess;
            const double slope = 2.0 * guess * d_.rho(guess);
            if (!(slope > 0.0)) break;
            double next = guess - res / slope;
            if (next <= 0.0 || next > hi * (1.0 + 1e-12)) break;  // left the bracket
            guess = next;
        }
        return guess;
    };

    R = newton(R, 8);
    if (std::abs(F_of_R(d_, R) - target) > tol) {
        double lo = 0.0, up = hi;
        for (int it = 0; it < 80 && up - lo > 1e-10 * std::max(1.0, up); ++it) {
            const double mid = 0.5 * (lo + up);
            (F_of_R(d_, mid) < target ? lo : up) = mid;
        }
        R = newton(0.5 * (lo + up), 5);
    }
    return R;
}

double RadialMap::dR_dr(double r) const {
    if (r == 0.0) return std::sqrt(theta_ / d_.rho(0.0));
    const double R = R_of_r(r);
    return theta_ * r / (R * d_.rho(R));
}

Vec2 RadialMap::map(const Vec2& xi) const {
    const double r = xi.norm();
    if (r == 0.0) return {0.0, 0.0};
    const double R = R_of_r(r);
    return xi * (R / r);
}

EigenPair2 RadialMap::eigenpairs(const Vec2& xi) const {
    EigenPair2 p;
    const double r = xi.norm();
    if (r == 0.0) {
        p.lambda1 = p.lambda2 = std::sqrt(theta_ / d_.rho(0.0));
        p.degenerate = true;
        return p;
    }
    const double R = R_of_r(r);
    p.e1 = xi / r;        // radial
    p.e2 = p.e1.perp();   // tangential
    p.lambda2 = R / r;
    p.lambda1 = theta_ / (d_.rho(R) * p.lambda2);
    p.degenerate = std::abs(p.lambda1 - p.lambda2) <=
                   1e-10 * std::max(std::abs(p.lambda1), std::abs(p.lambda2));
    return p;
}

double RadialMap::skewness_exact(double r) const {
    if (r == 0.0) return 1.0;
    const EigenPair2 p = eigenpairs({r, 0.0});
    return half_sum(p.lambda1 / p.lambda2);
}

double RadialMap::skewness_piecewise(double r) const {
    if (r < 0.0 || r > d_.r_star * (1.0 + 1e-12))
        throw std::domain_error("radius outside the computational disc");
    const double tr2 = theta_ * r * r;
    const double ar = d_.alpha_r();
    if (d_.a == 0.0) {
        const double R = R_of_r(r);
        const double core_edge = 1.0 / std::sqrt(d_.alpha2);
        // Within the peak the density is nearly flat at 1 + alpha1; outside,
        // the peak acts as a point mass of strength alpha_r.  The outer form
        // has a pole just past the core edge; fall back to the core form
        // whenever it is on the wrong side of its pole.
        if (R < core_edge || tr2 <= ar) return half_sum((1.0 + d_.alpha1) / d_.rho(R));
        return half_sum(tr2 / (tr2 - ar));
    }
    if (r < r1()) return 1.0;
    const double R = R_of_r(r);
    if (r <= r2())
        return half_sum(tr2 * (1.0 + d_.alpha1) /
                        (d_.rho(R) * (tr2 - ar + d_.alpha1 * d_.a * d_.a)));
    return half_sum(tr2 / (d_.rho(R) * (tr2 - 2.0 * ar)));
}

double RadialMap::r1() const {
    if (d_.a == 0.0) {
        const double core_edge = 1.0 / std::sqrt(d_.alpha2);
        return std::sqrt(F_of_R(d_, core_edge) / theta_);
    }
    const double s = d_.a * d_.a - 1.0 / d_.alpha2;
    return s <= 0.0 ? 0.0 : std::sqrt(s / theta_);
}

double RadialMap::r2() const {
    if (d_.a == 0.0) return r1();
    return std::sqrt((d_.a * d_.a + 1.0 / d_.alpha2 + 2.0 * d_.alpha_r()) / theta_);
}

MeshMapping RadialMap::polar_mesh(int nr, int nphi) const {
    Grid2D g;
    g.nx = nr;
    g.ny = nphi;
    g.x0 = 0.0;
    g.x1 = d_.r_star;
    g.y0 = 0.0;
    g.y1 = 2.0 * std::acos(-1.0);
    g.bcy = AxisBC::periodic;
    g.check();
    MeshMapping out(g);
    for (int i = 0; i < nr; ++i) {
        const double R = R_of_r(g.xi(i));
        for (int j = 0; j < nphi; ++j) {
            const double phi = g.eta(j);
            out.set_pos(i, j, {R * std::cos(phi), R * std::sin(phi)});
        }
    }
    return out;
}

double qs_max_blowup(double alpha1) {
    if (!(alpha1 > 0.0)) {
        if (alpha1 == 0.0) return 1.0;
        throw std::domain_error("qs_max_blowup needs alpha1 >= 0");
    }
    const double t4 = std::tanh(4.0);
    const double den = 4.0 - alpha1 * (1.0 - t4);
    if (den <= 0.0)
        throw std::domain_error("peak-skewness formula out of validity range: amplitude " +
                                std::to_string(alpha1) + " closes the denominator");
    return half_sum((4.0 + alpha1 * t4) / den);
}

double radial_relation_nd(const RadialDensity& d, double r, int n) {
    d.check();
    if (n < 1) throw ConfigError("radial relation needs dimension n >= 1");
    if (r < 0.0 || r > d.r_star * (1.0 + 1e-12))
        throw std::domain_error("radius outside the computational disc");
    if (r == 0.0) return 0.0;
    r = std::min(r, d.r_star);

    const auto mass = [&](double R) {  // n * integral_0^R rho s^{n-1} ds
        return static_cast<double>(n) *
               adaptive_simpson(
                   [&](double s) { return d.rho(s) * std::pow(s, n - 1); }, 0.0, R, 1e-13);
    };
    const double theta = mass(d.R_star) / std::pow(d.r_star, n);
    const double target = theta * std::pow(r, n);
    const double hi = std::pow(target, 1.0 / n);  // mass(R) >= R^n brackets above
    double lo = 0.0, up = hi;
    for (int it = 0; it < 60 && up - lo > 1e-11 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + up);
        (mass(mid) < target ? lo : up) = mid;
    }
    double R = 0.5 * (lo + up);
    for (int it = 0; it < 5; ++it) {  // Newton polish
        const double res = mass(R) - target;
        const double slope = n * d.rho(R) * std::pow(R, n - 1);
        if (!(slope > 0.0)) break;
        const double next = R - res / slope;
        if (next <= 0.0 || next > hi * (1.0 + 1e-12)) break;
        R = next;
    }
    return R;
}

}  // namespace otmesh
