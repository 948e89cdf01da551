#pragma once

#include <functional>
#include <utility>

#include "otmesh/grid.hpp"
#include "otmesh/linalg.hpp"
#include "otmesh/mesh.hpp"
#include "otmesh/pchip.hpp"

namespace otmesh {

/// Scalar profile of one variable.
using Profile1D = std::function<double(double)>;

/// Separable density rho(x) = rho1(k1 * x.e1) * rho2(k2 * x.e2) whose level
/// sets are straight lines normal to e1 (resp. e2).
///
/// The stored profiles are 1-periodic in their *scaled* argument t = kappa_i
/// times the rotated coordinate x.e_i.  kappa_i converts one unit of rotated
/// coordinate into kappa_i periods, so a diagonal feature frame on the unit
/// square (e1 = (1,1)/sqrt(2), kappa = sqrt(2)) yields a density that is
/// 1-periodic in both x and y.
struct LinearDensity {
    Vec2 e1{1.0, 0.0};  ///< unit normal of the first feature family
    Vec2 e2{0.0, 1.0};  ///< unit normal of the second (orthogonal) family
    Profile1D rho1;     ///< positive, 1-periodic in the scaled coordinate
    Profile1D rho2;
    double kappa1 = 1.0;  ///< scaled periods per unit rotated coordinate
    double kappa2 = 1.0;
    /// Optional closed-form antiderivatives of the scaled profiles with
    /// F(0) = 0; consulted on [0,1] only.  When absent the cumulative table
    /// falls back to adaptive quadrature.
    Profile1D antiderivative1;
    Profile1D antiderivative2;

    /// Density value at a physical point.
    double rho(const Vec2& x) const;

    /// Validates the frame (orthonormal), positivity of the kappas, presence
    /// of the profile callables, and that kappa_i * e_i has integer
    /// components so the density tiles the unit square.  Throws ConfigError.
    void check() const;
};

/// 1-periodic bump train 1 + magnitude * sum_n sech^2(width * (t - n)).
/// The sum is truncated to the bumps within distance 3 of [0,1]; the
/// discarded tail is O(exp(-6 * width)).
Profile1D sech_bump_profile(double magnitude, double width);

/// Closed-form antiderivative of sech_bump_profile with F(0) = 0, valid on
/// [0,1]:  F(t) = t + (magnitude/width) * sum_n [tanh(width (t-n)) - tanh(-width n)].
Profile1D sech_bump_antiderivative(double magnitude, double width);

/// Density with a single diagonal shock layer: bump train of magnitude and
/// width alpha across the direction (1,1)/sqrt(2), uniform along it.  On the
/// unit square the layers sit on x + y = const integers.
LinearDensity single_shock_density(double alpha);

/// Two orthogonal diagonal shock families: the first identical to
/// single_shock_density(alpha), the second a bump train of the given
/// magnitude and width across (-1,1)/sqrt(2) (layers on y - x = const).
LinearDensity crossing_shock_density(double alpha, double magnitude2, double width2);

/// Per-period means (theta1, theta2) of the two scaled profiles; the global
/// density normalization is their product.  Uses the closed-form
/// antiderivatives when available, adaptive quadrature otherwise.  Throws
/// ConfigError if a non-positive density value is sampled.
std::pair<double, double> theta_components(const LinearDensity& d);

/// Tabulated antiderivative R(t) = integral_0^t rho of a positive 1-periodic
/// profile, with a monotone-spline inverse.  Both directions extend
/// quasi-periodically: R(t + 1) = R(t) + theta.
class CumulativeDensity {
  public:
    /// Identity table (rho == 1).
    CumulativeDensity();

    double theta() const { return theta_; }
    /// R(t) for any real t.
    double forward(double t) const;
    /// R^{-1}(y) for any real y, Newton-polished so that
    /// |inverse(forward(t)) - t| is at machine-precision level.
    double inverse(double y) const;
    /// The underlying profile value (argument wrapped by the profile itself).
    double density(double t) const { return rho_(t); }

  private:
    friend CumulativeDensity build_cumulative(Profile1D rho, int nprime,
                                              Profile1D antiderivative);
    Profile1D rho_;
    PchipSpline fwd_;  // R on [0,1]
    PchipSpline inv_;  // R^{-1} on [0,theta]
    double theta_ = 1.0;
};

/// Builds the cumulative table on nprime+1 uniform samples of [0,1].
/// Throws ConfigError if nprime < 100, if a sampled density value is
/// non-positive, or if the tabulated antiderivative fails to increase.
CumulativeDensity build_cumulative(Profile1D rho, int nprime = 1000,
                                   Profile1D antiderivative = {});

/// Exact equidistributing mesh map for a LinearDensity.  The map acts
/// independently in the two rotated coordinates: with t the scaled physical
/// coordinate and tau the scaled computational one, R_i(t) = theta_i * tau.
/// It is doubly periodic: map(xi + p) = map(xi) + p for unit-cell periods p.
class LinearMap {
  public:
    explicit LinearMap(LinearDensity d, int nprime = 1000);

    const LinearDensity& density() const { return d_; }
    const CumulativeDensity& cumulative1() const { return c1_; }
    const CumulativeDensity& cumulative2() const { return c2_; }
    double theta1() const { return c1_.theta(); }
    double theta2() const { return c2_.theta(); }
    /// Global normalization theta1 * theta2 (mean of rho over the unit cell).
    double theta() const { return c1_.theta() * c2_.theta(); }

    /// Computational point -> physical point.
    Vec2 map(const Vec2& xi) const;
    /// Physical point -> computational point (exact inverse of map).
    Vec2 inverse_map(const Vec2& x) const;
    /// Analytic Jacobian dx/dxi at a computational point; symmetric with
    /// eigenvectors e1, e2 and eigenvalues theta_i / rho_i.
    Jacobian2 jacobian(const Vec2& xi) const;

    /// Mesh-stretch eigenpair at a *physical* point.  Unlike eig_sym2 output
    /// the entries follow the feature frame: lambda1 and e1 always refer to
    /// the first (cross-feature) direction regardless of magnitude.
    EigenPair2 eigenvalues_at(const Vec2& x) const;
    /// Skewness 0.5 * (lambda1/lambda2 + lambda2/lambda1) at a physical point.
    double skewness_at(const Vec2& x) const;
    /// Target metric at a physical point (unit alignment for this map).
    MetricTensor2 metric_at(const Vec2& x) const;

    /// Maps every node of the computational grid.
    MeshMapping mesh(const Grid2D& grid) const;

  private:
    LinearDensity d_;
    CumulativeDensity c1_;
    CumulativeDensity c2_;
};

inline Vec2 linear_map(const LinearMap& m, const Vec2& xi) { return m.map(xi); }
inline EigenPair2 linear_eigenvalues(const LinearMap& m, const Vec2& x) {
    return m.eigenvalues_at(x);
}
inline double linear_skewness_profile(const LinearMap& m, const Vec2& x) {
    return m.skewness_at(x);
}

/// Skewness reached inside a shock layer of amplitude alpha for a map with
/// normalization theta: 0.5 * ((1+alpha)/theta + theta/(1+alpha)).
double shock_width_skewness(double alpha, double theta);

/// Leading-order large-alpha approximation (1 + alpha) / (2 theta) of
/// shock_width_skewness; within a few percent once alpha/theta is large.
double shock_width_skewness_asymptotic(double alpha, double theta);

}  // namespace otmesh
