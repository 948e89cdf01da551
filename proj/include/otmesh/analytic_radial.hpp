#pragma once

#include "otmesh/grid.hpp"
#include "otmesh/linalg.hpp"
#include "otmesh/mesh.hpp"
#include "otmesh/pchip.hpp"

namespace otmesh {

/// Radially symmetric density 1 + alpha1 * sech^2(alpha2 * (R^2 - a^2)):
/// a sharp peak at the origin when a = 0 ("blow-up") or on the circle R = a
/// ("ring").  alpha_r = alpha1/alpha2 measures the mass carried by the peak;
/// gamma is its point/ring-mass surrogate (the ring counts both flanks).
struct RadialDensity {
    double alpha1 = 1.0;  ///< peak amplitude, > 0
    double alpha2 = 1.0;  ///< inverse width of the peak in R^2, > 0
    double a = 0.0;       ///< feature radius (0 = peak at the origin)
    double r_star = 0.5;  ///< computational disc radius
    double R_star = 0.5;  ///< physical disc radius

    double alpha_r() const { return alpha1 / alpha2; }
    double gamma() const { return a == 0.0 ? alpha_r() : 2.0 * alpha_r(); }
    /// Density value at physical radius R.
    double rho(double R) const;
    /// Density value at a physical point.
    double rho_at(const Vec2& x) const;
    /// Validates positivity of the parameters; throws ConfigError.
    void check() const;
};

/// Boundary normalization (R*^2 + gamma)/r*^2: the mean density of the
/// mapped disc when the peak is fully contained well inside it.
double theta_from_boundary(const RadialDensity& d);

/// Closed-form radial mass integral: F(R) = 2 * integral_0^R rho(s) s ds
///   = R^2 + alpha_r tanh(alpha2 (R^2 - a^2)) + alpha_r tanh(alpha2 a^2).
/// The physical radius R(r) solves F(R) = theta r^2.
double F_of_R(const RadialDensity& d, double R);

/// Exact equidistributing radial mesh map on the disc |xi| <= r_star.
/// Maps circles to circles: |x| = R(|xi|) with the angle preserved.
class RadialMap {
  public:
    /// Builds the map.  The operative normalization is theta = F(R*)/r*^2,
    /// which pins R(r*) = R* exactly; construction fails (ConfigError) if it
    /// disagrees with the boundary surrogate (R*^2 + gamma)/r*^2 by more
    /// than 1e-4 relative, i.e. if the peak is too wide or too close to the
    /// boundary for the surrogate to be meaningful.
    explicit RadialMap(RadialDensity d, int table_size = 4096);

    const RadialDensity& density() const { return d_; }
    double theta() const { return theta_; }

    /// Physical radius R solving F(R) = theta r^2, for r in [0, r_star]:
    /// spline-seeded Newton with a bisection fallback, polished until
    /// |F(R) - theta r^2| <= 1e-12 * max(1, theta r^2).
    double R_of_r(double r) const;
    /// Radial stretch dR/dr = theta r / (R rho(R)); sqrt(theta/rho(0)) at r=0.
    double dR_dr(double r) const;

    /// Computational point -> physical point; throws std::domain_error
    /// outside the disc |xi| <= r_star.
    Vec2 map(const Vec2& xi) const;

    /// Stretch eigenpair at a computational point.  Entries follow the
    /// polar frame: lambda1/e1 radial, lambda2/e2 tangential (not magnitude
    /// ordered).  At xi = 0 the map is isotropic: degenerate flag set and
    /// lambda1 = lambda2 = sqrt(theta/rho(0)).
    EigenPair2 eigenpairs(const Vec2& xi) const;

    /// Skewness from the exact eigenvalues at computational radius r.
    double skewness_exact(double r) const;
    /// Closed-form piecewise skewness approximation (region-wise large-width
    /// asymptotics).  Accurate away from the region boundaries r1, r2; inside
    /// the transition band it is an extrapolation of limited accuracy.
    double skewness_piecewise(double r) const;

    /// Computational radii bounding the transition region of the piecewise
    /// approximation.  Ring: r1 = sqrt((a^2 - 1/alpha2)/theta) (clamped at 0)
    /// and r2 = sqrt((a^2 + 1/alpha2 + 2 alpha_r)/theta).  Blow-up: both
    /// return the radius mapping to the core edge R = 1/sqrt(alpha2).
    double r1() const;
    double r2() const;

    /// Polar structured mesh of the mapped disc: index i = radial stations
    /// r in [0, r_star] (row i = 0 collapses to the centre point), index
    /// j = periodic angular stations.
    MeshMapping polar_mesh(int nr, int nphi) const;

  private:
    RadialDensity d_;
    double theta_ = 1.0;
    PchipSpline seed_;  // tabulated r -> R used to seed the root find
};

inline double radial_R_of_r(const RadialMap& m, double r) { return m.R_of_r(r); }
inline Vec2 radial_map_2d(const RadialMap& m, const Vec2& xi) { return m.map(xi); }
inline EigenPair2 radial_eigenpairs(const RadialMap& m, const Vec2& xi) {
    return m.eigenpairs(xi);
}
inline double radial_skewness_profile(const RadialMap& m, double r) {
    return m.skewness_piecewise(r);
}

/// Peak skewness of the blow-up mesh as a function of the amplitude alone:
/// 0.5 * ((4 + alpha1 tanh 4)/(4 - alpha1 (1 - tanh 4)) + reciprocal).
/// Throws std::domain_error once the denominator closes (alpha1 ~ 5966).
double qs_max_blowup(double alpha1);

/// Scalar n-dimensional radial relation: returns R solving
///   n * integral_0^R rho(s) s^{n-1} ds = theta r^n,
/// with theta chosen so r_star maps to R_star (quadrature + root find).
/// n = 2 reproduces RadialMap::R_of_r.
double radial_relation_nd(const RadialDensity& d, double r, int n);

}  // namespace otmesh
