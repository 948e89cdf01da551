#pragma once

#include <functional>
#include <vector>

#include "otmesh/analytic_radial.hpp"
#include "otmesh/density.hpp"
#include "otmesh/linalg.hpp"
#include "otmesh/mesh.hpp"

namespace otmesh {

/// Scalar level-set description of a thin feature: the curve sits on
/// psi = 0 and the density decays with |psi|.  The derivative callables are
/// analytic, supplied by the scenario that owns the curve.
struct FeatureCurve {
    std::function<double(Vec2)> psi;
    std::function<Vec2(Vec2)> grad;
    std::function<Mat2(Vec2)> hessian;  ///< symmetric second derivatives

    /// Validates that all three callables are present; throws ConfigError.
    void check() const;
    /// Unit normal grad/|grad|; throws std::domain_error where the gradient
    /// vanishes.
    Vec2 normal(Vec2 x) const;
    /// Level-set curvature radius
    ///   |grad|^3 / |psi_xx psi_y^2 - 2 psi_xy psi_x psi_y + psi_yy psi_x^2|,
    /// +infinity on straight stretches.
    double curvature_radius(Vec2 x) const;
};

/// The sinusoidal feature curve psi = y - amplitude * sin(2 pi (x + 1/2)):
/// a periodic wave crossing the unit square centred on the origin, with a
/// crest at x = -1/4 and a trough at x = +1/4.
FeatureCurve sine_feature_curve(double amplitude = 0.2);

/// Density 1 + alpha1 * sech^2(alpha2 * psi) concentrated along the curve.
DensityField feature_density(const FeatureCurve& curve, double alpha1, double alpha2);

enum class LocalModelKind { linear, radial };

/// Closed-form local prediction of the mesh response at one physical point:
/// stretch factors of the map and eigenvalues of the corresponding metric,
/// split into the direction along the feature (tangential) and across it
/// (normal), together with the predicted principal directions.
struct LocalModelPrediction {
    double jac_tangential = 1.0;
    double jac_normal = 1.0;
    double met_tangential = 1.0;
    double met_normal = 1.0;
    Vec2 e_tangential{1.0, 0.0};
    Vec2 e_normal{0.0, 1.0};
    LocalModelKind kind = LocalModelKind::linear;
    bool degenerate = false;  ///< isotropic point (e.g. a radial fit centre)
};

/// Straight-feature model: no stretch along the feature (factor 1) and
/// theta/rho across it, so the metric eigenvalues are theta (tangential)
/// and rho^2/theta (normal), with the normal direction grad psi / |grad psi|.
/// Exact for straight level sets; a local approximation for curved ones.
LocalModelPrediction linear_surrogate(const DensityField& rho, double theta, Vec2 x,
                                      const FeatureCurve& curve);

/// Curved-feature model: treats the neighbourhood as part of a radially
/// symmetric density about `center` and evaluates the exact radial stretch
/// factors at R = |x - center| under the *supplied* normalization theta
/// (taken from the true density, not the radial stand-in).
LocalModelPrediction radial_surrogate(const RadialDensity& rho_params, Vec2 center,
                                      double theta, Vec2 x);

/// One node's comparison between the computed mesh Jacobian and a local
/// model: the computed eigenvector pair is matched to the predicted pair by
/// largest overlap, then compared direction-by-direction.
struct NodeAlignment {
    int i = 0, j = 0;
    Vec2 x;                       ///< physical node position
    double angle_error = 0.0;     ///< radians between matched eigenvectors
    double err_tangential = 0.0;  ///< relative stretch error along the feature
    double err_normal = 0.0;      ///< relative stretch error across it
    bool near_boundary = false;   ///< within 3 cells of a Neumann edge
};

struct AlignmentReport {
    std::vector<NodeAlignment> nodes;  ///< every compared (in-band) node
    int band_count = 0;
    int interior_count = 0;          ///< band nodes not near a Neumann edge
    double max_angle_interior = 0.0;
    double max_err_tangential_interior = 0.0;
    double max_err_normal_interior = 0.0;
    double mean_eig_err_interior = 0.0;  ///< mean of (err_t + err_n)/2
};

/// Compares the discrete Jacobian of `mesh` against a local model at every
/// node whose physical density exceeds band_threshold (optionally further
/// restricted by a physical-space `region` predicate).  Nodes within 3 cells
/// of a Neumann edge are flagged and excluded from the aggregates, since the
/// boundary conditions distort the alignment there.  Throws ConfigError if
/// no node qualifies.
AlignmentReport alignment_diagnostics(
    const MeshMapping& mesh, const DensityField& rho, double band_threshold,
    const std::function<LocalModelPrediction(Vec2)>& model,
    const std::function<bool(Vec2)>& region = {});

}  // namespace otmesh
