#pragma once

#include <vector>

#include "otmesh/density.hpp"
#include "otmesh/linalg.hpp"
#include "otmesh/mesh.hpp"

namespace otmesh {

/// Per-node mesh quality data: discrete Jacobians, their eigen-pairs, the
/// induced metric, skewness Q_s, alignment Q_a, and the equidistribution
/// residual |rho(x) det J / theta - 1|.
struct QualityReport {
    Grid2D grid;
    std::vector<double> xs, ys;
    std::vector<Jacobian2> jac;
    std::vector<EigenPair2> eig;
    std::vector<MetricTensor2> metric;
    std::vector<double> qs, qa, resid;

    double theta = 1.0;
    double max_qs = 0.0, mean_qs = 0.0;
    int max_i = 0, max_j = 0;  // location of max_qs
    double max_resid = 0.0;
    bool any_degenerate = false;
};

/// Full quality sweep over the mesh against a density. The residual
/// normalization uses rho.theta when supplied, otherwise the discrete
/// pullback mass mean(rho(x) det J) over the grid (trapezoid weights along
/// Neumann axes). Throws on a tangled mesh, naming the offending node.
QualityReport quality_report(const MeshMapping& mesh, const DensityField& rho);

/// Quality sweep without a density (residual computed against rho == 1).
QualityReport quality_report(const MeshMapping& mesh);

/// Display ellipse for one element: center, semi-axes s1*h/2 >= s2*h/2
/// (image of a cell of width h under J), major axis direction.
struct Ellipse {
    Vec2 center;
    double semi1 = 0.0, semi2 = 0.0;
    Vec2 axis1{1.0, 0.0};
};

/// Sampled element ellipses every `stride` nodes in each direction.
std::vector<Ellipse> ellipse_field(const QualityReport& report, int stride);

/// Quadrature weight of node (i, j) for mean-over-grid sums: 1 everywhere on
/// periodic axes, trapezoid (1/2 at edges) on Neumann axes; normalized so the
/// weights sum to 1.
double node_mean_weight(const Grid2D& g, int i, int j);

}  // namespace otmesh
