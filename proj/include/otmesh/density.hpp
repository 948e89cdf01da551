#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace otmesh {

/// Scalar density rho(x, y) > 0 over the physical domain, plus its
/// normalization constant theta when known a priori. Densities are either
/// analytic callables or bilinear interpolants of grid samples.
struct DensityField {
    std::function<double(double, double)> rho;
    std::optional<double> theta;

    double operator()(double x, double y) const { return rho(x, y); }

    static DensityField from_function(std::function<double(double, double)> f,
                                      std::optional<double> theta = std::nullopt);

    /// Bilinear interpolant of samples on a uniform nx x ny node grid over
    /// [x0,x1] x [y0,y1]; values stored row-major with j fastest
    /// (idx = i*ny + j). Evaluation outside the rectangle clamps to the edge.
    static DensityField from_samples(double x0, double x1, double y0, double y1,
                                     int nx, int ny, std::vector<double> values,
                                     std::optional<double> theta = std::nullopt);
};

}  // namespace otmesh
