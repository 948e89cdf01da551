#pragma once

#include <vector>

namespace otmesh {

/// Monotone piecewise-cubic Hermite interpolant (Fritsch-Carlson slopes).
/// Preserves monotonicity of the data; evaluation outside the table range
/// extrapolates linearly with the end slopes.
struct PchipSpline {
    std::vector<double> x, y, d;  // nodes, values, node slopes

    double eval(double t) const;
    double derivative(double t) const;
};

/// Build from strictly increasing abscissae (throws otherwise).
PchipSpline pchip_build(std::vector<double> x, std::vector<double> y);

}  // namespace otmesh
