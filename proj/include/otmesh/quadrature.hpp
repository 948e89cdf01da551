#pragma once

#include <functional>

namespace otmesh {

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance
/// `abs_tol` (Richardson-corrected recursion, depth-limited).
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol = 1e-10, int max_depth = 52);

}  // namespace otmesh
