#pragma once

#include <vector>

#include "otmesh/grid.hpp"

namespace otmesh {

/// Exact inverse of (I - gamma * Laplacian) for the discrete five-point
/// Laplacian on the grid, with the same ghost conventions as the relaxation
/// solver: even reflection across Neumann edges, wrap-around on periodic
/// axes.  Implemented with fast cosine (Neumann) / real Fourier (periodic)
/// transforms, so the solve is direct, not iterative.
class HelmholtzSmoother {
  public:
    HelmholtzSmoother(const Grid2D& grid, double gamma);
    ~HelmholtzSmoother();
    HelmholtzSmoother(const HelmholtzSmoother&) = delete;
    HelmholtzSmoother& operator=(const HelmholtzSmoother&) = delete;

    const Grid2D& grid() const { return grid_; }
    double gamma() const { return gamma_; }

    /// Applies the smoother to a node field (row-major, index i*ny + j).
    std::vector<double> apply(const std::vector<double>& field) const;

  private:
    Grid2D grid_;
    double gamma_ = 0.0;
    std::vector<double> scale_;  // per-mode multiplier incl. normalization
    mutable double* buf_ = nullptr;
    void* plan_fwd_ = nullptr;
    void* plan_inv_ = nullptr;
};

}  // namespace otmesh
