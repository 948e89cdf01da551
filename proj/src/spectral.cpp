#include "otmesh/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <stdexcept>

#include "otmesh/errors.hpp"

namespace otmesh {

namespace {

/// Eigenvalues of minus the 1D second-difference operator, and the logical
/// transform length that enters FFTW's unnormalized round-trip factor.
struct AxisModes {
    std::vector<double> lambda;
    double logical = 1.0;
    fftw_r2r_kind forward;
    fftw_r2r_kind inverse;
};

AxisModes axis_modes(AxisBC bc, int n, double h) {
    AxisModes m;
    m.lambda.resize(n);
    const double pi = std::acos(-1.0);
    if (bc == AxisBC::neumann) {
        // Whole-sample cosine modes cos(pi k i/(n-1)) diagonalize the
        // second difference with mirrored ghosts.
        for (int k = 0; k < n; ++k)
            m.lambda[k] = (2.0 - 2.0 * std::cos(pi * k / (n - 1))) / (h * h);
        m.logical = 2.0 * (n - 1);
        m.forward = FFTW_REDFT00;
        m.inverse = FFTW_REDFT00;
    } else {
        // Half-complex layout: index k carries frequency min(k, n-k).
        for (int k = 0; k < n; ++k) {
            const int f = std::min(k, n - k);
            m.lambda[k] = (2.0 - 2.0 * std::cos(2.0 * pi * f / n)) / (h * h);
        }
        m.logical = n;
        m.forward = FFTW_R2HC;
        m.inverse = FFTW_HC2R;
    }
    return m;
}

}  // namespace

HelmholtzSmoother::HelmholtzSmoother(const Grid2D& grid, double gamma)
    : grid_(grid), gamma_(gamma) {
    grid_.check();
    if (gamma_ < 0.0) throw ConfigError("smoothing parameter gamma must be >= 0");

    const AxisModes mx = axis_modes(grid_.bcx, grid_.nx, grid_.hx());
    const AxisModes my = axis_modes(grid_.bcy, grid_.ny, grid_.hy());
    const double norm = 1.0 / (mx.logical * my.logical);
    scale_.resize(grid_.size());
    for (int i = 0; i < grid_.nx; ++i)
        for (int j = 0; j < grid_.ny; ++j)
            scale_[grid_.idx(i, j)] =
                norm / (1.0 + gamma_ * (mx.lambda[i] + my.lambda[j]));

    buf_ = fftw_alloc_real(grid_.size());
    plan_fwd_ = fftw_plan_r2r_2d(grid_.nx, grid_.ny, buf_, buf_, mx.forward, my.forward,
                                 FFTW_ESTIMATE);
    plan_inv_ = fftw_plan_r2r_2d(grid_.nx, grid_.ny, buf_, buf_, mx.inverse, my.inverse,
                                 FFTW_ESTIMATE);
    if (!plan_fwd_ || !plan_inv_) throw SolverError("failed to create transform plans");
}

HelmholtzSmoother::~HelmholtzSmoother() {
    if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_inv_) fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
    if (buf_) fftw_free(buf_);
}

std::vector<double> HelmholtzSmoother::apply(const std::vector<double>& field) const {
    if (static_cast<int>(field.size()) != grid_.size())
        throw std::invalid_argument("field size does not match the grid");
    for (int k = 0; k < grid_.size(); ++k) buf_[k] = field[k];
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    for (int k = 0; k < grid_.size(); ++k) buf_[k] *= scale_[k];
    fftw_execute(static_cast<fftw_plan>(plan_inv_));
    return std::vector<double>(buf_, buf_ + grid_.size());
}

}  // namespace otmesh
