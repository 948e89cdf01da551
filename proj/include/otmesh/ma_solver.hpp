#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "otmesh/density.hpp"
#include "otmesh/grid.hpp"
#include "otmesh/mesh.hpp"
#include "otmesh/spectral.hpp"

namespace otmesh {

/// Discrete mesh potential P over a computational grid, stored as the
/// deviation q = P - (xi^2 + eta^2)/2 so that q == 0 is the identity map and
/// boundary conditions act on q alone. The mesh map is the gradient
/// x = grad P = xi + grad q; its Jacobian is the Hessian of P.
struct PotentialField {
    Grid2D grid;
    std::vector<double> q;  // idx = i*ny + j
    double theta = 1.0;     // normalization rho(x) det(D^2 P) ~= theta

    PotentialField() = default;
    explicit PotentialField(const Grid2D& g)
        : grid(g), q(static_cast<size_t>(g.size()), 0.0) {}

    /// Full potential value at node (i, j).
    double p(int i, int j) const {
        const double xi = grid.xi(i), eta = grid.eta(j);
        return q[static_cast<size_t>(grid.idx(i, j))] + 0.5 * (xi * xi + eta * eta);
    }
};

/// Parameters of the relaxation solver (pseudo-time integration of the
/// parabolic Monge-Ampere equation).
struct SolverConfig {
    double dtau0 = 0.05;  // initial pseudo-time step
    double gamma = 0.1;   // smoothing operator (I - gamma*Laplacian)^-1
    double tol = 1e-3;    // convergence: max |rho det(D^2 P)/theta - 1| <= tol
    int max_iter = 50000;

    // Step-size control.
    double dtau_min = 1e-4;
    double growth = 1.05;          // applied while the residual keeps improving
    double shrink = 0.7;           // applied when the residual worsens past worsen_ratio
    double worsen_ratio = 1.5;     // relative to the best residual so far
    double dtau_max_factor = 10.0; // cap: dtau <= dtau_max_factor * dtau0
    int max_convexity_failures = 20;  // consecutive rejected steps before giving up

    void check() const;
};

struct SolveStats {
    int iterations = 0;    // update steps taken before the residual dropped below tol
    double residual = 0.0; // final equidistribution residual
    double theta = 1.0;    // discrete normalization at convergence
};

struct SolveResult {
    PotentialField potential;
    MeshMapping mesh;
    SolveStats stats;
};

/// Mutable relaxation state carried across calls so a caller interleaving
/// mesh relaxation with other work (e.g. a PDE integrator) resumes with the
/// adapted step size instead of restarting cold. Default-constructed state
/// picks up dtau0 from the config on first use.
struct RelaxState {
    double dtau = 0.0;
    double res_best = std::numeric_limits<double>::infinity();
    int convexity_failures = 0;
    std::vector<double> prev_q;
};

/// Solves rho(x) det(D^2 P) = theta on the grid for the mesh potential,
/// starting from the identity map. rho is evaluated at the moving physical
/// positions x = grad P; theta is recomputed each iteration as the
/// weighted mean of rho det(D^2 P) over the grid. Throws SolverError if the
/// residual fails to reach cfg.tol within cfg.max_iter iterations or if
/// convexity cannot be maintained, ConfigError on invalid input.
SolveResult solve_ma(const Grid2D& grid, const DensityField& rho,
                     const SolverConfig& cfg = {});

/// Equidistribution residual max |rho(x) det(D^2 P) / p.theta - 1| of an
/// arbitrary potential, using pure central differences: every node on a
/// periodic axis, interior nodes only on a Neumann axis (no ghost
/// assumptions, so sampled analytic potentials can be measured directly).
double ma_residual(const PotentialField& p, const DensityField& rho);

/// Mesh map x = grad P from the potential, with mirrored (Neumann) or
/// wrapped (periodic) ghosts; Neumann boundary nodes land exactly on the
/// domain boundary. Throws SolverError naming the node if the discrete
/// Hessian determinant is not positive everywhere (tangled mesh).
MeshMapping mesh_from_potential(const PotentialField& p);

/// Advances the relaxation at most max_steps pseudo-time steps toward
/// equidistribution of the fixed computational-node samples rho_nodes
/// (row-major, idx = i*ny + j), reusing `state` across calls. Stops early
/// once converged to cfg.tol, or one step after any node's displacement
/// since entry exceeds disp_cap times its local physical mesh spacing
/// (at least one step is always attempted). Returns the last residual.
double relax_toward(PotentialField& p, const std::vector<double>& rho_nodes,
                    const HelmholtzSmoother& smoother, const SolverConfig& cfg,
                    RelaxState& state, int max_steps, double disp_cap);

}  // namespace otmesh
