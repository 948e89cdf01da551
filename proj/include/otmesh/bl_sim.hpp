#pragma once

#include <functional>
#include <vector>

#include "otmesh/ma_solver.hpp"
#include "otmesh/mesh.hpp"
#include "otmesh/quality.hpp"
#include "otmesh/spectral.hpp"

namespace otmesh {

/// Two-phase flow fractional fluxes on the unit square with gravity acting in
/// -y: horizontal flux f(u) = u^2 / (3 (u^2 + (1-u)^2)) and vertical flux
/// g(u) = f(u) (1 - 5 (1-u)^2) / 3.  Smooth for all real u.
double bl_flux_x(double u);
double bl_flux_y(double u);
double bl_flux_x_prime(double u);
double bl_flux_y_prime(double u);

/// Standard initial saturation: a disc of radius sqrt(1/18) centred at
/// (1/2, 1/2) smoothed over the given width,
/// u = (1 - tanh((r - sqrt(1/18)) / width)) / 2.
std::function<double(double, double)> bl_initial_front(double width);

/// Arc-length density rho = sqrt(1 + |grad u|^2) of the node field u, with
/// the physical gradient mapped through the discrete mesh Jacobian (same
/// one-sided/central/wraparound stencils).  rho >= 1 everywhere; a constant
/// field gives exactly 1 and u = x on the identity mesh gives exactly
/// sqrt(2).  Throws SolverError when the mesh is tangled (det J <= 0).
/// u holds node values indexed idx = i*ny + j on mesh.grid.
std::vector<double> arc_length_density(const MeshMapping& mesh,
                                       const std::vector<double>& u);

/// Relaxation monitor: arc_length_density smoothed by two Jacobi sweeps and
/// normalized to unit mean.
std::vector<double> front_monitor(const MeshMapping& mesh,
                                  const std::vector<double>& u);

struct BLConfig {
    int n = 80;                ///< nodes per side; all-Neumann unit square
    double viscosity = 1.1e-3; ///< capillary diffusion coefficient
    double cfl = 0.4;          ///< advective time-step fraction
    double tend = 0.4;         ///< final time (0 = initial state only)
    double disp_cap = 0.2;     ///< mesh drift per PDE step, fraction of local spacing
    int relax_steps = 20;      ///< mesh relaxation budget per PDE step
    int adapt_rounds = 30;     ///< initial resample-and-adapt rounds
    int max_steps = 20000;     ///< PDE step budget
    bool moving_mesh = true;   ///< false: integrate on the fixed uniform grid
    double gamma = 0.1;        ///< relaxation smoother damping
    /// Saturation at t = 0 as a function of (x, y); when absent the standard
    /// disc profile with width equal to the grid spacing is used.
    std::function<double(double, double)> initial;
    /// Times at which to record state snapshots; each must lie in [0, tend].
    /// The integrator lands on them exactly by clamping the step size.
    std::vector<double> snapshot_times;

    void check() const;  ///< throws ConfigError on invalid settings
};

/// One coupled mesh/saturation step at a time, holding the relaxation state
/// between steps.  Construction performs the initial resample-and-adapt
/// rounds (on a moving mesh) so the mesh already follows the front at t = 0.
class BLSimulator {
public:
    explicit BLSimulator(const BLConfig& cfg);

    const MeshMapping& mesh() const { return mesh_; }
    const std::vector<double>& u() const { return u_; }
    const std::vector<double>& mesh_velocity_x() const { return xdot_; }
    const std::vector<double>& mesh_velocity_y() const { return ydot_; }
    double time() const { return t_; }
    int steps() const { return steps_; }
    /// Equidistribution residual after the most recent mesh relaxation
    /// (0 until the mesh first moves, and always 0 on a fixed grid).
    double mesh_residual() const { return res_; }

    /// Stable step size estimated on the current geometry: the advective CFL
    /// bound on the contravariant flux speeds combined with the explicit
    /// diffusion bound on the smallest physical cell.  The limit enforced by
    /// advance() is evaluated on the half-way geometry after the mesh moves
    /// and therefore differs slightly.
    double stable_dt() const;

    /// Advances one step with the given dt: relaxes the mesh toward the
    /// current front monitor (drift capped), then integrates the saturation
    /// with a two-stage midpoint scheme on the frozen half-way geometry,
    /// including the mesh-velocity advection term.  If dt exceeds the stable
    /// limit the simulator state is left untouched and ConfigError reports
    /// the admissible value.  Throws SolverError if the mesh tangles.
    void advance(double dt);

    /// Advances one step with dt = min(stable limit, dt_cap); returns the dt
    /// actually taken.
    double advance_auto(double dt_cap);

private:
    void relax_mesh();           // mesh relaxation + half-way geometry
    double step_limit() const;   // stable dt on the prepared geometry
    void integrate(double dt);   // two-stage update on the prepared geometry

    BLConfig cfg_;
    Grid2D grid_;
    double h_;
    PotentialField pot_;
    HelmholtzSmoother smoother_;
    SolverConfig scfg_;
    RelaxState rstate_;
    MeshMapping mesh_, mesh_prev_;
    std::vector<double> u_, xdot_, ydot_;
    std::vector<double> xmid_, ymid_;
    std::vector<double> x_xi_, x_eta_, y_xi_, y_eta_, jdet_;
    std::vector<double> fl_, gl_, fx_, gy_, ux_, uy_, s1_, s2_, um_, du_, lap_;
    double t_ = 0.0;
    double res_ = 0.0;
    int steps_ = 0;
};

struct BLSnapshot {
    double time = 0.0;
    MeshMapping mesh;
    std::vector<double> u;
};

struct BLResult {
    MeshMapping mesh;        ///< mesh at the final time
    std::vector<double> u;   ///< saturation at the final time
    double time = 0.0;       ///< time actually reached
    int steps = 0;           ///< PDE steps taken
    double final_residual = 0.0;  ///< mesh equidistribution residual after the
                                  ///< last relaxation (0 on a fixed grid)
    QualityReport quality;   ///< geometry sweep of the final mesh
    std::vector<BLSnapshot> snapshots;
};

/// Integrates the viscous Buckley-Leverett equation
///   u_t + f(u)_x + g(u)_y = viscosity * laplace(u)
/// on a moving structured mesh up to cfg.tend, recording the requested
/// snapshots.  Throws SolverError if the mesh tangles or the step budget is
/// exhausted before tend.
BLResult run_buckley_leverett(const BLConfig& cfg);

}  // namespace otmesh
