#include "otmesh/bl_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "otmesh/errors.hpp"

namespace otmesh {

double bl_flux_x(double u) {
    const double d = u * u + (1.0 - u) * (1.0 - u);
    return u * u / (3.0 * d);
}

double bl_flux_y(double u) {
    return bl_flux_x(u) * (1.0 - 5.0 * (1.0 - u) * (1.0 - u)) / 3.0;
}

double bl_flux_x_prime(double u) {
    const double d = u * u + (1.0 - u) * (1.0 - u);
    return 2.0 * u * (1.0 - u) / (3.0 * d * d);
}

double bl_flux_y_prime(double u) {
    return bl_flux_x_prime(u) * (1.0 - 5.0 * (1.0 - u) * (1.0 - u)) / 3.0 +
           bl_flux_x(u) * 10.0 * (1.0 - u) / 3.0;
}

std::function<double(double, double)> bl_initial_front(double width) {
    if (!(width > 0.0)) throw ConfigError("initial front width must be positive");
    const double r0 = std::sqrt(1.0 / 18.0);
    return [width, r0](double x, double y) {
        const double r = std::hypot(x - 0.5, y - 0.5);
        return 0.5 * (1.0 - std::tanh((r - r0) / width));
    };
}

namespace {

/// Derivative along i of an nx x ny node field (idx = i*ny + j): central in
/// the interior, second-order one-sided at the first and last station.
void d_xi(int nx, int ny, double hx, const std::vector<double>& f,
          std::vector<double>& out) {
    const double c = 1.0 / (2.0 * hx);
    for (int j = 0; j < ny; ++j) {
        out[j] = (-3.0 * f[j] + 4.0 * f[ny + j] - f[2 * ny + j]) * c;
        out[(nx - 1) * ny + j] = (3.0 * f[(nx - 1) * ny + j] -
                                  4.0 * f[(nx - 2) * ny + j] +
                                  f[(nx - 3) * ny + j]) * c;
    }
    for (int i = 1; i < nx - 1; ++i)
        for (int j = 0; j < ny; ++j)
            out[i * ny + j] = (f[(i + 1) * ny + j] - f[(i - 1) * ny + j]) * c;
}

/// Derivative along j, same stencils.
void d_eta(int nx, int ny, double hy, const std::vector<double>& f,
           std::vector<double>& out) {
    const double c = 1.0 / (2.0 * hy);
    for (int i = 0; i < nx; ++i) {
        const int r = i * ny;
        out[r] = (-3.0 * f[r] + 4.0 * f[r + 1] - f[r + 2]) * c;
        out[r + ny - 1] =
            (3.0 * f[r + ny - 1] - 4.0 * f[r + ny - 2] + f[r + ny - 3]) * c;
        for (int j = 1; j < ny - 1; ++j)
            out[r + j] = (f[r + j + 1] - f[r + j - 1]) * c;
    }
}

int reflect_or_wrap(int i, int n, AxisBC bc) {
    if (bc == AxisBC::periodic) return (i % n + n) % n;
    if (i < 0) return -i;
    if (i >= n) return 2 * (n - 1) - i;
    return i;
}

}  // namespace

std::vector<double> arc_length_density(const MeshMapping& mesh,
                                       const std::vector<double>& u) {
    const Grid2D& g = mesh.grid;
    g.check();
    if (u.size() != static_cast<size_t>(g.size()))
        throw ConfigError("arc-length density: field size does not match the grid");

    std::vector<double> rho(u.size());
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            const Jacobian2 jac = discrete_jacobian(mesh, i, j);
            const double det = jac.det();
            if (!(det > 0.0)) {
                std::ostringstream msg;
                msg << "arc-length density: tangled mesh at node (" << i << ", "
                    << j << "), det = " << det;
                throw SolverError(msg.str());
            }
            // Gradient of u in the same discrete stencils as the Jacobian.
            double u_xi, u_eta;
            const auto val = [&](int a, int b) {
                return u[g.idx(reflect_or_wrap(a, g.nx, g.bcx),
                               reflect_or_wrap(b, g.ny, g.bcy))];
            };
            if (g.bcx == AxisBC::neumann && i == 0)
                u_xi = (-3.0 * val(0, j) + 4.0 * val(1, j) - val(2, j)) / (2.0 * g.hx());
            else if (g.bcx == AxisBC::neumann && i == g.nx - 1)
                u_xi = (3.0 * val(i, j) - 4.0 * val(i - 1, j) + val(i - 2, j)) /
                       (2.0 * g.hx());
            else
                u_xi = (val(i + 1, j) - val(i - 1, j)) / (2.0 * g.hx());
            if (g.bcy == AxisBC::neumann && j == 0)
                u_eta = (-3.0 * val(i, 0) + 4.0 * val(i, 1) - val(i, 2)) / (2.0 * g.hy());
            else if (g.bcy == AxisBC::neumann && j == g.ny - 1)
                u_eta = (3.0 * val(i, j) - 4.0 * val(i, j - 1) + val(i, j - 2)) /
                        (2.0 * g.hy());
            else
                u_eta = (val(i, j + 1) - val(i, j - 1)) / (2.0 * g.hy());
            const double ux = (jac.a22 * u_xi - jac.a21 * u_eta) / det;
            const double uy = (-jac.a12 * u_xi + jac.a11 * u_eta) / det;
            rho[g.idx(i, j)] = std::sqrt(1.0 + ux * ux + uy * uy);
        }
    return rho;
}

std::vector<double> front_monitor(const MeshMapping& mesh,
                                  const std::vector<double>& u) {
    const Grid2D& g = mesh.grid;
    std::vector<double> rho = arc_length_density(mesh, u);

    // Two Jacobi sweeps knit the monitor together across cells.
    std::vector<double> next(rho.size());
    for (int sweep = 0; sweep < 2; ++sweep) {
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny; ++j) {
                const auto val = [&](int a, int b) {
                    return rho[g.idx(reflect_or_wrap(a, g.nx, g.bcx),
                                     reflect_or_wrap(b, g.ny, g.bcy))];
                };
                next[g.idx(i, j)] =
                    0.5 * val(i, j) + 0.125 * (val(i + 1, j) + val(i - 1, j) +
                                               val(i, j + 1) + val(i, j - 1));
            }
        rho.swap(next);
    }

    double mean = 0.0;
    for (double v : rho) mean += v;
    mean /= static_cast<double>(rho.size());
    for (double& v : rho) v /= mean;
    return rho;
}

void BLConfig::check() const {
    if (n < 5) throw ConfigError("need at least 5 nodes per side");
    if (!(viscosity >= 0.0)) throw ConfigError("viscosity must be non-negative");
    if (!(cfl > 0.0)) throw ConfigError("cfl must be positive");
    if (!(tend >= 0.0)) throw ConfigError("tend must be non-negative");
    if (!(disp_cap > 0.0)) throw ConfigError("disp_cap must be positive");
    if (relax_steps < 1) throw ConfigError("relax_steps must be at least 1");
    if (adapt_rounds < 0) throw ConfigError("adapt_rounds must be non-negative");
    if (max_steps < 1) throw ConfigError("max_steps must be at least 1");
    if (!(gamma >= 0.0)) throw ConfigError("smoother damping must be non-negative");
    for (double s : snapshot_times)
        if (!(s >= 0.0) || s > tend + 1e-12)
            throw ConfigError("snapshot times must lie in [0, tend]");
}

BLSimulator::BLSimulator(const BLConfig& cfg)
    : cfg_(cfg),
      grid_{cfg.n, cfg.n, 0.0, 1.0, 0.0, 1.0, AxisBC::neumann, AxisBC::neumann},
      h_((cfg.check(), grid_.hx())),
      pot_(grid_),
      smoother_(grid_, cfg.gamma),
      mesh_(cfg_.moving_mesh ? mesh_from_potential(pot_)
                             : MeshMapping::identity(grid_)) {
    scfg_.gamma = cfg_.gamma;
    if (!cfg_.initial) cfg_.initial = bl_initial_front(h_);

    const size_t m = static_cast<size_t>(grid_.size());
    u_.resize(m);
    xdot_.assign(m, 0.0);
    ydot_.assign(m, 0.0);
    xmid_.resize(m); ymid_.resize(m);
    x_xi_.resize(m); x_eta_.resize(m); y_xi_.resize(m); y_eta_.resize(m);
    jdet_.resize(m);
    fl_.resize(m); gl_.resize(m); fx_.resize(m); gy_.resize(m);
    ux_.resize(m); uy_.resize(m); s1_.resize(m); s2_.resize(m);
    um_.resize(m); du_.resize(m); lap_.resize(m);

    const auto resample = [&] {
        for (size_t k = 0; k < m; ++k) u_[k] = cfg_.initial(mesh_.xs[k], mesh_.ys[k]);
    };
    resample();
    if (cfg_.moving_mesh) {
        for (int round = 0; round < cfg_.adapt_rounds; ++round) {
            resample();
            const std::vector<double> rho = front_monitor(mesh_, u_);
            res_ = relax_toward(pot_, rho, smoother_, scfg_, rstate_,
                                cfg_.relax_steps, 1e30);
            mesh_ = mesh_from_potential(pot_);
        }
        resample();
    }
}

void BLSimulator::relax_mesh() {
    mesh_prev_ = mesh_;
    if (cfg_.moving_mesh) {
        const std::vector<double> rho = front_monitor(mesh_prev_, u_);
        res_ = relax_toward(pot_, rho, smoother_, scfg_, rstate_,
                            cfg_.relax_steps, cfg_.disp_cap);
        mesh_ = mesh_from_potential(pot_);
    }

    // Frozen half-way geometry for both stages of the step.
    const size_t m = xmid_.size();
    for (size_t k = 0; k < m; ++k) {
        xmid_[k] = 0.5 * (mesh_prev_.xs[k] + mesh_.xs[k]);
        ymid_[k] = 0.5 * (mesh_prev_.ys[k] + mesh_.ys[k]);
    }
    d_xi(grid_.nx, grid_.ny, h_, xmid_, x_xi_);
    d_eta(grid_.nx, grid_.ny, h_, xmid_, x_eta_);
    d_xi(grid_.nx, grid_.ny, h_, ymid_, y_xi_);
    d_eta(grid_.nx, grid_.ny, h_, ymid_, y_eta_);
    double jmin = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < m; ++k) {
        jdet_[k] = x_xi_[k] * y_eta_[k] - x_eta_[k] * y_xi_[k];
        jmin = std::min(jmin, jdet_[k]);
    }
    if (!(jmin > 0.0)) {
        std::ostringstream msg;
        msg << "mesh tangled during time stepping at t = " << t_
            << " (min det = " << jmin << ")";
        throw SolverError(msg.str());
    }
}

double BLSimulator::step_limit() const {
    // Advective CFL on contravariant speeds plus the explicit diffusion
    // limit on the smallest physical cell, on the prepared geometry.
    double vmax = 0.0;
    double hloc2_min = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < u_.size(); ++k) {
        const double fp = bl_flux_x_prime(u_[k]);
        const double gp = bl_flux_y_prime(u_[k]);
        const double vxi =
            std::abs((y_eta_[k] * fp - y_xi_[k] * gp) / jdet_[k]) / h_;
        const double veta =
            std::abs((-x_eta_[k] * fp + x_xi_[k] * gp) / jdet_[k]) / h_;
        vmax = std::max(vmax, vxi + veta);
        const double hloc2 =
            std::min(x_xi_[k] * x_xi_[k] + y_xi_[k] * y_xi_[k],
                     x_eta_[k] * x_eta_[k] + y_eta_[k] * y_eta_[k]) *
            h_ * h_;
        hloc2_min = std::min(hloc2_min, hloc2);
    }
    return std::min(cfg_.cfl / std::max(vmax, 1e-12),
                    0.25 * hloc2_min / cfg_.viscosity);
}

double BLSimulator::stable_dt() const {
    // Preview on the current mesh (advance() re-evaluates the limit on the
    // half-way geometry after the mesh has moved).
    BLSimulator& self = const_cast<BLSimulator&>(*this);
    const size_t m = xmid_.size();
    for (size_t k = 0; k < m; ++k) {
        self.xmid_[k] = mesh_.xs[k];
        self.ymid_[k] = mesh_.ys[k];
    }
    d_xi(grid_.nx, grid_.ny, h_, self.xmid_, self.x_xi_);
    d_eta(grid_.nx, grid_.ny, h_, self.xmid_, self.x_eta_);
    d_xi(grid_.nx, grid_.ny, h_, self.ymid_, self.y_xi_);
    d_eta(grid_.nx, grid_.ny, h_, self.ymid_, self.y_eta_);
    for (size_t k = 0; k < m; ++k)
        self.jdet_[k] = x_xi_[k] * y_eta_[k] - x_eta_[k] * y_xi_[k];
    return step_limit();
}

void BLSimulator::integrate(double dt) {
    const size_t m = u_.size();
    for (size_t k = 0; k < m; ++k) {
        xdot_[k] = (mesh_.xs[k] - mesh_prev_.xs[k]) / dt;
        ydot_[k] = (mesh_.ys[k] - mesh_prev_.ys[k]) / dt;
    }

    // Physical gradient through the frozen half-way Jacobian:
    //   f_x = ( y_eta f_xi - y_xi f_eta) / det
    //   f_y = (-x_eta f_xi + x_xi f_eta) / det
    const auto grad = [&](const std::vector<double>& f, std::vector<double>& ox,
                          std::vector<double>& oy) {
        d_xi(grid_.nx, grid_.ny, h_, f, s1_);
        d_eta(grid_.nx, grid_.ny, h_, f, s2_);
        for (size_t k = 0; k < m; ++k) {
            ox[k] = (y_eta_[k] * s1_[k] - y_xi_[k] * s2_[k]) / jdet_[k];
            oy[k] = (-x_eta_[k] * s1_[k] + x_xi_[k] * s2_[k]) / jdet_[k];
        }
    };

    const auto rhs = [&](const std::vector<double>& uu, std::vector<double>& out) {
        for (size_t k = 0; k < m; ++k) {
            fl_[k] = bl_flux_x(uu[k]);
            gl_[k] = bl_flux_y(uu[k]);
        }
        grad(fl_, fx_, lap_);  // keep fx_; lap_ is scratch here
        grad(gl_, lap_, gy_);  // keep gy_
        grad(uu, ux_, uy_);
        grad(ux_, lap_, out);  // lap_ = d(ux)/dx; out is scratch here
        grad(uy_, out, du_);   // du_ = d(uy)/dy  (out is scratch again)
        for (size_t k = 0; k < m; ++k)
            out[k] = -fx_[k] - gy_[k] + xdot_[k] * ux_[k] + ydot_[k] * uy_[k] +
                     cfg_.viscosity * (lap_[k] + du_[k]);
    };

    rhs(u_, du_);
    for (size_t k = 0; k < m; ++k) um_[k] = u_[k] + 0.5 * dt * du_[k];
    rhs(um_, du_);
    for (size_t k = 0; k < m; ++k) u_[k] += dt * du_[k];

    t_ += dt;
    ++steps_;
}

void BLSimulator::advance(double dt) {
    if (!(dt > 0.0)) throw ConfigError("time step must be positive");
    // Keep a rollback so a rejected step leaves the state untouched.
    const std::vector<double> q_saved = pot_.q;
    const RelaxState rstate_saved = rstate_;
    const MeshMapping mesh_saved = mesh_;
    const double res_saved = res_;

    relax_mesh();
    const double limit = step_limit();
    if (dt > limit * (1.0 + 1e-12)) {
        pot_.q = q_saved;
        rstate_ = rstate_saved;
        mesh_ = mesh_saved;
        res_ = res_saved;
        std::ostringstream msg;
        msg << "time step dt = " << dt << " exceeds the stable limit " << limit
            << "; reduce dt";
        throw ConfigError(msg.str());
    }
    integrate(dt);
}

double BLSimulator::advance_auto(double dt_cap) {
    if (!(dt_cap > 0.0)) throw ConfigError("time step cap must be positive");
    relax_mesh();
    const double dt = std::min(step_limit(), dt_cap);
    integrate(dt);
    return dt;
}

BLResult run_buckley_leverett(const BLConfig& cfg) {
    cfg.check();
    BLSimulator sim(cfg);

    std::vector<double> snaps = cfg.snapshot_times;
    std::sort(snaps.begin(), snaps.end());
    snaps.erase(std::unique(snaps.begin(), snaps.end()), snaps.end());
    size_t next_snap = 0;

    BLResult out;
    const auto record_due = [&]() {
        while (next_snap < snaps.size() && sim.time() >= snaps[next_snap] - 1e-9) {
            out.snapshots.push_back({sim.time(), sim.mesh(), sim.u()});
            ++next_snap;
        }
    };
    record_due();

    while (sim.time() < cfg.tend - 1e-12 && sim.steps() < cfg.max_steps) {
        double dt_cap = cfg.tend - sim.time();
        if (next_snap < snaps.size() && snaps[next_snap] > sim.time())
            dt_cap = std::min(dt_cap, snaps[next_snap] - sim.time());
        sim.advance_auto(dt_cap);
        record_due();
    }

    if (sim.time() < cfg.tend - 1e-12) {
        std::ostringstream msg;
        msg << "time stepping did not reach t = " << cfg.tend << " within "
            << cfg.max_steps << " steps (reached " << sim.time() << ")";
        throw SolverError(msg.str());
    }

    out.mesh = sim.mesh();
    out.u = sim.u();
    out.time = sim.time();
    out.steps = sim.steps();
    out.final_residual = sim.mesh_residual();
    out.quality = quality_report(out.mesh);
    return out;
}

}  // namespace otmesh
