#include "otmesh/ma_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "otmesh/errors.hpp"
#include "otmesh/quality.hpp"

namespace otmesh {

void SolverConfig::check() const {
    if (!(dtau0 > 0.0)) throw ConfigError("SolverConfig: dtau0 must be positive");
    if (gamma < 0.0) throw ConfigError("SolverConfig: gamma must be >= 0");
    if (!(tol > 0.0)) throw ConfigError("SolverConfig: tol must be positive");
    if (max_iter < 1) throw ConfigError("SolverConfig: max_iter must be >= 1");
    if (!(dtau_min > 0.0) || dtau_min > dtau0)
        throw ConfigError("SolverConfig: need 0 < dtau_min <= dtau0");
    if (growth < 1.0) throw ConfigError("SolverConfig: growth must be >= 1");
    if (!(shrink > 0.0 && shrink < 1.0))
        throw ConfigError("SolverConfig: shrink must lie in (0, 1)");
    if (worsen_ratio < 1.0) throw ConfigError("SolverConfig: worsen_ratio must be >= 1");
    if (dtau_max_factor < 1.0)
        throw ConfigError("SolverConfig: dtau_max_factor must be >= 1");
    if (max_convexity_failures < 1)
        throw ConfigError("SolverConfig: max_convexity_failures must be >= 1");
}

namespace {

/// Ghost-aware accessor for the deviation field: even reflection across
/// Neumann edges, wrap-around on periodic axes.
class QView {
  public:
    QView(const Grid2D& g, const std::vector<double>& q) : g_(g), q_(q) {}

    double operator()(int i, int j) const {
        return q_[static_cast<size_t>(
            g_.idx(fold(i, g_.nx, g_.bcx), fold(j, g_.ny, g_.bcy)))];
    }

  private:
    static int fold(int i, int n, AxisBC bc) {
        if (bc == AxisBC::periodic) {
            i %= n;
            return i < 0 ? i + n : i;
        }
        if (i < 0) return -i;
        if (i >= n) return 2 * (n - 1) - i;
        return i;
    }

    const Grid2D& g_;
    const std::vector<double>& q_;
};

struct NodeDerivs {
    double qx = 0.0, qy = 0.0;  // q_xi, q_eta
    double H = 1.0;             // det(I + D^2 q) = det of the map Jacobian
};

NodeDerivs node_derivs(const QView& q, const Grid2D& g, int i, int j) {
    const double hx = g.hx(), hy = g.hy();
    const double c = q(i, j);
    NodeDerivs d;
    d.qx = (q(i + 1, j) - q(i - 1, j)) / (2.0 * hx);
    d.qy = (q(i, j + 1) - q(i, j - 1)) / (2.0 * hy);
    const double qxx = (q(i + 1, j) - 2.0 * c + q(i - 1, j)) / (hx * hx);
    const double qyy = (q(i, j + 1) - 2.0 * c + q(i, j - 1)) / (hy * hy);
    const double qxy =
        (q(i + 1, j + 1) - q(i + 1, j - 1) - q(i - 1, j + 1) + q(i - 1, j - 1)) /
        (4.0 * hx * hy);
    d.H = (1.0 + qxx) * (1.0 + qyy) - qxy * qxy;
    return d;
}

double checked_density(double rho, Vec2 x) {
    if (!(rho > 0.0)) {
        std::ostringstream msg;
        msg << "density must be positive; got " << rho << " at (" << x.x << ", " << x.y
            << ")";
        throw ConfigError(msg.str());
    }
    return rho;
}

struct StepOutcome {
    double residual = std::numeric_limits<double>::infinity();
    bool converged = false;
    bool reverted = false;  // convexity loss: field restored, step size cut
};

/// One residual evaluation plus (unless converged) one smoothed update of q.
/// rho_at receives the node index and its current mapped physical position.
StepOutcome pma_step(PotentialField& p, const std::function<double(int, Vec2)>& rho_at,
                     const HelmholtzSmoother& smoother, const SolverConfig& cfg,
                     RelaxState& state, int iter) {
    const Grid2D& g = p.grid;
    const int n = g.size();
    if (state.dtau <= 0.0) state.dtau = cfg.dtau0;
    if (static_cast<int>(state.prev_q.size()) != n) state.prev_q = p.q;

    const QView q(g, p.q);
    std::vector<double> rho_h(static_cast<size_t>(n));
    std::vector<NodeDerivs> derivs(static_cast<size_t>(n));
    double min_h = std::numeric_limits<double>::infinity();
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            const int k = g.idx(i, j);
            derivs[static_cast<size_t>(k)] = node_derivs(q, g, i, j);
            min_h = std::min(min_h, derivs[static_cast<size_t>(k)].H);
        }

    if (min_h <= 0.0) {
        // The last update broke convexity of the potential: restore the field
        // and retry with a smaller pseudo-time step.
        p.q = state.prev_q;
        state.dtau = std::max(0.5 * state.dtau, cfg.dtau_min);
        if (++state.convexity_failures > cfg.max_convexity_failures) {
            std::ostringstream msg;
            msg << "convexity of the mesh potential lost at iteration " << iter
                << " and could not be restored after " << cfg.max_convexity_failures
                << " step-size reductions";
            throw SolverError(msg.str());
        }
        return {std::numeric_limits<double>::infinity(), false, true};
    }
    state.convexity_failures = 0;

    double theta = 0.0;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            const int k = g.idx(i, j);
            const NodeDerivs& d = derivs[static_cast<size_t>(k)];
            const Vec2 x{g.xi(i) + d.qx, g.eta(j) + d.qy};
            rho_h[static_cast<size_t>(k)] =
                checked_density(rho_at(k, x), x) * d.H;
            theta += node_mean_weight(g, i, j) * rho_h[static_cast<size_t>(k)];
        }
    p.theta = theta;

    double residual = 0.0;
    for (int k = 0; k < n; ++k)
        residual = std::max(residual, std::abs(rho_h[static_cast<size_t>(k)] / theta - 1.0));
    if (residual <= cfg.tol) return {residual, true, false};

    std::vector<double> v(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k)
        v[static_cast<size_t>(k)] = std::sqrt(rho_h[static_cast<size_t>(k)] / theta) - 1.0;
    const std::vector<double> s = smoother.apply(v);

    state.prev_q = p.q;
    double mean = 0.0;
    for (int k = 0; k < n; ++k) {
        p.q[static_cast<size_t>(k)] += state.dtau * s[static_cast<size_t>(k)];
        mean += p.q[static_cast<size_t>(k)];
    }
    mean /= n;
    for (double& qk : p.q) qk -= mean;  // gauge: the map only sees grad q

    if (residual < state.res_best) state.res_best = residual;
    if (residual > cfg.worsen_ratio * state.res_best)
        state.dtau = std::max(state.dtau * cfg.shrink, cfg.dtau_min);
    else
        state.dtau = std::min(state.dtau * cfg.growth, cfg.dtau_max_factor * cfg.dtau0);

    return {residual, false, false};
}

std::function<double(int, Vec2)> physical_density(const DensityField& rho) {
    return [&rho](int, Vec2 x) { return rho(x.x, x.y); };
}

}  // namespace

SolveResult solve_ma(const Grid2D& grid, const DensityField& rho,
                     const SolverConfig& cfg) {
    grid.check();
    cfg.check();
    if (!rho.rho) throw ConfigError("solve_ma: density has no callable");

    PotentialField p(grid);
    const HelmholtzSmoother smoother(grid, cfg.gamma);
    RelaxState state;
    const auto rho_at = physical_density(rho);

    double last_res = std::numeric_limits<double>::infinity();
    for (int it = 0; it <= cfg.max_iter; ++it) {
        const StepOutcome out = pma_step(p, rho_at, smoother, cfg, state, it);
        if (!out.reverted) last_res = out.residual;
        if (out.converged) {
            SolveResult result;
            result.potential = std::move(p);
            result.stats.iterations = it;
            result.stats.residual = out.residual;
            result.stats.theta = result.potential.theta;
            result.mesh = mesh_from_potential(result.potential);
            return result;
        }
    }
    std::ostringstream msg;
    msg << "relaxation did not converge within " << cfg.max_iter
        << " iterations; final residual " << last_res << " (tol " << cfg.tol << ")";
    throw SolverError(msg.str());
}

double ma_residual(const PotentialField& p, const DensityField& rho) {
    const Grid2D& g = p.grid;
    g.check();
    if (static_cast<int>(p.q.size()) != g.size())
        throw ConfigError("ma_residual: field size does not match the grid");
    if (!(p.theta > 0.0)) throw ConfigError("ma_residual: theta must be positive");
    if (!rho.rho) throw ConfigError("ma_residual: density has no callable");

    // Pure central differences: skip Neumann edge nodes rather than assume
    // the field satisfies any boundary condition.
    const int i_lo = g.bcx == AxisBC::periodic ? 0 : 1;
    const int i_hi = g.bcx == AxisBC::periodic ? g.nx - 1 : g.nx - 2;
    const int j_lo = g.bcy == AxisBC::periodic ? 0 : 1;
    const int j_hi = g.bcy == AxisBC::periodic ? g.ny - 1 : g.ny - 2;

    const QView q(g, p.q);
    double worst = 0.0;
    for (int i = i_lo; i <= i_hi; ++i)
        for (int j = j_lo; j <= j_hi; ++j) {
            const NodeDerivs d = node_derivs(q, g, i, j);
            const Vec2 x{g.xi(i) + d.qx, g.eta(j) + d.qy};
            const double r = checked_density(rho(x.x, x.y), x) * d.H / p.theta - 1.0;
            worst = std::max(worst, std::abs(r));
        }
    return worst;
}

MeshMapping mesh_from_potential(const PotentialField& p) {
    const Grid2D& g = p.grid;
    g.check();
    if (static_cast<int>(p.q.size()) != g.size())
        throw ConfigError("mesh_from_potential: field size does not match the grid");

    const QView q(g, p.q);
    MeshMapping mesh(g);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            const NodeDerivs d = node_derivs(q, g, i, j);
            if (d.H <= 0.0) {
                std::ostringstream msg;
                msg << "tangled mesh: the potential is not convex at node (" << i << ", "
                    << j << "), det = " << d.H;
                throw SolverError(msg.str());
            }
            mesh.set_pos(i, j, {g.xi(i) + d.qx, g.eta(j) + d.qy});
        }
    return mesh;
}

double relax_toward(PotentialField& p, const std::vector<double>& rho_nodes,
                    const HelmholtzSmoother& smoother, const SolverConfig& cfg,
                    RelaxState& state, int max_steps, double disp_cap) {
    const Grid2D& g = p.grid;
    g.check();
    cfg.check();
    if (static_cast<int>(rho_nodes.size()) != g.size())
        throw ConfigError("relax_toward: node density size does not match the grid");
    if (!(smoother.grid() == g)) throw ConfigError("relax_toward: smoother grid mismatch");
    if (max_steps < 1) throw ConfigError("relax_toward: max_steps must be >= 1");
    if (!(disp_cap > 0.0)) throw ConfigError("relax_toward: disp_cap must be positive");

    // Entry snapshot: node positions and local physical spacing, so the
    // caller can bound how far the mesh drifts between its own updates.
    const MeshMapping mesh0 = mesh_from_potential(p);
    std::vector<double> cap(static_cast<size_t>(g.size()));
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            const Jacobian2 jac = discrete_jacobian(mesh0, i, j);
            const double h_loc = std::min(g.hx() * std::hypot(jac.a11, jac.a21),
                                          g.hy() * std::hypot(jac.a12, jac.a22));
            cap[static_cast<size_t>(g.idx(i, j))] = disp_cap * h_loc;
        }

    const auto rho_at = [&rho_nodes](int k, Vec2) {
        return rho_nodes[static_cast<size_t>(k)];
    };

    double last = std::numeric_limits<double>::infinity();
    for (int step = 0; step < max_steps; ++step) {
        const StepOutcome out = pma_step(p, rho_at, smoother, cfg, state, step);
        if (!out.reverted) last = out.residual;
        if (out.converged) break;
        if (out.reverted) continue;

        const QView q(g, p.q);
        bool exceeded = false;
        for (int i = 0; i < g.nx && !exceeded; ++i)
            for (int j = 0; j < g.ny && !exceeded; ++j) {
                const NodeDerivs d = node_derivs(q, g, i, j);
                const Vec2 x{g.xi(i) + d.qx, g.eta(j) + d.qy};
                const int k = g.idx(i, j);
                if ((x - mesh0.pos(i, j)).norm() > cap[static_cast<size_t>(k)])
                    exceeded = true;
            }
        if (exceeded) break;  // keep the step that crossed the cap
    }
    return last;
}

}  // namespace otmesh
