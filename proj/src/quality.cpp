#include "otmesh/quality.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "otmesh/errors.hpp"

namespace otmesh {

double node_mean_weight(const Grid2D& g, int i, int j) {
    double wx = 1.0, wy = 1.0;
    if (g.bcx == AxisBC::neumann && (i == 0 || i == g.nx - 1)) wx = 0.5;
    if (g.bcy == AxisBC::neumann && (j == 0 || j == g.ny - 1)) wy = 0.5;
    const double nx_eff = (g.bcx == AxisBC::neumann) ? g.nx - 1.0 : g.nx;
    const double ny_eff = (g.bcy == AxisBC::neumann) ? g.ny - 1.0 : g.ny;
    return wx * wy / (nx_eff * ny_eff);
}

namespace {

QualityReport build_report(const MeshMapping& mesh, const DensityField* rho) {
    const Grid2D& g = mesh.grid;
    g.check();
    const int n = g.size();

    QualityReport rep;
    rep.grid = g;
    rep.xs = mesh.xs;
    rep.ys = mesh.ys;
    rep.jac.resize(n);
    rep.eig.resize(n);
    rep.metric.resize(n);
    rep.qs.assign(n, 0.0);
    rep.qa.assign(n, 0.0);
    rep.resid.assign(n, 0.0);

    std::vector<double> rho_det(n, 0.0);
    double mass = 0.0;
    for (int i = 0; i < g.nx; ++i) {
        for (int j = 0; j < g.ny; ++j) {
            const int k = g.idx(i, j);
            const Jacobian2 jac = discrete_jacobian(mesh, i, j);
            const double det = jac.det();
            if (!(det > 0.0))
                throw SolverError("tangled mesh: det J = " + std::to_string(det) +
                                  " at node (" + std::to_string(i) + ", " + std::to_string(j) + ")");
            rep.jac[k] = jac;
            const double rv = rho ? (*rho)(mesh.xs[k], mesh.ys[k]) : 1.0;
            rho_det[k] = rv * det;
            mass += node_mean_weight(g, i, j) * rho_det[k];
        }
    }

    rep.theta = (rho && rho->theta) ? *rho->theta : mass;

    double qs_sum = 0.0;
    for (int i = 0; i < g.nx; ++i) {
        for (int j = 0; j < g.ny; ++j) {
            const int k = g.idx(i, j);
            const Jacobian2& jac = rep.jac[k];
            rep.eig[k] = eig_sym2(jac);
            rep.any_degenerate = rep.any_degenerate || rep.eig[k].degenerate;
            rep.metric[k] = metric_from_jacobian(jac, rep.theta);
            rep.qs[k] = skewness(jac);
            rep.qa[k] = alignment_measure(jac, rep.metric[k]);
            rep.resid[k] = std::abs(rho_det[k] / rep.theta - 1.0);
            qs_sum += rep.qs[k];
            if (rep.qs[k] > rep.max_qs) {
                rep.max_qs = rep.qs[k];
                rep.max_i = i;
                rep.max_j = j;
            }
            rep.max_resid = std::max(rep.max_resid, rep.resid[k]);
        }
    }
    rep.mean_qs = qs_sum / n;
    return rep;
}

}  // namespace

QualityReport quality_report(const MeshMapping& mesh, const DensityField& rho) {
    return build_report(mesh, &rho);
}

QualityReport quality_report(const MeshMapping& mesh) { return build_report(mesh, nullptr); }

std::vector<Ellipse> ellipse_field(const QualityReport& report, int stride) {
    if (stride < 1) throw std::invalid_argument("ellipse_field: stride must be >= 1");
    const Grid2D& g = report.grid;
    const double h = 0.5 * (g.hx() + g.hy());
    std::vector<Ellipse> out;
    for (int i = 0; i < g.nx; i += stride) {
        for (int j = 0; j < g.ny; j += stride) {
            const int k = g.idx(i, j);
            const EigenPair2& e = report.eig[k];
            Ellipse el;
            el.center = {report.xs[k], report.ys[k]};
            el.semi1 = std::abs(e.lambda1) * h * 0.5;
            el.semi2 = std::abs(e.lambda2) * h * 0.5;
            el.axis1 = e.e1;
            out.push_back(el);
        }
    }
    return out;
}

}  // namespace otmesh
