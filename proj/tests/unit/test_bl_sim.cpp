#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "otmesh/bl_sim.hpp"
#include "otmesh/errors.hpp"
#include "otmesh/grid.hpp"
#include "otmesh/linalg.hpp"
#include "otmesh/ma_solver.hpp"
#include "otmesh/mesh.hpp"
#include "otmesh/quality.hpp"

namespace {

using namespace otmesh;

MeshMapping identity_mesh(int n) {
    Grid2D g{n, n, 0.0, 1.0, 0.0, 1.0, AxisBC::neumann, AxisBC::neumann};
    return MeshMapping::identity(g);
}

std::vector<double> sample(const MeshMapping& mesh,
                           const std::function<double(double, double)>& f) {
    std::vector<double> out(mesh.xs.size());
    for (size_t k = 0; k < out.size(); ++k) out[k] = f(mesh.xs[k], mesh.ys[k]);
    return out;
}

// Linearly interpolated x where u first drops through `level` when scanning the
// middle grid row rightward from column `from`.
double row_crossing(const MeshMapping& mesh, const std::vector<double>& u,
                    double level, int from) {
    const Grid2D& g = mesh.grid;
    const int j = (g.ny - 1) / 2;
    for (int i = from; i + 1 < g.nx; ++i) {
        const double a = u[g.idx(i, j)], b = u[g.idx(i + 1, j)];
        if (a >= level && b < level) {
            const double s = (a - level) / (a - b);
            return mesh.xs[g.idx(i, j)] * (1.0 - s) + mesh.xs[g.idx(i + 1, j)] * s;
        }
    }
    return -1.0;
}

double col_crossing(const MeshMapping& mesh, const std::vector<double>& u,
                    double level, int from) {
    const Grid2D& g = mesh.grid;
    const int i = (g.nx - 1) / 2;
    for (int j = from; j + 1 < g.ny; ++j) {
        const double a = u[g.idx(i, j)], b = u[g.idx(i, j + 1)];
        if (a >= level && b < level) {
            const double s = (a - level) / (a - b);
            return mesh.ys[g.idx(i, j)] * (1.0 - s) + mesh.ys[g.idx(i, j + 1)] * s;
        }
    }
    return -1.0;
}

}  // namespace

TEST_SUITE("bl_sim") {

TEST_CASE("fractional-flow functions match their closed forms") {
    // Quadratic relative permeabilities with mobility ratio 2 and gravity
    // number 5 give f(u) = u^2/(3D), g(u) = f(u)(1-5(1-u)^2)/3, D = u^2+(1-u)^2.
    CHECK(bl_flux_x(0.0) == 0.0);
    CHECK(bl_flux_x(1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(bl_flux_x(0.5) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(bl_flux_y(0.0) == 0.0);
    CHECK(bl_flux_y(1.0) == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
    CHECK(bl_flux_y(0.5) == doctest::Approx(-1.0 / 72.0).epsilon(1e-15));
    // The vertical flux vanishes where the gravity factor 1-5(1-u)^2 does.
    CHECK(bl_flux_y(1.0 - 1.0 / std::sqrt(5.0)) == doctest::Approx(0.0).epsilon(1e-16));

    CHECK(bl_flux_x_prime(0.0) == 0.0);
    CHECK(bl_flux_x_prime(1.0) == 0.0);
    CHECK(bl_flux_x_prime(0.5) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(bl_flux_y_prime(0.5) == doctest::Approx(2.0 / 9.0).epsilon(1e-15));

    // Derivatives agree with central differences of the fluxes.
    const double hfd = 1e-6;
    for (double u = 0.05; u < 1.0; u += 0.1) {
        const double dfx = (bl_flux_x(u + hfd) - bl_flux_x(u - hfd)) / (2.0 * hfd);
        const double dfy = (bl_flux_y(u + hfd) - bl_flux_y(u - hfd)) / (2.0 * hfd);
        CHECK(bl_flux_x_prime(u) == doctest::Approx(dfx).epsilon(5e-8));
        CHECK(bl_flux_y_prime(u) == doctest::Approx(dfy).epsilon(5e-8));
        // The horizontal flux is strictly increasing between the pure phases.
        CHECK(bl_flux_x_prime(u) > 0.0);
        CHECK(bl_flux_x(u + 0.05) > bl_flux_x(u));
    }
}

TEST_CASE("initial saturation is a smoothed disc of area pi/18") {
    const double r0 = std::sqrt(1.0 / 18.0);
    const double w = 1.0 / 79.0;
    const auto ic = bl_initial_front(w);

    CHECK(ic(0.5, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ic(0.5 + r0, 0.5) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(ic(0.5, 0.5 - r0) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(ic(0.0, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ic(1.0, 0.5) < 1e-10);

    // Rotationally symmetric and radially non-increasing.
    for (double d : {0.1, 0.2, 0.3, 0.45}) {
        CHECK(ic(0.5 + d, 0.5) == doctest::Approx(ic(0.5, 0.5 + d)).epsilon(1e-14));
        CHECK(ic(0.5 + d, 0.5) == doctest::Approx(ic(0.5 - d, 0.5)).epsilon(1e-14));
    }
    double prev = ic(0.5, 0.5);
    for (double r = 0.01; r < 0.7; r += 0.01) {
        const double cur = ic(0.5 + r / std::sqrt(2.0), 0.5 + r / std::sqrt(2.0));
        CHECK(cur <= prev + 1e-15);
        prev = cur;
    }

    // Counting oracle: the u > 1/2 region is the disc of radius sqrt(1/18),
    // whose area fraction is pi/18 = 0.174533 of the unit square.
    const int m = 501;
    int inside = 0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (ic(i / double(m - 1), j / double(m - 1)) > 0.5) ++inside;
    const double frac = double(inside) / double(m) / double(m);
    CHECK(frac == doctest::Approx(std::acos(-1.0) / 18.0).epsilon(0.02));
    CHECK(std::abs(frac - 0.174533) < 3e-3);

    CHECK_THROWS_AS(bl_initial_front(0.0), ConfigError);
    CHECK_THROWS_AS(bl_initial_front(-0.1), ConfigError);
}

TEST_CASE("arc-length density responds to solution gradients") {
    const MeshMapping mesh = identity_mesh(33);
    const size_t m = mesh.xs.size();

    // Constant saturation: no gradient, density exactly one everywhere.
    {
        const std::vector<double> u(m, 0.7);
        for (double d : arc_length_density(mesh, u)) CHECK(d == 1.0);
    }

    // u = x on the identity mesh: |grad u| = 1, density sqrt(2) everywhere.
    {
        const std::vector<double> u = sample(mesh, [](double x, double) { return x; });
        for (double d : arc_length_density(mesh, u))
            CHECK(d == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
    }

    // One-dimensional tanh layer of width 0.05: the peak density matches the
    // analytic maximum slope, sqrt(1 + (0.5/0.05)^2) = sqrt(101).
    {
        const MeshMapping fine = identity_mesh(201);
        const std::vector<double> u = sample(
            fine, [](double x, double) { return 0.5 * (1.0 - std::tanh((x - 0.5) / 0.05)); });
        const std::vector<double> d = arc_length_density(fine, u);
        const auto it = std::max_element(d.begin(), d.end());
        CHECK(*it == doctest::Approx(std::sqrt(101.0)).epsilon(0.01));
        // The maximum sits on the mid-domain column where the layer is centred.
        const int i_max = int((it - d.begin()) / fine.grid.ny);
        CHECK(std::abs(i_max - 100) <= 1);
        for (double v : d) CHECK(v >= 1.0);

        // The smoothed, mean-normalised monitor keeps the peak on the layer
        // and averages exactly to one.
        const std::vector<double> mon = front_monitor(fine, u);
        double mean = 0.0;
        for (double v : mon) mean += v;
        mean /= double(mon.size());
        CHECK(mean == doctest::Approx(1.0).epsilon(1e-13));
        const auto itm = std::max_element(mon.begin(), mon.end());
        CHECK(std::abs(int((itm - mon.begin()) / fine.grid.ny) - 100) <= 1);
    }

    // Flat data produce the unit monitor without any smoothing residue.
    {
        const std::vector<double> u(m, 0.0);
        for (double v : front_monitor(mesh, u)) CHECK(v == 1.0);
    }

    // A folded mesh is reported, not silently differentiated.
    {
        MeshMapping bad = mesh;
        for (double& x : bad.xs) x = -x;
        const std::vector<double> u(m, 0.2);
        CHECK_THROWS_WITH_AS(arc_length_density(bad, u), doctest::Contains("tangled"),
                             SolverError);
    }
}

TEST_CASE("frozen mesh reduces to the plain fixed-grid scheme") {
    const int n = 33;
    const double h = 1.0 / double(n - 1);
    const double visc = 1.1e-3, cfl = 0.4, tend = 0.02;

    BLConfig cfg;
    cfg.n = n;
    cfg.viscosity = visc;
    cfg.cfl = cfl;
    cfg.tend = tend;
    cfg.moving_mesh = false;
    cfg.adapt_rounds = 0;
    cfg.initial = bl_initial_front(h);
    const BLResult got = run_buckley_leverett(cfg);

    // Oracle: same fluxes and Heun stages on a plain Cartesian grid with
    // second-order one-sided edge stencils, no mesh terms at all.
    const int N = n * n;
    const auto id = [n](int i, int j) { return i * n + j; };
    std::vector<double> u(N);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) u[id(i, j)] = cfg.initial(i * h, j * h);

    const auto dx = [&](const std::vector<double>& f, std::vector<double>& out) {
        for (int j = 0; j < n; ++j) {
            out[id(0, j)] =
                (-3.0 * f[id(0, j)] + 4.0 * f[id(1, j)] - f[id(2, j)]) / (2.0 * h);
            out[id(n - 1, j)] = (3.0 * f[id(n - 1, j)] - 4.0 * f[id(n - 2, j)] +
                                 f[id(n - 3, j)]) /
                                (2.0 * h);
            for (int i = 1; i < n - 1; ++i)
                out[id(i, j)] = (f[id(i + 1, j)] - f[id(i - 1, j)]) / (2.0 * h);
        }
    };
    const auto dy = [&](const std::vector<double>& f, std::vector<double>& out) {
        for (int i = 0; i < n; ++i) {
            out[id(i, 0)] =
                (-3.0 * f[id(i, 0)] + 4.0 * f[id(i, 1)] - f[id(i, 2)]) / (2.0 * h);
            out[id(i, n - 1)] = (3.0 * f[id(i, n - 1)] - 4.0 * f[id(i, n - 2)] +
                                 f[id(i, n - 3)]) /
                                (2.0 * h);
            for (int j = 1; j < n - 1; ++j)
                out[id(i, j)] = (f[id(i, j + 1)] - f[id(i, j - 1)]) / (2.0 * h);
        }
    };
    std::vector<double> fl(N), gl(N), fx(N), gy(N), ux(N), uy(N), lx(N), ly(N), um(N),
        r1(N), r2(N);
    const auto rhs = [&](const std::vector<double>& uu, std::vector<double>& out) {
        for (int k = 0; k < N; ++k) {
            fl[k] = bl_flux_x(uu[k]);
            gl[k] = bl_flux_y(uu[k]);
        }
        dx(fl, fx);
        dy(gl, gy);
        dx(uu, ux);
        dy(uu, uy);
        dx(ux, lx);
        dy(uy, ly);
        for (int k = 0; k < N; ++k)
            out[k] = -fx[k] - gy[k] + visc * (lx[k] + ly[k]);
    };

    double t = 0.0;
    int steps = 0;
    while (t < tend - 1e-12) {
        double vmax = 0.0;
        for (int k = 0; k < N; ++k) {
            const double v = std::abs(bl_flux_x_prime(u[k])) / h +
                             std::abs(bl_flux_y_prime(u[k])) / h;
            vmax = std::max(vmax, v);
        }
        double dt = std::min(cfl / std::max(vmax, 1e-12), 0.25 * h * h / visc);
        dt = std::min(dt, tend - t);
        rhs(u, r1);
        for (int k = 0; k < N; ++k) um[k] = u[k] + 0.5 * dt * r1[k];
        rhs(um, r2);
        for (int k = 0; k < N; ++k) u[k] += dt * r2[k];
        t += dt;
        ++steps;
    }

    CHECK(got.steps == steps);
    CHECK(got.time == doctest::Approx(tend).epsilon(1e-14));
    double udiff = 0.0;
    for (int k = 0; k < N; ++k) udiff = std::max(udiff, std::abs(got.u[k] - u[k]));
    CHECK(udiff <= 1e-13);

    // The mesh never budged from the uniform grid.
    const MeshMapping ident = identity_mesh(n);
    for (int k = 0; k < N; ++k) {
        CHECK(got.mesh.xs[k] == ident.xs[k]);
        CHECK(got.mesh.ys[k] == ident.ys[k]);
    }
}

TEST_CASE("uniform saturation stays uniform and leaves the mesh alone") {
    BLConfig cfg;
    cfg.n = 21;
    cfg.tend = 0.01;
    cfg.adapt_rounds = 5;
    cfg.initial = [](double, double) { return 0.3; };
    const BLResult out = run_buckley_leverett(cfg);

    CHECK(out.steps > 0);
    for (double v : out.u) CHECK(v == 0.3);
    const MeshMapping ident = identity_mesh(21);
    for (size_t k = 0; k < out.u.size(); ++k) {
        CHECK(out.mesh.xs[k] == doctest::Approx(ident.xs[k]).epsilon(1e-12));
        CHECK(out.mesh.ys[k] == doctest::Approx(ident.ys[k]).epsilon(1e-12));
    }
    CHECK(out.final_residual <= 1e-10);
    CHECK(out.quality.max_qs == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("moving mesh tracks the expanding front") {
    BLConfig cfg;
    cfg.n = 41;
    cfg.tend = 0.1;
    const BLResult out = run_buckley_leverett(cfg);

    CHECK(out.time == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(out.steps >= 60);
    CHECK(out.steps <= 75);
    CHECK(out.final_residual > 0.0);
    CHECK(out.final_residual <= 5.0);
    for (double v : out.u) {
        CHECK(v >= -0.01);
        CHECK(v <= 1.01);
    }

    // Cells concentrate on the front: peak skewness and arc-length density.
    CHECK(out.quality.max_qs >= 5.0);
    CHECK(out.quality.max_qs <= 8.0);
    const std::vector<double> rho = arc_length_density(out.mesh, out.u);
    const double rho_max = *std::max_element(rho.begin(), rho.end());
    CHECK(rho_max >= 50.0);
    CHECK(rho_max <= 75.0);

    // Where the density is high the long mesh axis runs along the front:
    // compare each cell's major stretch direction with the level-set tangent.
    const Grid2D& g = out.mesh.grid;
    const double band_lo = 1.0 + 0.5 * (rho_max - 1.0);
    int band = 0, aligned = 0;
    int besti = 0, bestj = 0;
    double best = -1.0;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            const size_t k = size_t(g.idx(i, j));
            if (rho[k] > best) {
                best = rho[k];
                besti = i;
                bestj = j;
            }
            if (rho[k] <= band_lo) continue;
            const Jacobian2 J = discrete_jacobian(out.mesh, i, j);
            // Forward metric J J^T: its leading eigenvector is the direction
            // the unit computational cell is stretched most into.
            const Mat2 A{J.a11 * J.a11 + J.a12 * J.a12, J.a11 * J.a21 + J.a12 * J.a22,
                         J.a11 * J.a21 + J.a12 * J.a22, J.a21 * J.a21 + J.a22 * J.a22};
            const double tr = A.a11 + A.a22;
            const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * (A.a11 * A.a22 - A.a12 * A.a21)));
            const double lam = 0.5 * (tr + disc);
            double ex = A.a12, ey = lam - A.a11;
            if (std::hypot(ex, ey) < 1e-14) { ex = lam - A.a22; ey = A.a21; }
            const double en = std::hypot(ex, ey);
            // Physical solution gradient via the inverse Jacobian.
            const double det = J.a11 * J.a22 - J.a12 * J.a21;
            const double s1 = (i == 0) ? (-3.0 * out.u[k] + 4.0 * out.u[g.idx(1, j)] - out.u[g.idx(2, j)]) / (2.0 * g.hx())
                              : (i == g.nx - 1) ? (3.0 * out.u[k] - 4.0 * out.u[g.idx(i - 1, j)] + out.u[g.idx(i - 2, j)]) / (2.0 * g.hx())
                              : (out.u[g.idx(i + 1, j)] - out.u[g.idx(i - 1, j)]) / (2.0 * g.hx());
            const double s2 = (j == 0) ? (-3.0 * out.u[k] + 4.0 * out.u[g.idx(i, 1)] - out.u[g.idx(i, 2)]) / (2.0 * g.hy())
                              : (j == g.ny - 1) ? (3.0 * out.u[k] - 4.0 * out.u[g.idx(i, j - 1)] + out.u[g.idx(i, j - 2)]) / (2.0 * g.hy())
                              : (out.u[g.idx(i, j + 1)] - out.u[g.idx(i, j - 1)]) / (2.0 * g.hy());
            const double gx = (J.a22 * s1 - J.a21 * s2) / det;
            const double gyv = (-J.a12 * s1 + J.a11 * s2) / det;
            const double gn = std::hypot(gx, gyv);
            if (gn < 1e-12 || en < 1e-14) continue;
            ++band;
            const double dot = std::abs((ex * gyv - ey * gx) / (en * gn));
            if (std::acos(std::min(1.0, dot)) <= 0.15) ++aligned;
        }
    REQUIRE(band >= 50);
    CHECK(double(aligned) / double(band) >= 0.95);

    // The densest node coincides with the peak-skewness region.
    const QualityReport q = quality_report(out.mesh);
    int cheb = g.nx;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            if (q.qs[g.idx(i, j)] >= 0.9 * q.max_qs)
                cheb = std::min(cheb, std::max(std::abs(i - besti), std::abs(j - bestj)));
    CHECK(cheb <= 1);
}

TEST_CASE("configuration and time-step guards reject bad input") {
    const auto bad = [](auto&& tweak) {
        BLConfig c;
        c.n = 21;
        c.tend = 0.01;
        tweak(c);
        return c;
    };
    CHECK_THROWS_AS(run_buckley_leverett(bad([](BLConfig& c) { c.n = 4; })), ConfigError);
    CHECK_THROWS_AS(run_buckley_leverett(bad([](BLConfig& c) { c.cfl = 0.0; })), ConfigError);
    CHECK_THROWS_AS(run_buckley_leverett(bad([](BLConfig& c) { c.tend = -1.0; })), ConfigError);
    CHECK_THROWS_AS(run_buckley_leverett(bad([](BLConfig& c) { c.viscosity = -1e-3; })), ConfigError);
    CHECK_THROWS_AS(run_buckley_leverett(bad([](BLConfig& c) { c.disp_cap = 0.0; })), ConfigError);
    CHECK_THROWS_AS(run_buckley_leverett(bad([](BLConfig& c) { c.relax_steps = 0; })), ConfigError);
    CHECK_THROWS_AS(run_buckley_leverett(bad([](BLConfig& c) { c.snapshot_times = {0.5}; })),
                    ConfigError);
    CHECK_THROWS_AS(run_buckley_leverett(bad([](BLConfig& c) { c.max_steps = 0; })), ConfigError);
    // Step budget too small to reach the final time.
    CHECK_THROWS_WITH_AS(run_buckley_leverett(bad([](BLConfig& c) {
                             c.tend = 0.1;
                             c.max_steps = 2;
                         })),
                         doctest::Contains("did not reach"), SolverError);

    // Zero end time returns the initial state untouched.
    {
        BLConfig c;
        c.n = 21;
        c.tend = 0.0;
        c.moving_mesh = false;
        c.adapt_rounds = 0;
        c.snapshot_times = {0.0};
        const BLResult out = run_buckley_leverett(c);
        CHECK(out.steps == 0);
        CHECK(out.time == 0.0);
        REQUIRE(out.snapshots.size() == 1);
        CHECK(out.snapshots[0].time == 0.0);
        const MeshMapping ident = identity_mesh(21);
        for (size_t k = 0; k < out.u.size(); ++k) CHECK(out.mesh.xs[k] == ident.xs[k]);
        // The default profile was sampled on that grid: full at the centre.
        CHECK(out.u[ident.grid.idx(10, 10)] > 0.999);
        CHECK(out.quality.max_qs >= 1.0);
    }

    // Snapshot cadence: one record per requested time, in order, each taken
    // at the first step whose end passes the mark.
    {
        BLConfig c;
        c.n = 21;
        c.tend = 0.02;
        c.snapshot_times = {0.01, 0.0, 0.02};
        const BLResult out = run_buckley_leverett(c);
        REQUIRE(out.snapshots.size() == 3);
        CHECK(out.snapshots[0].time == 0.0);
        CHECK(out.snapshots[1].time >= 0.01);
        CHECK(out.snapshots[1].time <= 0.0101);
        CHECK(out.snapshots[2].time == doctest::Approx(0.02).epsilon(1e-12));
        for (const BLSnapshot& s : out.snapshots) {
            CHECK(s.u.size() == out.u.size());
            CHECK(s.mesh.xs.size() == out.u.size());
        }
    }

    // Oversized explicit steps are refused with a hint, and leave the
    // simulator state exactly as it was.
    {
        BLConfig c;
        c.n = 21;
        c.tend = 1.0;
        c.adapt_rounds = 3;
        BLSimulator sim(c);
        const double limit = sim.stable_dt();
        CHECK(limit > 0.0);
        CHECK(limit < 0.1);

        const std::vector<double> u0 = sim.u();
        const std::vector<double> x0 = sim.mesh().xs;
        const std::vector<double> y0 = sim.mesh().ys;
        CHECK_THROWS_WITH_AS(sim.advance(1.0), doctest::Contains("exceeds the stable"),
                             ConfigError);
        CHECK(sim.time() == 0.0);
        CHECK(sim.steps() == 0);
        for (size_t k = 0; k < u0.size(); ++k) {
            CHECK(sim.u()[k] == u0[k]);
            CHECK(sim.mesh().xs[k] == x0[k]);
            CHECK(sim.mesh().ys[k] == y0[k]);
        }

        // A conforming step is accepted and advances the clock by exactly dt.
        const double dt = 0.5 * limit;
        sim.advance(dt);
        CHECK(sim.time() == dt);
        CHECK(sim.steps() == 1);
        CHECK(sim.mesh_velocity_x().size() == u0.size());

        const double taken = sim.advance_auto(1e9);
        CHECK(taken > 0.0);
        CHECK(sim.time() == doctest::Approx(dt + taken).epsilon(1e-15));
        CHECK(sim.steps() == 2);
    }
}

TEST_CASE("the saturation front advances with the flow") {
    BLConfig cfg;
    cfg.n = 41;
    cfg.tend = 0.1;
    cfg.moving_mesh = false;
    cfg.adapt_rounds = 0;
    const BLSimulator init(cfg);
    const double x_start = row_crossing(init.mesh(), init.u(), 0.5, 20);
    const double y_start = col_crossing(init.mesh(), init.u(), 0.5, 20);
    REQUIRE(x_start > 0.6);
    REQUIRE(y_start > 0.6);

    const BLResult out = run_buckley_leverett(cfg);
    const double x_end = row_crossing(out.mesh, out.u, 0.5, 20);
    const double y_end = col_crossing(out.mesh, out.u, 0.5, 20);
    REQUIRE(x_end > 0.0);
    REQUIRE(y_end > 0.0);
    // Both flux derivatives are positive at mid saturation, so the leading
    // edge moves right and up.
    CHECK(x_end > x_start + 0.02);
    CHECK(y_end > y_start + 0.005);
}

}  // TEST_SUITE
