#include <doctest.h>

#include <cmath>
#include <random>

#include "otmesh/errors.hpp"
#include "otmesh/grid.hpp"
#include "otmesh/linalg.hpp"
#include "otmesh/mesh.hpp"
#include "otmesh/pchip.hpp"
#include "otmesh/quadrature.hpp"
#include "otmesh/quality.hpp"

using namespace otmesh;

namespace {

Mat2 rotation(double t) { return {std::cos(t), -std::sin(t), std::sin(t), std::cos(t)}; }

Mat2 random_symmetric(std::mt19937& rng, double lo = -3.0, double hi = 3.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    const double a = u(rng), b = u(rng), c = u(rng);
    return {a, b, b, c};
}

/// Random symmetric positive-definite matrix (valid mesh Jacobian).
Mat2 random_spd(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    const Mat2 m{a, b, c, d};
    return m.transpose() * m + Mat2::identity() * 0.05;
}

double frob(const Mat2& m) { return std::sqrt(m.frobenius2()); }

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("grid spacing and node layout") {
    Grid2D g;
    g.nx = 5;
    g.ny = 4;
    g.x0 = -0.5;
    g.x1 = 0.5;
    g.y0 = 0.0;
    g.y1 = 2.0;
    g.check();
    CHECK(g.hx() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g.hy() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(g.xi(4) == doctest::Approx(0.5));
    CHECK(g.idx(2, 3) == 2 * 4 + 3);

    g.bcx = AxisBC::periodic;
    CHECK(g.hx() == doctest::Approx(0.2));  // no duplicate seam node

    Grid2D bad;
    bad.nx = 2;
    CHECK_THROWS_AS(bad.check(), std::invalid_argument);
}

TEST_CASE("eig_sym2 on diagonal and symmetric matrices") {
    // diag(2,3): larger magnitude first.
    EigenPair2 e = eig_sym2(Mat2::diagonal(2.0, 3.0));
    CHECK(e.lambda1 == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(e.lambda2 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(e.e1.x == doctest::Approx(0.0));
    CHECK(std::abs(e.e1.y) == doctest::Approx(1.0));
    CHECK(!e.degenerate);

    // Pure off-diagonal: eigenvalues +-1, e1 along the diagonal direction.
    e = eig_sym2(Mat2{0.0, 1.0, 1.0, 0.0});
    CHECK(e.lambda1 == doctest::Approx(1.0));
    CHECK(e.lambda2 == doctest::Approx(-1.0));
    CHECK(e.e1.x == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(e.e1.y == doctest::Approx(1.0 / std::sqrt(2.0)));

    // [[2,1],[1,2]]: roots of the characteristic polynomial computed
    // independently here as the oracle.
    const double tr = 4.0, det = 3.0;
    const double disc = std::sqrt(tr * tr / 4.0 - det);
    const double l_hi = tr / 2.0 + disc, l_lo = tr / 2.0 - disc;
    e = eig_sym2(Mat2{2.0, 1.0, 1.0, 2.0});
    CHECK(e.lambda1 == doctest::Approx(l_hi).epsilon(1e-14));
    CHECK(e.lambda2 == doctest::Approx(l_lo).epsilon(1e-14));
    CHECK(e.e1.x == doctest::Approx(std::sqrt(0.5)));
    CHECK(e.e1.y == doctest::Approx(std::sqrt(0.5)));
    CHECK(e.e2.dot(e.e1) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("eig_sym2 flags degenerate input and reconstructs otherwise") {
    EigenPair2 e = eig_sym2(Mat2::identity());
    CHECK(e.degenerate);
    CHECK(e.lambda1 == doctest::Approx(1.0));
    CHECK(e.lambda2 == doctest::Approx(1.0));

    std::mt19937 rng(12345);
    for (int trial = 0; trial < 1000; ++trial) {
        const Mat2 j = random_symmetric(rng);
        const EigenPair2 p = eig_sym2(j);
        CHECK(std::abs(p.e1.norm() - 1.0) <= 1e-12);
        CHECK(std::abs(p.e2.norm() - 1.0) <= 1e-12);
        CHECK(std::abs(p.e1.dot(p.e2)) <= 1e-10);
        CHECK(std::abs(p.lambda1) >= std::abs(p.lambda2) - 1e-14);
        const Mat2 recon = Mat2::outer(p.e1, p.lambda1) + Mat2::outer(p.e2, p.lambda2);
        CHECK(frob(recon - j) <= 1e-12 * std::max(1.0, frob(j)));
    }
}

TEST_CASE("skewness values and bounds") {
    // Conformal elements are perfectly isotropic.
    CHECK(skewness(rotation(0.73) * 2.5) == doctest::Approx(1.0).epsilon(1e-14));

    // Singular-value pairs straight from the analytic eigenvalue profiles.
    CHECK(skewness(Mat2::diagonal(3.0 / 51.0, 1.0)) == doctest::Approx(8.529).epsilon(1.2e-4));
    CHECK(skewness(Mat2::diagonal(3.0, 1.8)) == doctest::Approx(1.13).epsilon(4.5e-3));

    CHECK_THROWS_WITH_AS(skewness(Mat2{1.0, 2.0, 0.5, 1.0}),
                         doctest::Contains("degenerate element"), std::domain_error);

    std::mt19937 rng(777);
    for (int trial = 0; trial < 500; ++trial) {
        const Mat2 j = random_spd(rng);
        CHECK(skewness(j) >= 1.0 - 1e-13);
    }
}

TEST_CASE("skewness is invariant under rotations of the element") {
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> ang(0.0, 6.283185307179586);
    for (int trial = 0; trial < 200; ++trial) {
        const Mat2 j = random_spd(rng);
        const Mat2 u = rotation(ang(rng));
        const Mat2 v = rotation(ang(rng));
        CHECK(skewness(u * j * v) == doctest::Approx(skewness(j)).epsilon(1e-11));
    }
}

TEST_CASE("alignment measure identities") {
    CHECK(alignment_measure(rotation(1.1) * 0.7, MetricTensor2{}) == doctest::Approx(1.0));

    // M = diag(4,1), J = I: Q_a = (4+1)/(2*sqrt(4)) = 1.25.
    MetricTensor2 m;
    m.m11 = 4.0;
    m.m22 = 1.0;
    CHECK(alignment_measure(Mat2::identity(), m) == doctest::Approx(1.25).epsilon(1e-14));

    // M = theta * (J J^T)^{-1} makes every element equilateral.
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 300; ++trial) {
        Mat2 j{u(rng), u(rng), u(rng), u(rng)};
        if (std::abs(j.det()) < 0.05) continue;
        const Mat2 g = j * j.transpose();
        const double dg = g.det();
        const double theta = 1.7;
        MetricTensor2 minv;
        minv.m11 = theta * g.a22 / dg;
        minv.m12 = -theta * g.a12 / dg;
        minv.m22 = theta * g.a11 / dg;
        minv.theta = theta;
        CHECK(alignment_measure(j, minv) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("metric_from_jacobian hand values") {
    MetricTensor2 m = metric_from_jacobian(Mat2::identity(), 1.0);
    CHECK(m.m11 == doctest::Approx(1.0));
    CHECK(m.m22 == doctest::Approx(1.0));
    CHECK(m.m12 == doctest::Approx(0.0));

    // Feature-frame diagonal: J = diag(theta/rho1, 1) -> M = diag(rho1^2/theta, theta).
    const double theta = 3.0, rho1 = 51.0;
    m = metric_from_jacobian(Mat2::diagonal(theta / rho1, 1.0), theta);
    CHECK(m.m11 == doctest::Approx(rho1 * rho1 / theta).epsilon(1e-12));
    CHECK(m.m22 == doctest::Approx(theta).epsilon(1e-12));

    m = metric_from_jacobian(Mat2::diagonal(2.0, 0.5), 1.0);
    CHECK(m.m11 == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(m.m22 == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(std::sqrt(m.det()) * Mat2::diagonal(2.0, 0.5).det() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("metric determinant identity and self-alignment on random elements") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> th(0.2, 5.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const Mat2 j = random_spd(rng);
        const double theta = th(rng);
        const MetricTensor2 m = metric_from_jacobian(j, theta);
        CHECK(m.spd());
        CHECK(std::sqrt(m.det()) * j.det() == doctest::Approx(theta).epsilon(1e-10));
        CHECK(alignment_measure(j, m) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("discrete_jacobian exact cases") {
    Grid2D g;
    g.nx = g.ny = 11;

    // Identity map, Neumann edges included.
    MeshMapping ident = MeshMapping::identity(g);
    for (int i : {0, 5, 10})
        for (int j : {0, 3, 10}) {
            const Jacobian2 jac = discrete_jacobian(ident, i, j);
            CHECK(jac.a11 == doctest::Approx(1.0).epsilon(1e-13));
            CHECK(jac.a22 == doctest::Approx(1.0).epsilon(1e-13));
            CHECK(std::abs(jac.a12) <= 1e-13);
            CHECK(std::abs(jac.a21) <= 1e-13);
        }

    // Linear map: one-sided edge stencils are exact too.
    MeshMapping lin(g);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) lin.set_pos(i, j, {2.0 * g.xi(i), 3.0 * g.eta(j)});
    for (int i : {0, 4, 10})
        for (int j : {0, 7, 10}) {
            const Jacobian2 jac = discrete_jacobian(lin, i, j);
            CHECK(jac.a11 == doctest::Approx(2.0).epsilon(1e-13));
            CHECK(jac.a22 == doctest::Approx(3.0).epsilon(1e-13));
        }

    // x = xi^2: central difference is exact on quadratics. Node at xi = 0.5.
    Grid2D fine;
    fine.nx = 101;
    fine.ny = 3;
    MeshMapping quad(fine);
    for (int i = 0; i < fine.nx; ++i)
        for (int j = 0; j < fine.ny; ++j) quad.set_pos(i, j, {fine.xi(i) * fine.xi(i), fine.eta(j)});
    const Jacobian2 jac = discrete_jacobian(quad, 50, 1);
    CHECK(fine.xi(50) == doctest::Approx(0.5));
    CHECK(jac.a11 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("discrete_jacobian periodic wrap carries the domain period") {
    Grid2D g;
    g.nx = g.ny = 16;
    g.bcx = g.bcy = AxisBC::periodic;
    const MeshMapping ident = MeshMapping::identity(g);
    for (int i : {0, 15})
        for (int j : {0, 15}) {
            const Jacobian2 jac = discrete_jacobian(ident, i, j);
            CHECK(jac.a11 == doctest::Approx(1.0).epsilon(1e-13));
            CHECK(jac.a22 == doctest::Approx(1.0).epsilon(1e-13));
        }
}

TEST_CASE("quality_report on the identity mesh") {
    Grid2D g;
    g.nx = g.ny = 9;
    const MeshMapping mesh = MeshMapping::identity(g);
    const DensityField one = DensityField::from_function([](double, double) { return 1.0; });
    const QualityReport rep = quality_report(mesh, one);
    CHECK(rep.theta == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rep.max_resid <= 1e-13);
    CHECK(rep.max_qs == doctest::Approx(1.0).epsilon(1e-13));
    for (double qa : rep.qa) CHECK(qa == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("quality_report rejects tangled meshes with a node index") {
    Grid2D g;
    g.nx = g.ny = 5;
    MeshMapping mesh = MeshMapping::identity(g);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) mesh.set_pos(i, j, {-g.xi(i), g.eta(j)});
    CHECK_THROWS_WITH_AS(quality_report(mesh), doctest::Contains("tangled"), SolverError);
}

TEST_CASE("node_mean_weight sums to one") {
    for (AxisBC bx : {AxisBC::neumann, AxisBC::periodic})
        for (AxisBC by : {AxisBC::neumann, AxisBC::periodic}) {
            Grid2D g;
            g.nx = 7;
            g.ny = 5;
            g.bcx = bx;
            g.bcy = by;
            double sum = 0.0;
            for (int i = 0; i < g.nx; ++i)
                for (int j = 0; j < g.ny; ++j) sum += node_mean_weight(g, i, j);
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
        }
}

TEST_CASE("ellipse_field geometry and stride") {
    Grid2D g;
    g.nx = g.ny = 10;
    const MeshMapping mesh = MeshMapping::identity(g);
    const QualityReport rep = quality_report(mesh);
    const auto ellipses = ellipse_field(rep, 3);
    CHECK(static_cast<int>(ellipses.size()) == 4 * 4);  // i, j in {0,3,6,9}
    for (const auto& el : ellipses) {
        CHECK(el.semi1 == doctest::Approx(el.semi2).epsilon(1e-12));  // circles
        CHECK(el.semi1 == doctest::Approx(0.5 * g.hx()).epsilon(1e-12));
    }
    CHECK_THROWS_AS(ellipse_field(rep, 0), std::invalid_argument);
}

TEST_CASE("adaptive Simpson quadrature") {
    CHECK(adaptive_simpson([](double x) { return x * x; }, 0.0, 1.0) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    // Sharp bump: 50 sech^2(50 (t - 1/2)) integrates to 2 tanh(25).
    const double exact = 2.0 * std::tanh(25.0);
    const double got = adaptive_simpson(
        [](double t) {
            const double c = std::cosh(50.0 * (t - 0.5));
            return 50.0 / (c * c);
        },
        0.0, 1.0, 1e-10);
    CHECK(got == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("pchip interpolation is exact on lines and preserves monotonicity") {
    std::vector<double> x{0.0, 0.3, 0.7, 1.2, 2.0};
    std::vector<double> lin;
    for (double v : x) lin.push_back(2.0 * v - 1.0);
    const PchipSpline s = pchip_build(x, lin);
    for (double t = 0.0; t <= 2.0; t += 0.05) {
        CHECK(s.eval(t) == doctest::Approx(2.0 * t - 1.0).epsilon(1e-13));
        CHECK(s.derivative(t) == doctest::Approx(2.0).epsilon(1e-12));
    }

    std::mt19937 rng(55);
    std::uniform_real_distribution<double> step(0.01, 1.0);
    std::vector<double> xs{0.0}, ys{0.0};
    for (int k = 0; k < 30; ++k) {
        xs.push_back(xs.back() + step(rng));
        ys.push_back(ys.back() + step(rng));
    }
    const PchipSpline mono = pchip_build(xs, ys);
    double prev = mono.eval(xs.front());
    for (double t = xs.front(); t <= xs.back(); t += 1e-3) {
        const double v = mono.eval(t);
        CHECK(v >= prev - 1e-12);
        prev = v;
    }

    CHECK_THROWS_AS(pchip_build({0.0, 0.0, 1.0}, {0.0, 1.0, 2.0}), std::invalid_argument);
}

}  // TEST_SUITE
