#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rfl/errors.hpp"
#include "rfl/integrate.hpp"
#include "rfl/operators.hpp"
#include "rfl/stencil.hpp"
#include "support.hpp"

using namespace rfl;
using rfl::test::kTwoPi;

namespace {

TensorField scalar_from(const std::shared_ptr<const ChartGrid>& grid, double (*fn)(const double*)) {
    TensorField f = TensorField::scalar(grid);
    for (std::size_t p = 0; p < f.nodes(); ++p) f(p, 0) = fn(grid->coords(p).data());
    return f;
}

MetricState conformal_metric(int nodes, const char* u = "0.1*sin(x)*sin(y)", int order = 4) {
    return instantiate(test::conformal_spec(u), test::torus(nodes), order).metric;
}

} // namespace

TEST_CASE("grid: torus and box spacing, wrap and weights") {
    const ChartGrid t = ChartGrid::torus({8, 10}, {0, 0}, {1, 2});
    CHECK(t.spacing()[0] == doctest::Approx(1.0 / 8));
    CHECK(t.spacing()[1] == doctest::Approx(0.2));
    CHECK(t.closed());
    std::size_t q = 0;
    CHECK(t.shift(0, 0, -1, q));
    CHECK(t.index(q)[0] == 7);

    const ChartGrid b = ChartGrid::box({5, 5}, {-1, -1}, {1, 1});
    CHECK_FALSE(b.closed());
    CHECK(b.spacing()[0] == doctest::Approx(0.5));
    CHECK_FALSE(b.shift(0, 1, -1, q));
    CHECK(b.weight(0) == doctest::Approx(0.25 * 0.25));
    CHECK(b.weight(b.node({2, 2})) == doctest::Approx(0.25));
    CHECK(b.boundary_distance(b.node({1, 3})) == 1);
    for (std::size_t p = 0; p < b.node_count(); ++p) CHECK(b.node(b.index(p)) == p);

    CHECK_THROWS_AS(ChartGrid({4, 8}, {0.1, 0.1}, {true, true}), ConfigError);
    CHECK_THROWS_AS(ChartGrid({8, 8}, {0.0, 0.1}, {true, true}), ConfigError);
}

TEST_CASE("tensor field: symmetric writes, arithmetic and shape checks") {
    auto g = test::torus(8);
    TensorField a = TensorField::sym2(g);
    a.set_sym(3, 0, 1, 2.5);
    CHECK(a(3, 1) == 2.5);
    CHECK(a(3, 2) == 2.5);
    TensorField b = 2.0 * a;
    b -= a;
    CHECK(test::max_diff(a, b) == 0.0);
    CHECK_THROWS_AS(a += TensorField::vector(g), ShapeError);
    CHECK_THROWS_AS(a += TensorField::sym2(test::torus(10)), ShapeError);
    CHECK_THROWS_AS(TensorField(g, {Variance::covariant}, true), ShapeError);
}

TEST_CASE("stencil: Fornberg weights and central pairs") {
    const double xs[3] = {-1, 0, 1};
    auto w = fornberg_weights(0.0, xs, 1);
    CHECK(w[0] == doctest::Approx(-0.5));
    CHECK(w[1] == doctest::Approx(0.0));
    CHECK(w[2] == doctest::Approx(0.5));
    auto w2 = fornberg_weights(0.0, xs, 2);
    CHECK(w2[0] == doctest::Approx(1.0));
    CHECK(w2[1] == doctest::Approx(-2.0));
    auto c4 = central_first_weights(4);
    CHECK(c4[0] == doctest::Approx(2.0 / 3.0));
    CHECK(c4[1] == doctest::Approx(-1.0 / 12.0));
    CHECK_THROWS_AS(central_first_weights(3), ConfigError);
}

TEST_CASE("stencil: periodic derivative of sin converges at the stencil order") {
    for (int order : {2, 4, 6}) {
        std::vector<double> err;
        for (int n : {16, 32, 64}) {
            auto grid = test::torus(n, 1);
            Differ d(grid, order);
            TensorField f = scalar_from(grid, [](const double* x) { return std::sin(x[0]); });
            TensorField df = d.partial(f, 0);
            double e = 0.0;
            for (std::size_t p = 0; p < f.nodes(); ++p)
                e = std::max(e, std::abs(df(p, 0) - std::cos(grid->coords(p)[0])));
            err.push_back(e);
        }
        CHECK(test::slope(err) > order - 0.3);
    }
}

TEST_CASE("stencil: constants differentiate to exactly zero, box windows are polynomial-exact") {
    auto grid = test::box(11, 1.0, 1);
    Differ d(grid, 4);
    TensorField c = TensorField::scalar(grid);
    for (double& v : c.data()) v = 3.7;
    CHECK(test::max_abs(d.partial(c, 0)) == 0.0);
    TensorField cube = scalar_from(grid, [](const double* x) { return x[0] * x[0] * x[0] - x[0]; });
    TensorField dc = d.partial(cube, 0);
    for (std::size_t p = 0; p < cube.nodes(); ++p) {
        const double x = grid->coords(p)[0];
        CHECK(dc(p, 0) == doctest::Approx(3 * x * x - 1).epsilon(1e-10));
    }
}

TEST_CASE("metric state: rejects degenerate and asymmetric metrics") {
    auto grid = test::torus(8);
    TensorField g = TensorField::sym2(grid);
    for (std::size_t p = 0; p < g.nodes(); ++p) {
        g.set_sym(p, 0, 0, 1.0);
        g.set_sym(p, 1, 1, 1.0);
    }
    g.set_sym(5, 1, 1, -1.0);
    try {
        MetricState m(g);
        FAIL("expected DegenerateMetricError");
    } catch (const DegenerateMetricError& e) {
        CHECK(e.node() == 5);
    }
    g.set_sym(5, 1, 1, 1.0);
    g(7, 1) = 0.3;  // breaks symmetry at one node
    CHECK_THROWS_AS(MetricState{g}, ShapeError);
}

TEST_CASE("curvature: flat torus is flat") {
    auto inst = instantiate(test::flat_spec(2), test::torus(16));
    CHECK(inst.metric.ricci().max_abs() == 0.0);
    CHECK(inst.metric.riemann().max_abs() == 0.0);
    CHECK(inst.metric.scalar().max_abs() == 0.0);
}

TEST_CASE("curvature: conformal torus converges to the closed form") {
    for (int n : {2, 3}) {
        const char* u = n == 2 ? "0.1*sin(x)*sin(y)" : "0.1*sin(x)*cos(y) + 0.05*sin(z)*sin(x)";
        std::vector<double> eg, er, es, ek;
        const std::vector<int> sizes = n == 2 ? std::vector<int>{16, 32, 64} : std::vector<int>{10, 20, 40};
        for (int N : sizes) {
            auto inst = instantiate(test::conformal_spec(u, n), test::torus(N, n));
            ExactFields ex = sample(*inst.exact, inst.metric.grid_ptr());
            eg.push_back(test::max_diff(inst.metric.christoffel(), ex.gamma));
            er.push_back(test::max_diff(inst.metric.riemann(), ex.rm));
            ek.push_back(test::max_diff(inst.metric.ricci(), ex.ric));
            es.push_back(test::max_diff(inst.metric.scalar(), ex.s));
        }
        INFO("n = " << n);
        CHECK(test::slope(eg) >= 1.8);
        CHECK(test::slope(er) >= 1.8);
        CHECK(test::slope(ek) >= 1.8);
        CHECK(test::slope(es) >= 1.8);
        CHECK(es.back() < 5e-4);
    }
}

TEST_CASE("curvature: algebraic symmetries and first Bianchi identity") {
    MetricState g = conformal_metric(24);
    const TensorField& rm = g.riemann();
    const int n = 2;
    double anti = 0.0, bianchi = 0.0;
    auto at = [&](std::size_t p, int i, int j, int k, int l) { return rm(p, ((i * n + j) * n + k) * n + l); };
    for (std::size_t p = 0; p < rm.nodes(); ++p)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        anti = std::max(anti, std::abs(at(p, i, j, k, l) + at(p, j, i, k, l)));
                        bianchi = std::max(bianchi, std::abs(at(p, i, j, k, l) + at(p, j, k, i, l) + at(p, k, i, j, l)));
                    }
    CHECK(anti < 1e-13);
    CHECK(bianchi < 1e-13);

    // pair symmetry and antisymmetry in the last pair hold up to truncation
    MetricState g3 = instantiate(test::conformal_spec("0.2*sin(x)*cos(y) + 0.1*sin(z)", 3), test::torus(16, 3)).metric;
    const TensorField& r3 = g3.riemann();
    double pair = 0.0, last = 0.0;
    const int m = 3;
    auto at3 = [&](std::size_t p, int i, int j, int k, int l) { return r3(p, ((i * m + j) * m + k) * m + l); };
    for (std::size_t p = 0; p < r3.nodes(); p += 7)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < m; ++k)
                    for (int l = 0; l < m; ++l) {
                        pair = std::max(pair, std::abs(at3(p, i, j, k, l) - at3(p, k, l, i, j)));
                        last = std::max(last, std::abs(at3(p, i, j, k, l) + at3(p, i, j, l, k)));
                    }
    CHECK(pair < 1e-3);
    CHECK(last < 1e-3);
}

TEST_CASE("curvature: round sphere patch has sectional curvature 1/r^2") {
    FamilySpec s;
    s.kind = FamilyKind::round_sphere;
    s.n = 2;
    s.radius = 1.5;
    std::vector<double> ek, eg;
    for (int N : {16, 32, 64}) {
        auto grid = std::make_shared<const ChartGrid>(
            ChartGrid({N + 1, 2 * N}, {(std::numbers::pi - 1.0) / N, kTwoPi / (2 * N)}, {false, true}, {0.5, 0.0}));
        auto inst = instantiate(s, grid);
        ExactFields ex = sample(*inst.exact, grid);
        eg.push_back(test::max_diff(inst.metric.christoffel(), ex.gamma));
        double e = 0.0;
        for (std::size_t p = 0; p < grid->node_count(); ++p)
            if (grid->boundary_distance(p) >= 4)
                e = std::max(e, std::abs(0.5 * inst.metric.scalar()(p, 0) - 1.0 / (1.5 * 1.5)));
        ek.push_back(e);
    }
    CHECK(test::slope(eg) >= 1.8);
    CHECK(test::slope(ek) >= 1.8);
    CHECK(ek.back() < 1e-4);
}

TEST_CASE("operators: metric compatibility of the discrete connection") {
    // Γ_{jai} + Γ_{iaj} reproduces ∂_a g_ij with the same stencil, so ∇g vanishes to roundoff
    for (int N : {16, 32}) {
        MetricState g = conformal_metric(N);
        CHECK(covariant_derivative(g, g.g()).max_abs() < 1e-12);
    }
}

TEST_CASE("operators: Laplacian conventions and exact discrete identities") {
    MetricState g = conformal_metric(32);
    TensorField phi = scalar_from(g.grid_ptr(), [](const double* x) { return std::cos(x[0]) + 0.3 * std::sin(2 * x[1] + x[0]); });

    // Δ̄ = −Δ on scalars
    TensorField lap = laplace_beltrami(g, phi);
    TensorField bar = connection_laplacian(g, phi);
    CHECK(test::max_diff(lap, -1.0 * bar) == 0.0);

    // tr Hess = Δ for the expanded form
    TensorField tr = trace(g, hessian(g, phi));
    CHECK(test::max_diff(tr, laplace_beltrami(g, phi, LaplacianForm::expanded)) < 1e-12);
    // both forms agree to truncation
    CHECK(test::max_diff(lap, laplace_beltrami(g, phi, LaplacianForm::expanded)) < 1e-3);

    // Stokes: the conservative Laplacian integrates to zero
    const double vol = volume(g).value;
    CHECK(std::abs(integrate(g, lap).value) <= 1e-12 * vol);

    // L_{∇f} g = 2 Hess f
    TensorField lie = lie_metric(g, gradient(g, phi));
    CHECK(test::max_diff(lie, 2.0 * hessian(g, phi)) < 1e-12);

    // Δ(x²)-type sign: on the flat torus Δ cos x = −cos x
    auto flat = instantiate(test::flat_spec(2), test::torus(64)).metric;
    TensorField c = scalar_from(flat.grid_ptr(), [](const double* x) { return std::cos(x[0]); });
    TensorField lc = laplace_beltrami(flat, c);
    CHECK(test::max_diff(lc, -1.0 * c) < 1e-5);
}

TEST_CASE("operators: rough Laplacian of a 1-form matches the scalar Laplacian of its components on flat space") {
    auto flat = instantiate(test::flat_spec(2), test::torus(32)).metric;
    TensorField th = TensorField::form(flat.grid_ptr());
    for (std::size_t p = 0; p < th.nodes(); ++p) {
        auto x = flat.grid().coords(p);
        th(p, 0) = std::sin(x[0]);
        th(p, 1) = std::cos(x[1]);
    }
    TensorField lap = connection_laplacian(flat, th);
    for (std::size_t p = 0; p < th.nodes(); ++p) {
        CHECK(lap(p, 0) == doctest::Approx(th(p, 0)).epsilon(1e-4));
        CHECK(lap(p, 1) == doctest::Approx(th(p, 1)).epsilon(1e-4));
    }
}

TEST_CASE("operators: Killing rotation on the sphere patch") {
    FamilySpec s;
    s.kind = FamilyKind::round_sphere;
    s.n = 2;
    s.radius = 1.0;
    std::vector<double> el, ey;
    for (int N : {16, 32}) {
        auto grid = std::make_shared<const ChartGrid>(
            ChartGrid({N + 1, 2 * N}, {(std::numbers::pi - 1.0) / N, kTwoPi / (2 * N)}, {false, true}, {0.5, 0.0}));
        auto inst = instantiate(s, grid);
        TensorField xi = TensorField::vector(grid);
        for (std::size_t p = 0; p < xi.nodes(); ++p) xi(p, 1) = 1.0;  // ∂_θ
        el.push_back(test::max_abs(lie_metric(inst.metric, xi)));
        ey.push_back(test::max_abs(yano_laplacian(inst.metric, lower(inst.metric, xi)), 3));
    }
    // the metric does not depend on θ, so both vanish to roundoff on the patch
    CHECK(el.back() < 1e-12);
    CHECK(ey.back() < 1e-12);
}

TEST_CASE("operators: Weitzenboeck term on constant curvature") {
    // ℜ₂(φ) = −2K(tr φ g − φ) + 2(n−1)K φ for R_ijkl = K(g_il g_jk − g_ik g_jl); vanishes for φ = Ric
    FamilySpec s;
    s.kind = FamilyKind::round_sphere;
    s.n = 2;
    s.radius = 2.0;
    auto grid = std::make_shared<const ChartGrid>(
        ChartGrid({33, 64}, {(std::numbers::pi - 1.0) / 32, kTwoPi / 64}, {false, true}, {0.5, 0.0}));
    auto inst = instantiate(s, grid);
    ExactFields ex = sample(*inst.exact, grid);
    CHECK(test::max_abs(weitzenboeck_r2(inst.metric, ex.ric), 3) < 1e-4);

    // a non-Einstein symmetric φ
    const double K = 0.25;
    TensorField phi = TensorField::sym2(grid);
    for (std::size_t p = 0; p < phi.nodes(); ++p) {
        phi.set_sym(p, 0, 0, 1.0);
        phi.set_sym(p, 0, 1, 0.2);
    }
    TensorField r2 = weitzenboeck_r2(inst.metric, phi);
    TensorField tr = trace(inst.metric, phi);
    TensorField want = TensorField::sym2(grid);
    for (std::size_t p = 0; p < phi.nodes(); ++p)
        for (int i = 0; i < 2; ++i)
            for (int j = i; j < 2; ++j)
                want.set_sym(p, i, j,
                             -2 * K * (tr(p, 0) * ex.g(p, i * 2 + j) - phi(p, i * 2 + j)) + 2 * K * phi(p, i * 2 + j));
    CHECK(test::max_diff(r2, want, 4) < 1e-3);
    CHECK_THROWS_AS(weitzenboeck_r2(inst.metric, TensorField::covariant(grid, 2)), ShapeError);
}

TEST_CASE("operators: index gymnastics are mutually consistent") {
    MetricState g = conformal_metric(16);
    TensorField xi = TensorField::vector(g.grid_ptr());
    for (std::size_t p = 0; p < xi.nodes(); ++p) {
        auto x = g.grid().coords(p);
        xi(p, 0) = std::sin(x[1]);
        xi(p, 1) = 0.5 + std::cos(x[0]);
    }
    CHECK(test::max_diff(raise(g, lower(g, xi)), xi) < 1e-14);
    TensorField n1 = norm_sq(g, xi);
    TensorField n2 = quadratic(g.g(), xi);
    CHECK(test::max_diff(n1, n2) < 1e-14);
    TensorField n3 = norm_sq(g, lower(g, xi));
    CHECK(test::max_diff(n1, n3) < 1e-13);
}

TEST_CASE("operators: divergence theorem and the Hessian of coordinate functions") {
    MetricState g = conformal_metric(32);
    TensorField xi = TensorField::vector(g.grid_ptr());
    for (std::size_t p = 0; p < xi.nodes(); ++p) {
        auto x = g.grid().coords(p);
        xi(p, 0) = std::sin(x[1]) * std::cos(x[0]);
        xi(p, 1) = std::sin(x[0]);
    }
    CHECK(std::abs(integrate(g, divergence(g, xi)).value) < 1e-12);
}

TEST_CASE("integrate: volumes and truncation tagging") {
    auto flat = instantiate(test::flat_spec(2), test::torus(20)).metric;
    Integral v = volume(flat);
    CHECK(v.value == doctest::Approx(kTwoPi * kTwoPi));
    CHECK_FALSE(v.truncated);

    FamilySpec gs;
    gs.kind = FamilyKind::gaussian_shrinker;
    gs.n = 2;
    gs.lambda = -0.5;
    gs.truncation = 2.0;
    auto inst = instantiate(gs, test::box(21, 2.0));
    Integral vb = volume(inst.metric);
    CHECK(vb.truncated);
    CHECK(vb.value == doctest::Approx(16.0));
    // trapezoid rule integrates bilinear functions exactly
    TensorField f = scalar_from(inst.metric.grid_ptr(), [](const double* x) { return 1.0 + x[0] + x[0] * x[1]; });
    CHECK(integrate(inst.metric, f).value == doctest::Approx(16.0).epsilon(1e-12));
}

TEST_CASE("volume growth: flat torus balls approach the Euclidean area") {
    auto flat = instantiate(test::flat_spec(2), test::torus(64)).metric;
    const std::size_t c = flat.grid().node({32, 32});
    VolumeGrowth vg = volume_growth(flat, c, {0.5, 1.0, 1.5, 100.0});
    for (std::size_t i = 0; i < 3; ++i) {
        const double r = vg.radii[i];
        CHECK(vg.volumes[i] == doctest::Approx(std::numbers::pi * r * r).epsilon(0.08));
        CHECK_FALSE(vg.saturated[i]);
        CHECK(vg.integrand[i] == doctest::Approx(r / std::log(vg.volumes[i])));
    }
    CHECK(vg.saturated[3]);
    CHECK(vg.volumes[3] == doctest::Approx(vg.total_volume));
    CHECK(vg.max_distance == doctest::Approx(std::sqrt(2.0) * std::numbers::pi).epsilon(0.02));
    CHECK_THROWS_AS(volume_growth(flat, flat.grid().node_count(), {1.0}), ConfigError);
}
