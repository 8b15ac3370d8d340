#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rfl/errors.hpp"
#include "rfl/flow.hpp"
#include "rfl/integrate.hpp"
#include "rfl/operators.hpp"
#include "support.hpp"

using namespace rfl;

namespace {

FlowTrajectory conformal_run(int n_nodes, double t_end, int stride = 2, const std::string& u = "0.1*sin(x)*sin(y)") {
    auto grid = test::torus(n_nodes);
    auto inst = instantiate(test::conformal_spec(u), grid);
    FlowOptions opt;
    const double h = grid->min_spacing();
    opt.dt = 0.1 * h * h;
    opt.t_end = t_end;
    opt.store_stride = stride;
    return run_flow(inst.metric, opt);
}

struct LadderRow {
    double scalar = 0.0, ricci = 0.0, trace = 0.0, rm = 0.0, bar = 0.0;
    bool trace_bounded = true;
};

LadderRow ladder_row(const FlowTrajectory& tr) {
    LadderRow row;
    for (std::size_t k = 0; k < tr.size(); ++k) {
        row.scalar = std::max(row.scalar, scalar_evolution_residual(tr, k, 1.0).max_norm);
        const auto ric = ricci_evolution_residual(tr, k, 1.0);
        row.ricci = std::max(row.ricci, ric.tensor.max_norm);
        row.trace = std::max(row.trace, ric.trace.max_norm);
        row.trace_bounded = row.trace_bounded && ric.trace.max_norm <= 2.0 * ric.tensor.max_norm;
        row.rm = std::max(row.rm, riemann_evolution_residual(tr, k, 1.0).residual.max_norm);
        row.bar = std::max(row.bar, ricci_evolution_residual_bar_form(tr, k, 1.0).max_norm);
    }
    return row;
}

} // namespace

TEST_CASE("flow: scheme names round-trip") {
    CHECK(scheme_from_string("euler") == Scheme::euler);
    CHECK(std::string(to_string(scheme_from_string("rk4"))) == "rk4");
    CHECK_THROWS_AS(scheme_from_string("leapfrog"), ConfigError);
}

TEST_CASE("flow: an Euler step is g - 2 dt Ric") {
    auto grid = test::torus(16);
    auto inst = instantiate(test::conformal_spec("0.2*sin(x)+0.1*cos(2*y)"), grid);
    const double dt = 0.5 * stability_bound(inst.metric, 0.5);
    const MetricState next = step(inst.metric, dt, Scheme::euler);
    const TensorField expect = inst.metric.g() - (2.0 * dt) * inst.metric.ricci();
    CHECK(test::max_diff(next.g(), expect) < 1e-15);
}

TEST_CASE("flow: step rejects bad steps and reports blow-up with time and node") {
    auto grid = test::torus(16);
    auto inst = instantiate(test::conformal_spec("0.8*sin(x)*sin(y)"), grid);
    CHECK_THROWS_AS(step(inst.metric, 0.0, Scheme::rk4), ConfigError);
    CHECK_THROWS_AS(step(inst.metric, 2.0 * stability_bound(inst.metric, 0.5), Scheme::rk4), ConfigError);
    // a huge step with the guard disabled drives g − 2dt·Ric through zero where K > 0
    bool caught = false;
    try {
        step(inst.metric, 10.0, Scheme::euler, 1.5, 1e12);
    } catch (const CurvatureBlowUpError& e) {
        caught = true;
        CHECK(e.time() == doctest::Approx(11.5));
        CHECK(e.node() < grid->node_count());
    }
    CHECK(caught);
}

TEST_CASE("flow: flat torus is a fixed point over 10^4 steps") {
    auto grid = test::torus(8);
    auto inst = instantiate(test::flat_spec(), grid);
    MetricState g = inst.metric;
    const double dt = 0.5 * stability_bound(g, 0.5);
    for (int k = 0; k < 10000; ++k) g = step(g, dt, Scheme::euler, k * dt);
    CHECK(test::max_diff(g.g(), inst.metric.g()) <= 1e-10);
}

TEST_CASE("flow: run_flow lands on t_end with a stride-aligned step count") {
    auto tr = conformal_run(16, 0.013);
    CHECK(tr.steps % 2 == 0);
    CHECK(tr.times.back() == doctest::Approx(0.013).epsilon(1e-12));
    CHECK(tr.dt_store == doctest::Approx(2.0 * tr.dt));
    CHECK(tr.size() == tr.steps / 2 + 1);
    CHECK(tr.monitors.size() == tr.size());
}

TEST_CASE("flow: time derivative is exact on quadratics and needs three slices") {
    auto grid = test::torus(8);
    std::vector<TensorField> f;
    const double dt = 0.1;
    for (int k = 0; k < 4; ++k) {
        TensorField s = TensorField::scalar(grid);
        const double t = k * dt;
        for (std::size_t p = 0; p < s.nodes(); ++p) s(p, 0) = 1.0 + 3.0 * t - 2.0 * t * t + 0.01 * p;
        f.push_back(s);
    }
    std::vector<const TensorField*> ptrs = {&f[0], &f[1], &f[2], &f[3]};
    for (std::size_t k = 0; k < 4; ++k) {
        const TensorField d = time_derivative(ptrs, k, dt);
        CHECK(d(5, 0) == doctest::Approx(3.0 - 4.0 * k * dt).epsilon(1e-12));
    }
    std::vector<const TensorField*> two = {&f[0], &f[1]};
    CHECK_THROWS_AS(time_derivative(two, 0, dt), NeedsHistoryError);
    CHECK_THROWS_AS(time_derivative(ptrs, 4, dt), NeedsHistoryError);

    auto tr = conformal_run(16, 0.002);
    tr.states.erase(tr.states.begin() + 2, tr.states.end());
    tr.times.resize(2);
    CHECK_THROWS_AS(scalar_evolution_residual(tr, 0, 1.0), NeedsHistoryError);
}

TEST_CASE("flow: Euler and RK4 converge at their orders") {
    auto grid = test::torus(16);
    auto inst = instantiate(test::conformal_spec("0.1*sin(x)*sin(y)"), grid);
    const double t_end = 0.02;
    FlowOptions ref;
    ref.dt = t_end / 64;
    ref.t_end = t_end;
    const TensorField gref = run_flow(inst.metric, ref).states.back().g();
    for (Scheme s : {Scheme::euler, Scheme::rk4}) {
        std::vector<double> err;
        for (int m : {4, 8, 16}) {
            FlowOptions o;
            o.scheme = s;
            o.dt = t_end / m;
            o.t_end = t_end;
            err.push_back(test::max_diff(run_flow(inst.metric, o).states.back().g(), gref));
        }
        const double p = test::slope(err);
        if (s == Scheme::euler) CHECK(p == doctest::Approx(1.0).epsilon(0.15));
        else CHECK(p > 3.5);
    }
}

TEST_CASE("flow: conformal torus evolution residuals converge under dt ~ h^2") {
    std::vector<LadderRow> rows;
    // t_end = 0.03 keeps dt = 0.1 h² commensurate, so dt halves exactly with h²
    for (int n : {16, 32, 64}) rows.push_back(ladder_row(conformal_run(n, 0.03, 1)));
    std::vector<double> e2, e4, e5, rm;
    for (const auto& r : rows) {
        e2.push_back(r.scalar);
        e4.push_back(r.ricci);
        e5.push_back(r.trace);
        rm.push_back(r.rm);
        CHECK(r.trace_bounded);
        // the Δ̄-sign form misses by O(1) at every resolution
        CHECK(r.bar > 1.0);
    }
    CHECK(test::slope(e2) >= 1.8);
    CHECK(test::slope(e4) >= 1.8);
    CHECK(test::slope(e5) >= 1.8);
    CHECK(test::slope(rm) >= 1.8);
    CHECK(rows.back().scalar < 1e-3);
}

TEST_CASE("flow: Riemann reaction terms on constant curvature") {
    // Rm = K(g_il g_jk − g_ik g_jl) on g = a δ gives RHS = −2(n−1) K Rm
    for (int n : {2, 3, 4}) {
        const double a = 1.7, K = 0.6;
        std::vector<double> gi(n * n, 0.0), rm(ipow(n, 4)), ric(n * n, 0.0), out(ipow(n, 4));
        for (int i = 0; i < n; ++i) {
            gi[i * n + i] = 1.0 / a;
            ric[i * n + i] = (n - 1) * K * a;
        }
        auto d = [](int i, int j) { return i == j ? 1.0 : 0.0; };
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l)
                        rm[((i * n + j) * n + k) * n + l] = K * a * a * (d(i, l) * d(j, k) - d(i, k) * d(j, l));
        riemann_reaction(n, gi.data(), rm.data(), ric.data(), out.data());
        double worst = 0.0;
        for (std::size_t c = 0; c < out.size(); ++c) worst = std::max(worst, std::abs(out[c] + 2.0 * (n - 1) * K * rm[c]));
        CHECK(worst < 1e-13);
    }
}

TEST_CASE("sphere: warp-profile curvatures are 1/r^2 along the profile") {
    for (double r : {0.5, 1.0, 2.3})
        for (double frac : {0.1, 0.4, 0.5, 0.8}) {
            const double rho = frac * std::numbers::pi * r;
            CHECK(SphereReduction::radial_curvature(r, rho) == doctest::Approx(1.0 / (r * r)).epsilon(1e-12));
            CHECK(SphereReduction::tangential_curvature(r, rho) == doctest::Approx(1.0 / (r * r)).epsilon(1e-10));
        }
    CHECK_THROWS_AS(SphereReduction(0.0, 2), ConfigError);
}

TEST_CASE("sphere: RK4 reduction tracks r^2 = 1 - 2t and extrapolates extinction") {
    const auto tr = run_sphere(1.0, 2, 1e-4, 0.4);
    double worst = 0.0;
    for (std::size_t k = 0; k < tr.times.size(); ++k)
        worst = std::max(worst, std::abs(tr.r[k] * tr.r[k] - (1.0 - 2.0 * tr.times[k])));
    CHECK(worst <= 1e-6);
    CHECK(tr.times.back() == doctest::Approx(0.4));
    CHECK(std::abs(tr.extinction_estimate() - 0.5) <= 1e-3);
    // volume strictly decreases, s_min increases
    for (std::size_t k = 1; k < tr.times.size(); ++k) {
        CHECK(tr.vol[k] < tr.vol[k - 1]);
        CHECK(tr.s[k] > tr.s[k - 1]);
    }
    CHECK(tr.vol.front() == doctest::Approx(4.0 * std::numbers::pi));
    CHECK_THROWS_AS(run_sphere(1.0, 2, 1e-3, 0.5), ExtinctionError);
}

TEST_CASE("sphere: RK4 and Euler orders against the closed form") {
    for (Scheme s : {Scheme::euler, Scheme::rk4}) {
        std::vector<double> err;
        for (double dt : {0.02, 0.01, 0.005}) {
            const auto tr = run_sphere(1.0, 3, dt, 0.2, s);
            const double r2 = 1.0 - 4.0 * 0.2;
            err.push_back(std::abs(tr.r.back() * tr.r.back() - r2));
        }
        const double p = test::slope(err);
        if (s == Scheme::euler) CHECK(p == doctest::Approx(1.0).epsilon(0.1));
        else CHECK(p == doctest::Approx(4.0).epsilon(0.075));
    }
}

TEST_CASE("sphere: constant-curvature substitution satisfies the evolution equations") {
    for (int n : {2, 3, 4})
        for (double r : {1.0, 0.7, 0.3}) {
            const auto res = sphere_closed_form_residuals(sphere_slice_at_radius(r, n));
            CHECK(res.scalar <= 1e-8);
            CHECK(res.ricci <= 1e-8);
            CHECK(res.ricci_trace <= 1e-8);
            CHECK(res.riemann <= 1e-8);
            // g^{jk} g^{il} ∂_t R_ijkl = −2(n−1)² n / r⁴ on the shrinking sphere
            CHECK(res.rm_trace == doctest::Approx(-2.0 * (n - 1) * (n - 1) * n / std::pow(r, 4)).epsilon(1e-12));
        }
}

TEST_CASE("maximum principle: sphere run passes, injected dips are located") {
    const auto tr = run_sphere(1.0, 2, 1e-3, 0.4, Scheme::rk4, 10);
    std::vector<double> smin;
    for (const auto& m : tr.monitors) smin.push_back(m.s_min);
    const auto ok = monitor_maximum_principle(tr.times, smin, 2);
    CHECK(ok.pass());
    CHECK(ok.bound_applicable);
    CHECK(ok.violations == 0);
    // s = 2/(1 − 2t) and the bound is 1/(1 − 2t)
    CHECK(ok.min_ratio == doctest::Approx(2.0).epsilon(1e-6));

    auto bad = smin;
    bad[7] = bad[6] - 0.01;
    const auto dip = monitor_maximum_principle(tr.times, bad, 2);
    CHECK_FALSE(dip.pass());
    REQUIRE(dip.first_violation.has_value());
    CHECK(*dip.first_violation == 7);
    CHECK(dip.first_violation_kind == "monotonicity");

    // bound violation alone: s_min stuck at 1 while 1/(2 − 2t) passes it
    std::vector<double> t = {0.0, 0.45, 0.9}, s = {1.0, 1.0, 1.0};
    const auto low = monitor_maximum_principle(t, s, 2);
    CHECK(low.monotone);
    CHECK_FALSE(low.bound_holds);
    REQUIRE(low.first_violation.has_value());
    CHECK(*low.first_violation == 2);
    CHECK(low.first_violation_kind == "lower_bound");

    std::vector<double> neg = {-1.0, -0.5};
    CHECK_FALSE(monitor_maximum_principle({0.0, 0.1}, neg, 2).bound_applicable);
}

TEST_CASE("average probe: identity holds, hypothesis only on the flat torus") {
    // ∫∂_t s = 2∫‖Ric‖² holds up to truncation error, which falls with the grid
    const auto coarse = decreasing_average_probe(conformal_run(32, 0.03, 1));
    const auto rep = decreasing_average_probe(conformal_run(64, 0.03, 1));
    CHECK(coarse.max_identity_residual / rep.max_identity_residual > 8.0);
    CHECK(rep.max_identity_residual < 1e-4 * rep.rows.front().int_ric_sq);
    CHECK_FALSE(rep.hypothesis_anywhere);
    CHECK_FALSE(rep.ricci_flat);
    for (const auto& row : rep.rows) CHECK(std::abs(row.int_lap_s) < 1e-10);

    auto grid = test::torus(8);
    FlowOptions o;
    o.t_end = 0.01;
    o.dt = 0.001;
    const auto flat = run_flow(instantiate(test::flat_spec(), grid).metric, o);
    const auto frep = decreasing_average_probe(flat);
    CHECK(frep.hypothesis_anywhere);
    CHECK(frep.ricci_flat);

    FamilySpec g;
    g.kind = FamilyKind::gaussian_shrinker;
    g.truncation = 2.0;
    const auto open = run_flow(instantiate(g, test::box(12, 2.0)).metric, o);
    CHECK_THROWS_AS(decreasing_average_probe(open), InapplicableError);
}

TEST_CASE("monitors: two-dimensional torus keeps its area and total curvature") {
    const auto tr = conformal_run(32, 0.02);
    for (const auto& m : tr.monitors) {
        CHECK(std::abs(m.int_s) < 1e-8);
        CHECK(m.vol == doctest::Approx(tr.monitors.front().vol).epsilon(1e-9));
        CHECK(m.s_min <= m.s_max);
    }
}

TEST_CASE("sign summary labels") {
    auto grid = test::torus(8);
    TensorField f = TensorField::scalar(grid);
    for (std::size_t p = 0; p < f.nodes(); ++p) f(p, 0) = 1.0 + 0.1 * p;
    CHECK(sign_summary(f).strictly_positive());
    CHECK(std::string(sign_summary(f).label()) == "positive");
    f(3, 0) = -2.0;
    CHECK(std::string(sign_summary(f).label()) == "mixed");
    CHECK(sign_summary(f).min == -2.0);
    CHECK(std::string(sign_summary(-1.0 * TensorField::scalar(grid)).label()) == "zero");
    CHECK_THROWS_AS(sign_summary(TensorField::form(grid)), ShapeError);
}
