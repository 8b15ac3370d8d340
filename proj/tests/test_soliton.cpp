#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rfl/errors.hpp"
#include "rfl/operators.hpp"
#include "rfl/random_field.hpp"
#include "rfl/soliton.hpp"
#include "support.hpp"

using namespace rfl;
using rfl::test::kTwoPi;

namespace {

FamilyInstance gaussian(int nodes, double half, double lambda = -0.5) {
    FamilySpec s;
    s.kind = FamilyKind::gaussian_shrinker;
    s.n = 2;
    s.lambda = lambda;
    s.truncation = half;
    return instantiate(s, test::box(nodes, half));
}

FamilyInstance cigar(int nodes, double half) {
    FamilySpec s;
    s.kind = FamilyKind::cigar;
    s.truncation = half;
    return instantiate(s, test::box(nodes, half));
}

FamilyInstance conformal(int nodes, const std::string& u = "0.1*sin(x)*sin(y)") {
    return instantiate(test::conformal_spec(u), test::torus(nodes));
}

TensorField constant_vector(const std::shared_ptr<const ChartGrid>& grid, double a, double b) {
    TensorField v = TensorField::vector(grid);
    for (std::size_t p = 0; p < v.nodes(); ++p) {
        v(p, 0) = a;
        v(p, 1) = b;
    }
    return v;
}

// a field with ∫ξ(s) ≠ 0 against s ∝ sin x sin y
TensorField tilted_vector(const std::shared_ptr<const ChartGrid>& grid) {
    TensorField v = TensorField::vector(grid);
    for (std::size_t p = 0; p < v.nodes(); ++p) {
        const auto x = grid->coords(p);
        v(p, 0) = std::cos(x[0]) * std::sin(x[1]);
        v(p, 1) = 0.5 * std::sin(x[0]) * std::cos(x[1]) + 0.3 * std::sin(x[1]);
    }
    return v;
}

TensorField killing_rotation(const std::shared_ptr<const ChartGrid>& grid) { return constant_vector(grid, 0.0, 1.0); }

} // namespace

TEST_CASE("random field: SplitMix64 reference values and reproducibility") {
    SplitMix64 rng(0);
    // reference stream of SplitMix64 seeded with 0
    CHECK(rng.next() == 0xE220A8397B1DCDAFULL);
    CHECK(rng.next() == 0x6E789E6AA1B965F4ULL);
    CHECK(SplitMix64(0).at(1) == 0x6E789E6AA1B965F4ULL);
    CHECK(SplitMix64(42).uniform_at(3) < 1.0);

    auto grid = test::torus(16);
    const TensorField a = random_scalar(grid, 11), b = random_scalar(grid, 11), c = random_scalar(grid, 12);
    CHECK(a.data() == b.data());
    CHECK(test::max_diff(a, c) > 1e-3);
    CHECK(a.max_abs() <= 1.0);
    const TensorField v = random_vector(grid, 11);
    CHECK(test::max_diff(v, random_vector(grid, 11)) == 0.0);
    CHECK_THROWS_AS(random_scalar(grid, 1, 0), ConfigError);
}

TEST_CASE("random field: Stokes holds to roundoff for seeded fields") {
    auto inst = conformal(32);
    const double vol = volume(inst.metric).value;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const TensorField phi = random_scalar(inst.metric.grid_ptr(), seed, 3);
        CHECK(std::abs(integrate(inst.metric, laplace_beltrami(inst.metric, phi)).value) <= 1e-10 * vol);
    }
}

TEST_CASE("soliton spec: shape checks and derived field") {
    auto inst = conformal(16);
    auto grid = inst.metric.grid_ptr();
    CHECK_THROWS_AS(SolitonSpec::from_field(inst.metric, TensorField::scalar(grid), 0.0), ShapeError);
    CHECK_THROWS_AS(SolitonSpec::from_field(inst.metric, TensorField::form(grid), 0.0), ShapeError);
    CHECK_THROWS_AS(SolitonSpec::from_potential(inst.metric, TensorField::vector(grid), 0.0), ShapeError);
    CHECK_THROWS_AS(SolitonSpec::from_field(inst.metric, TensorField::vector(test::torus(20)), 0.0), ShapeError);
    CHECK_THROWS_AS(SolitonSpec::from_family(inst), InapplicableError);

    const TensorField f = random_scalar(grid, 3);
    const auto spec = SolitonSpec::from_potential(inst.metric, f, -0.2);
    CHECK(spec.is_gradient());
    CHECK(test::max_diff(spec.xi(), gradient(inst.metric, f)) == 0.0);
    CHECK_THROWS_AS(SolitonSpec::from_field(inst.metric, spec.xi(), 0.0).potential(), InapplicableError);
}

TEST_CASE("soliton: classification follows the sign of lambda") {
    CHECK(std::string(classify(-0.5)) == "shrinking");
    CHECK(std::string(classify(0.0)) == "steady");
    CHECK(std::string(classify(1e-3)) == "expanding");
}

TEST_CASE("soliton: gaussian shrinker certificate") {
    auto inst = gaussian(41, 3.0);
    const auto spec = SolitonSpec::from_family(inst);
    const Certificate c = soliton_residual(spec);
    CHECK(c.classification == "shrinking");
    CHECK(c.gradient);
    CHECK(c.find("soliton_equation")->max_norm <= 1e-12);
    CHECK(c.find("gradient_soliton_equation")->max_norm <= 1e-12);
    CHECK(c.find("gradient_agreement")->max_norm <= 1e-12);
    CHECK(c.ricci_flat);
    CHECK_FALSE(c.einstein);  // L_ξ g = 2 Hess f = g
    CHECK_FALSE(c.trivial);
    CHECK(c.pass());

    // Δ̄f = −Δ(|x|²/4) = −1 and s + nλ = −1
    const TensorField bar_f = connection_laplacian(spec.metric(), spec.potential());
    for (std::size_t p = 0; p < bar_f.nodes(); ++p)
        if (spec.metric().grid().boundary_distance(p) >= 4) CHECK(bar_f(p, 0) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(trace_potential_identity(spec).max_norm <= 1e-12);
}

TEST_CASE("soliton: sphere certificates from the closed form") {
    for (int n : {2, 3, 4})
        for (double r : {1.0, 0.6}) {
            const Certificate c = sphere_certificate(r, n, -(n - 1) / (r * r));
            CHECK(c.classification == "shrinking");
            CHECK(c.einstein);
            CHECK(c.trivial);
            CHECK_FALSE(c.ricci_flat);
            CHECK(c.pass());
            CHECK(c.find("trace_potential")->max_norm <= 1e-12);
            const Certificate wrong = sphere_certificate(r, n, -n / (r * r));
            CHECK_FALSE(wrong.pass());
        }
}

TEST_CASE("soliton: flat torus with zero field is steady, trivial and Ricci flat") {
    auto inst = instantiate(test::flat_spec(), test::torus(16));
    const auto spec = SolitonSpec::from_field(inst.metric, TensorField::vector(inst.metric.grid_ptr()), 0.0);
    const Certificate c = certify(spec);
    CHECK(c.classification == "steady");
    CHECK(c.trivial);
    CHECK(c.ricci_flat);
    CHECK(c.einstein);
    CHECK(c.pass());
    CHECK(energy(spec).value == 0.0);
}

TEST_CASE("soliton: cigar is a steady gradient soliton on the truncated box") {
    auto inst = cigar(301, 3.0);  // h = 0.02
    const auto spec = SolitonSpec::from_family(inst);
    CertifyOptions opt;
    opt.tolerance = 1e-3;
    const Certificate c = certify(spec, opt);
    CHECK(c.classification == "steady");
    CHECK(c.truncated);
    CHECK(c.find("soliton_equation")->max_norm <= 1e-3);
    CHECK(c.find("gradient_agreement")->max_norm <= 1e-12);
    CHECK(c.pass());
    CHECK_FALSE(c.undecidable.empty());
    CHECK(c.find_hypothesis("int_abs_s_q1")->truncated);
    CHECK_THROWS_AS(grad_s_integral_test(spec, opt), InapplicableError);
    CHECK_THROWS_AS(lie_riemann_integral_test(spec.metric(), spec.xi(), opt), InapplicableError);
}

TEST_CASE("soliton: cigar residual converges with the grid") {
    std::vector<double> e;
    for (int nodes : {61, 121, 241}) e.push_back(soliton_residual(SolitonSpec::from_family(cigar(nodes, 3.0)),
                                                                  CertifyOptions{.tolerance = 1.0})
                                                      .find("soliton_equation")
                                                      ->max_norm);
    CHECK(test::slope(e) >= 1.8);
}

TEST_CASE("soliton: scaling the field scales the Lie term linearly") {
    auto inst = conformal(24);
    const TensorField xi = random_vector(inst.metric.grid_ptr(), 5);
    const auto spec = SolitonSpec::from_field(inst.metric, xi, -0.3);
    const MetricState& g = inst.metric;
    for (double c : {0.0, 1.0, 2.0}) {
        const TensorField direct = -1.0 * g.ricci() - (0.5 * c) * lie_metric(g, xi) - (-0.3) * g.g();
        CHECK(test::max_diff(soliton_residual_field(spec.scaled(c)), direct) <= 1e-12);
    }
}

TEST_CASE("soliton: trace potential identity on a non-soliton") {
    auto inst = conformal(24);
    const TensorField f = random_scalar(inst.metric.grid_ptr(), 9);
    const auto spec = SolitonSpec::from_potential(inst.metric, f, -0.25);
    const MetricState& g = inst.metric;
    TensorField direct = -1.0 * laplace_beltrami(g, f) - g.scalar();
    for (auto& v : direct.data()) v += 0.5;
    const ResidualReport r = trace_potential_identity(spec);
    CHECK(r.max_norm == doctest::Approx(field_norms(g, direct).max_norm).epsilon(1e-12));
    CHECK(r.max_norm > 1e-2);
    CHECK_FALSE(r.pass);
    CHECK_THROWS_AS(trace_potential_identity(SolitonSpec::from_field(g, spec.xi(), 0.0)), InapplicableError);
}

TEST_CASE("grad-s test: constant potential, flat sine and conformal battery") {
    {
        auto inst = instantiate(test::flat_spec(), test::torus(16));
        TensorField f = TensorField::scalar(inst.metric.grid_ptr());
        for (auto& v : f.data()) v = 2.5;
        const GradSReport r = grad_s_integral_test(SolitonSpec::from_potential(inst.metric, f, 0.0));
        CHECK(r.int_xi_s == 0.0);
        CHECK(r.int_bar_f_sq == 0.0);
        CHECK(r.einstein_forced);
    }
    {
        // ∫(Δ̄ sin x)² = ∫ sin²x = Vol/2
        auto inst = instantiate(test::flat_spec(), test::torus(32));
        TensorField f = TensorField::scalar(inst.metric.grid_ptr());
        for (std::size_t p = 0; p < f.nodes(); ++p) f(p, 0) = std::sin(inst.metric.grid().coords(p)[0]);
        const GradSReport r = grad_s_integral_test(SolitonSpec::from_potential(inst.metric, f, 0.0));
        // the nested fourth-order stencil damps sin x by O(h⁴)
        CHECK(r.int_bar_f_sq == doctest::Approx(0.5 * kTwoPi * kTwoPi).epsilon(1e-3));
        CHECK(r.int_xi_s_constrained == doctest::Approx(r.int_bar_f_sq).epsilon(1e-10));
        CHECK_FALSE(r.einstein_forced);
    }
    for (std::uint64_t seed : {1, 2, 3}) {
        auto inst = conformal(32);
        const TensorField f = random_scalar(inst.metric.grid_ptr(), seed, 2, 0.5);
        const GradSReport r = grad_s_integral_test(SolitonSpec::from_potential(inst.metric, f, -0.3));
        CHECK(r.relative_mismatch <= 1e-10);
        CHECK(r.int_bar_f_sq > 0.0);
        // the raw curvature does not satisfy the constraint; the gap is reported
        CHECK(r.constraint_mismatch > 1e-3);
    }
    auto inst = conformal(16);
    CHECK_THROWS_AS(grad_s_integral_test(SolitonSpec::from_field(inst.metric, TensorField::vector(inst.metric.grid_ptr()), 0.0)),
                    InapplicableError);
}

TEST_CASE("Bochner suite: gaussian closed form and zero field") {
    auto inst = gaussian(41, 3.0);
    const BochnerReport b = bochner_kato_suite(SolitonSpec::from_family(inst));
    CHECK(b.applied);
    CHECK(b.bochner.max_norm <= 1e-10);
    CHECK(b.harmonic.max_norm <= 1e-10);
    CHECK(b.kato.pass());
    CHECK(b.kato.excluded >= 1);  // ξ vanishes at the origin node
    // ‖ξ‖Δ‖ξ‖ = (n − 1)/4 for ξ = x/2 in the plane
    CHECK(b.kato.min_margin == doctest::Approx(0.25).epsilon(1e-6));

    auto flat = instantiate(test::flat_spec(), test::torus(16));
    const BochnerReport z = bochner_kato_suite(SolitonSpec::from_field(flat.metric, TensorField::vector(flat.metric.grid_ptr()), 0.0));
    CHECK(z.applied);
    CHECK(z.bochner.max_norm == 0.0);
    CHECK(z.kato.checked == 0);
}

TEST_CASE("Bochner suite: Killing field on the sphere patch") {
    auto grid = test::sphere_patch(64);
    FamilySpec s;
    s.kind = FamilyKind::round_sphere;
    s.n = 2;
    s.radius = 1.0;
    auto inst = instantiate(s, grid);
    CertifyOptions opt;
    opt.tolerance = 1e-3;
    // Δs nests four one-sided derivatives at the ψ edges; skip a quarter of the patch on each side
    opt.band = 16;
    const auto spec = SolitonSpec::from_field(inst.metric, killing_rotation(grid), -1.0);
    const Certificate c = certify(spec, opt);
    CHECK(c.einstein);
    CHECK_FALSE(c.trivial);
    CHECK(c.find("soliton_equation")->pass);
    CHECK(c.find("bochner_formula")->pass);
    CHECK(c.find("kato_inequality")->pass);
    CHECK(c.find("lie_ricci_trace")->pass);
    CHECK(c.find("lie_ricci_trace_soliton")->pass);
}

TEST_CASE("identity suite: harmonic field on the conformal torus converges") {
    std::vector<double> e_bochner, eh, e_lie, elr, eint;
    for (int n : {32, 64, 128}) {
        auto inst = conformal(n);
        auto grid = inst.metric.grid_ptr();
        CertifyOptions opt;
        opt.tolerance = 1e-3;
        // constant ξ is conformal for g = e^{2u}δ, hence harmonic in two dimensions
        const auto spec = SolitonSpec::from_field(inst.metric, constant_vector(grid, 1.0, 0.5), 0.0);
        const BochnerReport b = bochner_kato_suite(spec, opt);
        CHECK(b.applied);
        CHECK(b.gate == "infinitesimal harmonic transformation");
        const LieRicciReport l = lie_ricci_trace_test(spec, opt);
        CHECK(l.applied);
        CHECK(l.lie_trace_soliton.skipped);
        const LieRiemannReport m = lie_riemann_integral_test(inst.metric, tilted_vector(grid), opt);
        e_bochner.push_back(b.bochner.max_norm);
        eh.push_back(b.harmonic.max_norm);
        e_lie.push_back(l.lie_trace.max_norm);
        elr.push_back(m.pointwise.max_norm);
        eint.push_back(m.abs_residual);
        CHECK(std::abs(m.rhs) > 1.0);
    }
    CHECK(test::slope(e_bochner) >= 1.8);
    CHECK(test::slope(eh) >= 1.8);
    CHECK(test::slope(e_lie) >= 1.8);
    CHECK(test::slope(elr) >= 1.8);
    CHECK(test::slope(eint) >= 1.8);
}

TEST_CASE("identity suite: random field is gated out and fails the Lie-Ricci trace identity") {
    auto inst = conformal(32);
    CertifyOptions opt;
    opt.tolerance = 1e-3;
    const auto spec = SolitonSpec::from_field(inst.metric, random_vector(inst.metric.grid_ptr(), 4), 0.0);
    const BochnerReport b = bochner_kato_suite(spec, opt);
    CHECK_FALSE(b.applied);
    CHECK(std::string(b.bochner.verdict()) == "skipped");
    const LieRicciReport l = lie_ricci_trace_test(spec, opt);
    CHECK_FALSE(l.applied);
    CHECK(l.lie_trace.max_norm > 1e-2);
    const Certificate c = certify(spec, opt);
    CHECK_FALSE(c.find("soliton_equation")->pass);
    CHECK_FALSE(c.pass());
    CHECK(c.verdicts.empty());
}

TEST_CASE("L_xi Rm integral: trivial cases") {
    auto flat = instantiate(test::flat_spec(), test::torus(16));
    const auto r = lie_riemann_integral_test(flat.metric, random_vector(flat.metric.grid_ptr(), 8));
    CHECK(r.lhs == 0.0);
    CHECK(r.rhs == 0.0);
    auto inst = conformal(16);
    const auto z = lie_riemann_integral_test(inst.metric, TensorField::vector(inst.metric.grid_ptr()));
    CHECK(z.lhs == 0.0);
    CHECK(z.integral_sign.sign == "zero");
}

TEST_CASE("energy: constant field on a unit torus and the gaussian box") {
    auto grid = std::make_shared<const ChartGrid>(ChartGrid::torus({16, 16}, {0.0, 0.0}, {1.0, 1.0}));
    auto flat = instantiate(test::flat_spec(), grid);
    const Integral e = energy(SolitonSpec::from_field(flat.metric, constant_vector(grid, 0.6, 0.8), 0.0));
    CHECK(e.value == doctest::Approx(0.5).epsilon(1e-13));
    CHECK_FALSE(e.truncated);

    // ½∫|x/2|² over [−L, L]²: trapezoid sum, and L⁴/3 in the limit
    const double L = 2.0;
    std::vector<double> err;
    for (int nodes : {21, 41, 81}) {
        auto inst = gaussian(nodes, L);
        const Integral ge = energy(SolitonSpec::from_family(inst));
        CHECK(ge.truncated);
        const double h = 2 * L / (nodes - 1);
        double trap = 0.0;
        for (int i = 0; i < nodes; ++i)
            for (int j = 0; j < nodes; ++j) {
                const double x = -L + i * h, y = -L + j * h;
                const double w = (i == 0 || i == nodes - 1 ? 0.5 : 1.0) * (j == 0 || j == nodes - 1 ? 0.5 : 1.0);
                trap += w * h * h * 0.125 * (x * x + y * y);
            }
        CHECK(ge.value == doctest::Approx(trap).epsilon(1e-12));
        err.push_back(std::abs(ge.value - std::pow(L, 4) / 3.0));
    }
    CHECK(test::slope(err) == doctest::Approx(2.0).epsilon(0.05));
}
