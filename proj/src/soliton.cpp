#include "rfl/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rfl/errors.hpp"
#include "rfl/operators.hpp"

namespace rfl {

const char* to_string(FieldKind k) noexcept { return k == FieldKind::vector ? "vector" : "gradient"; }

const char* classify(double lambda) noexcept {
    if (lambda < 0.0) return "shrinking";
    if (lambda > 0.0) return "expanding";
    return "steady";
}

// -- SolitonSpec ----------------------------------------------------------------

SolitonSpec::SolitonSpec(MetricState g, FieldKind kind, TensorField xi, std::optional<TensorField> f, double lambda)
    : g_(std::move(g)), kind_(kind), xi_(std::move(xi)), f_(std::move(f)), lambda_(lambda) {}

SolitonSpec SolitonSpec::from_field(MetricState g, TensorField xi, double lambda) {
    if (xi.rank() != 1 || xi.signature()[0] != Variance::contravariant)
        throw ShapeError("soliton spec: xi must be a vector field");
    if (!xi.grid().same_as(g.grid())) throw ShapeError("soliton spec: xi lives on a different grid than the metric");
    return SolitonSpec(std::move(g), FieldKind::vector, std::move(xi), std::nullopt, lambda);
}

SolitonSpec SolitonSpec::from_potential(MetricState g, TensorField f, double lambda) {
    if (f.rank() != 0) throw ShapeError("soliton spec: potential must be a scalar field");
    if (!f.grid().same_as(g.grid())) throw ShapeError("soliton spec: potential lives on a different grid than the metric");
    TensorField xi = gradient(g, f);
    return SolitonSpec(std::move(g), FieldKind::gradient, std::move(xi), std::move(f), lambda);
}

SolitonSpec SolitonSpec::from_family(const FamilyInstance& inst) {
    if (!inst.lambda) throw InapplicableError(std::string("family ") + to_string(inst.spec.kind) + " carries no soliton structure");
    if (inst.potential) return from_potential(inst.metric, *inst.potential, *inst.lambda);
    if (inst.field) return from_field(inst.metric, *inst.field, *inst.lambda);
    return from_field(inst.metric, TensorField::vector(inst.metric.grid_ptr()), *inst.lambda);
}

TensorField SolitonSpec::theta() const { return f_ ? differential(g_, *f_) : lower(g_, xi_); }

const TensorField& SolitonSpec::potential() const {
    if (!f_) throw InapplicableError("soliton spec has no potential (vector kind)");
    return *f_;
}

SolitonSpec SolitonSpec::scaled(double c) const {
    if (f_) return from_potential(g_, c * *f_, lambda_);
    return from_field(g_, c * xi_, lambda_);
}

// -- certificate helpers --------------------------------------------------------

HypothesisEntry make_hypothesis(std::string name, double value, double tolerance, bool truncated, std::string note) {
    HypothesisEntry h;
    h.name = std::move(name);
    h.value = value;
    h.tolerance = tolerance;
    h.sign = std::abs(value) <= tolerance ? "zero" : (value > 0.0 ? "positive" : "negative");
    h.truncated = truncated;
    h.note = std::move(note);
    return h;
}

const ResidualReport* Certificate::find(const std::string& name) const {
    for (const auto& r : residuals)
        if (r.name == name) return &r;
    return nullptr;
}

const HypothesisEntry* Certificate::find_hypothesis(const std::string& name) const {
    for (const auto& h : hypotheses)
        if (h.name == name) return &h;
    return nullptr;
}

bool Certificate::pass() const {
    return std::all_of(residuals.begin(), residuals.end(), [](const ResidualReport& r) { return r.skipped || r.pass; });
}

namespace {

int band_for(const MetricState& g, const CertifyOptions& opt) {
    if (g.grid().closed()) return 0;
    // identities nest up to four first derivatives, each widening the one-sided zone by order/2
    return opt.band >= 0 ? opt.band : 2 * g.fd_order();
}

void require_closed(const MetricState& g, const char* what) {
    if (!g.grid().closed())
        throw InapplicableError(std::string(what) + ": integral identity needs a closed grid; the domain is truncated");
}

// max over kept nodes of |φ|
double max_scalar(const TensorField& f, int band) {
    double m = 0.0;
    for (std::size_t p = 0; p < f.nodes(); ++p) {
        if (band > 0 && f.grid().boundary_distance(p) < band) continue;
        m = std::max(m, std::abs(f(p, 0)));
    }
    return m;
}

SignSummary banded_sign(const TensorField& f, int band, double zero_tol) {
    if (band <= 0) return sign_summary(f, zero_tol);
    TensorField g = f;
    // drop the band by clamping it to zero, then discount those nodes
    std::size_t dropped = 0;
    for (std::size_t p = 0; p < g.nodes(); ++p)
        if (g.grid().boundary_distance(p) < band) {
            g(p, 0) = 0.0;
            ++dropped;
        }
    SignSummary s = sign_summary(g, zero_tol);
    s.zero -= dropped;
    s.min = std::numeric_limits<double>::infinity();
    s.max = -std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < f.nodes(); ++p) {
        if (f.grid().boundary_distance(p) < band) continue;
        s.min = std::min(s.min, f(p, 0));
        s.max = std::max(s.max, f(p, 0));
    }
    return s;
}

// (L_ξ g)_ij = ∇_i θ_j + ∇_j θ_i from θ directly; for gradient specs θ = df avoids a raise/lower round trip
TensorField lie_metric_of(const SolitonSpec& spec) {
    const MetricState& g = spec.metric();
    const TensorField dtheta = covariant_derivative(g, spec.theta());
    const int n = g.dim();
    TensorField out = TensorField::sym2(g.grid_ptr());
    for (std::size_t p = 0; p < out.nodes(); ++p)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) out.set_sym(p, i, j, dtheta(p, i * n + j) + dtheta(p, j * n + i));
    return out;
}

double soliton_max(const SolitonSpec& spec, int band) {
    return field_norms(spec.metric(), soliton_residual_field(spec), band).max_norm;
}

} // namespace

// -- core -----------------------------------------------------------------------

TensorField soliton_residual_field(const SolitonSpec& spec) {
    const MetricState& g = spec.metric();
    return -1.0 * g.ricci() - 0.5 * lie_metric_of(spec) - spec.lambda() * g.g();
}

TensorField gradient_residual_field(const SolitonSpec& spec) {
    const MetricState& g = spec.metric();
    return -1.0 * g.ricci() - hessian(g, spec.potential()) - spec.lambda() * g.g();
}

Certificate soliton_residual(const SolitonSpec& spec, const CertifyOptions& opt) {
    const MetricState& g = spec.metric();
    const int band = band_for(g, opt);
    Certificate c;
    c.classification = classify(spec.lambda());
    c.lambda = spec.lambda();
    c.gradient = spec.is_gradient();
    c.flag_tolerance = opt.flag_tolerance;
    c.truncated = !g.grid().closed();

    const TensorField core = soliton_residual_field(spec);
    c.residuals.push_back(make_report("soliton_equation", g, core, opt.tolerance, 0.0, band));
    if (spec.is_gradient()) {
        const TensorField core_f = gradient_residual_field(spec);
        c.residuals.push_back(make_report("gradient_soliton_equation", g, core_f, opt.tolerance, 0.0, band));
        // L_{∇f} g = 2 Hess f holds node by node, so compare everywhere
        c.residuals.push_back(make_report("gradient_agreement", g, core - core_f, opt.agreement_tolerance, 0.0, 0));
    }
    c.einstein = field_norms(g, lie_metric_of(spec), band).max_norm <= opt.flag_tolerance;
    c.trivial = field_norms(g, spec.xi(), band).max_norm <= opt.flag_tolerance;
    c.ricci_flat = field_norms(g, g.ricci(), band).max_norm <= opt.flag_tolerance;
    return c;
}

ResidualReport trace_potential_identity(const SolitonSpec& spec, const CertifyOptions& opt) {
    if (!spec.is_gradient()) throw InapplicableError("trace potential identity needs a gradient spec");
    const MetricState& g = spec.metric();
    const double shift = g.dim() * spec.lambda();
    TensorField r = connection_laplacian(g, spec.potential()) - g.scalar();
    for (auto& v : r.data()) v -= shift;
    return make_report("trace_potential", g, r, opt.tolerance, 0.0, band_for(g, opt));
}

GradSReport grad_s_integral_test(const SolitonSpec& spec, const CertifyOptions& opt) {
    const MetricState& g = spec.metric();
    require_closed(g, "grad-s integral test");
    if (!spec.is_gradient()) throw InapplicableError("grad-s integral test needs a gradient spec");
    const TensorField bar_f = connection_laplacian(g, spec.potential());
    TensorField s_c = bar_f;
    for (auto& v : s_c.data()) v -= g.dim() * spec.lambda();

    GradSReport r;
    r.tolerance = opt.tolerance;
    r.int_xi_s = integrate(g, directional(g, spec.xi(), g.scalar())).value;
    r.int_xi_s_constrained = integrate(g, directional(g, spec.xi(), s_c)).value;
    TensorField sq = bar_f;
    for (auto& v : sq.data()) v *= v;
    r.int_bar_f_sq = integrate(g, sq).value;
    r.bar_f_l2 = std::sqrt(std::max(r.int_bar_f_sq, 0.0));
    r.relative_mismatch =
        std::abs(r.int_xi_s_constrained - r.int_bar_f_sq) / std::max(std::abs(r.int_bar_f_sq), opt.tolerance);
    r.constraint_mismatch = std::abs(r.int_xi_s - r.int_xi_s_constrained);
    r.einstein_forced = r.int_xi_s_constrained <= opt.tolerance && r.int_bar_f_sq <= opt.tolerance;
    return r;
}

BochnerReport bochner_kato_suite(const SolitonSpec& spec, const CertifyOptions& opt) {
    const MetricState& g = spec.metric();
    const int band = band_for(g, opt);
    const TensorField& xi = spec.xi();
    const TensorField theta = spec.theta();
    const TensorField& ric = g.ricci();

    BochnerReport b;
    b.harmonic = make_report("harmonic_transformation", g, yano_laplacian(g, theta), opt.tolerance, 0.0, band);
    const double sol = soliton_max(spec, band);
    if (sol <= opt.tolerance) {
        b.applied = true;
        b.gate = "soliton residual within tolerance";
    } else if (b.harmonic.pass) {
        b.applied = true;
        b.gate = "infinitesimal harmonic transformation";
    } else {
        b.gate = "neither a soliton field nor a harmonic transformation";
    }

    const TensorField xi_sq = norm_sq(g, xi);
    const TensorField ric_xx = quadratic(ric, xi);
    const TensorField half_lap = 0.5 * laplace_beltrami(g, xi_sq);
    const TensorField bochner_field = half_lap - norm_sq(g, covariant_derivative(g, theta)) + ric_xx;
    b.bochner = make_report("bochner_formula", g, bochner_field, opt.tolerance, 0.0, band);

    // ‖ξ‖Δ‖ξ‖ = ½Δ‖ξ‖² − ‖d‖ξ‖²‖² / (4‖ξ‖²), defined off the zero set of ξ
    const TensorField grad_sq = norm_sq(g, differential(g, xi_sq));
    const double xi_max = std::sqrt(max_scalar(xi_sq, band));
    b.kato.epsilon = opt.zero_fraction * xi_max;
    b.kato.min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < g.grid().node_count(); ++p) {
        if (band > 0 && g.grid().boundary_distance(p) < band) continue;
        const double nx = std::sqrt(std::max(xi_sq(p, 0), 0.0));
        if (nx <= b.kato.epsilon || nx == 0.0) {
            ++b.kato.excluded;
            continue;
        }
        ++b.kato.checked;
        const double lhs = half_lap(p, 0) - grad_sq(p, 0) / (4.0 * xi_sq(p, 0));
        const double margin = lhs + ric_xx(p, 0);
        b.kato.min_margin = std::min(b.kato.min_margin, margin);
        if (margin < -opt.tolerance) ++b.kato.violations;
    }
    if (b.kato.checked == 0) b.kato.min_margin = 0.0;

    if (!b.applied) {
        b.bochner.skipped = true;
        b.harmonic.skipped = true;
    }
    return b;
}

Integral energy(const SolitonSpec& spec) {
    Integral i = integrate(spec.metric(), norm_sq(spec.metric(), spec.xi()));
    i.value *= 0.5;
    return i;
}

LieRicciReport lie_ricci_trace_test(const SolitonSpec& spec, const CertifyOptions& opt) {
    const MetricState& g = spec.metric();
    const int band = band_for(g, opt);
    const TensorField& xi = spec.xi();
    LieRicciReport r;

    const double sol = soliton_max(spec, band);
    const bool soliton = sol <= opt.tolerance;
    const bool harmonic =
        field_norms(g, yano_laplacian(g, spec.theta()), band).max_norm <= opt.tolerance;
    r.applied = soliton || harmonic;
    r.gate = soliton ? "soliton residual within tolerance"
                     : (harmonic ? "infinitesimal harmonic transformation"
                                 : "neither a soliton field nor a harmonic transformation");

    const TensorField tr = trace(g, lie_ricci(g, xi));
    r.lie_trace = make_report("lie_ricci_trace", g, connection_laplacian(g, divergence(g, xi)) - tr, opt.tolerance, 0.0, band);
    r.lie_trace_soliton = make_report("lie_ricci_trace_soliton", g, tr - laplace_beltrami(g, g.scalar()), opt.tolerance, 0.0, band);
    r.lie_trace.skipped = !r.applied;
    r.lie_trace_soliton.skipped = !soliton;
    r.trace_sign = banded_sign(tr, band, opt.tolerance);
    r.trace_max = max_scalar(tr, band);
    r.grad_s_max = field_norms(g, differential(g, g.scalar()), band).max_norm;

    if (!soliton) return r;
    const std::string suffix = g.grid().closed() ? "" : " (truncated diagnostic)";
    if (g.grid().closed() && (r.trace_sign.nonnegative() || r.trace_sign.nonpositive()))
        r.verdicts.push_back("einstein: tr(L_xi Ric) has one sign on a closed grid");
    if (r.grad_s_max <= opt.tolerance && r.trace_max <= opt.tolerance) {
        const TensorField ric_sq = norm_sq(g, g.ricci());
        double worst = 0.0, s_max = 0.0;
        for (std::size_t p = 0; p < g.grid().node_count(); ++p) {
            if (band > 0 && g.grid().boundary_distance(p) < band) continue;
            worst = std::max(worst, std::abs(ric_sq(p, 0) + spec.lambda() * g.scalar()(p, 0)));
            s_max = std::max(s_max, std::abs(g.scalar()(p, 0)));
        }
        r.ric_sq_identity = worst;
        if (worst <= opt.tolerance) {
            if (spec.lambda() >= 0.0 || s_max <= opt.tolerance)
                r.verdicts.push_back("ricci_flat: |Ric|^2 = -lambda s with lambda >= 0 or s = 0" + suffix);
            else
                r.verdicts.push_back("einstein: grad s = 0 and tr(L_xi Ric) = 0" + suffix);
        }
    }
    return r;
}

LieRiemannReport lie_riemann_integral_test(const MetricState& g, const TensorField& xi, const CertifyOptions& opt) {
    require_closed(g, "L_xi Rm integral test");
    const TensorField lt = curvature_trace(g, lie_riemann(g, xi));
    const TensorField xs = directional(g, xi, g.scalar());
    const TensorField dtheta = covariant_derivative(g, lower(g, xi));  // [k][l] = ∇_k ξ_l
    const TensorField rhs = xs + 4.0 * inner(g, g.ricci(), dtheta);

    LieRiemannReport r;
    r.pointwise = make_report("lie_riemann_trace", g, lt - rhs, opt.tolerance);
    r.lhs = integrate(g, lt).value;
    r.rhs = -integrate(g, xs).value;
    r.abs_residual = std::abs(r.lhs - r.rhs);
    r.relative_residual = r.abs_residual / std::max({std::abs(r.lhs), std::abs(r.rhs), opt.tolerance});
    r.integral_sign = make_hypothesis("int_trace_lie_riemann", r.lhs, opt.tolerance, false,
                               "nonnegative value on a soliton forces the Einstein case");
    return r;
}

Certificate certify(const SolitonSpec& spec, const CertifyOptions& opt) {
    const MetricState& g = spec.metric();
    const bool closed = g.grid().closed();
    const int band = band_for(g, opt);
    Certificate c = soliton_residual(spec, opt);
    const bool soliton = c.find("soliton_equation")->pass;

    if (spec.is_gradient()) {
        ResidualReport tp = trace_potential_identity(spec, opt);
        tp.tolerance = opt.tolerance * g.dim();
        tp.pass = tp.max_norm <= tp.tolerance;
        tp.skipped = !soliton;
        c.residuals.push_back(tp);
    }

    BochnerReport b = bochner_kato_suite(spec, opt);
    c.residuals.push_back(b.bochner);
    c.residuals.push_back(b.harmonic);
    ResidualReport kato;
    kato.name = "kato_inequality";
    kato.max_norm = std::max(0.0, -b.kato.min_margin);
    kato.l2_norm = kato.max_norm;
    kato.h = g.grid().max_spacing();
    kato.tolerance = opt.tolerance;
    kato.pass = b.kato.pass();
    kato.truncated = !closed;
    kato.skipped = !b.applied;
    c.residuals.push_back(kato);

    LieRicciReport lr = lie_ricci_trace_test(spec, opt);
    c.residuals.push_back(lr.lie_trace);
    c.residuals.push_back(lr.lie_trace_soliton);
    HypothesisEntry tr_sign = make_hypothesis("trace_lie_ricci", lr.trace_sign.max >= -lr.trace_sign.min
                                                                     ? lr.trace_sign.max
                                                                     : lr.trace_sign.min,
                                              opt.tolerance, !closed, "largest-magnitude value; sign field label in sign");
    tr_sign.sign = lr.trace_sign.label();
    c.hypotheses.push_back(tr_sign);
    for (auto& v : lr.verdicts) c.verdicts.push_back(v);

    const TensorField ric_xx = quadratic(g.ricci(), spec.xi());
    const SignSummary rs = banded_sign(ric_xx, band, opt.tolerance);
    HypothesisEntry rxx = make_hypothesis("ric_xi_xi", rs.max, opt.tolerance, !closed, "maximum of Ric(xi, xi)");
    rxx.sign = rs.label();
    c.hypotheses.push_back(rxx);
    const Integral e = energy(spec);
    c.hypotheses.push_back(make_hypothesis("energy", e.value, opt.tolerance, e.truncated));

    if (closed) {
        if (spec.is_gradient()) {
            const GradSReport gs = grad_s_integral_test(spec, opt);
            c.hypotheses.push_back(make_hypothesis("int_xi_s", gs.int_xi_s, opt.tolerance));
            c.hypotheses.push_back(make_hypothesis("int_bar_lap_f_sq", gs.int_bar_f_sq, opt.tolerance));
            ResidualReport chain;
            chain.name = "grad_s_chain";
            chain.max_norm = chain.l2_norm = gs.relative_mismatch;
            chain.h = g.grid().max_spacing();
            chain.tolerance = 1e-3;
            chain.pass = gs.relative_mismatch <= chain.tolerance;
            c.residuals.push_back(chain);
            if (soliton && gs.einstein_forced) c.verdicts.push_back("einstein: integral of xi(s0) within tolerance");
        }
        const LieRiemannReport lm = lie_riemann_integral_test(g, spec.xi(), opt);
        c.residuals.push_back(lm.pointwise);
        ResidualReport integral;
        integral.name = "lie_riemann_integral";
        integral.max_norm = integral.l2_norm = lm.abs_residual;
        integral.h = g.grid().max_spacing();
        integral.tolerance = opt.tolerance * std::max(1.0, std::abs(lm.rhs));
        integral.pass = lm.abs_residual <= integral.tolerance;
        c.residuals.push_back(integral);
        c.hypotheses.push_back(lm.integral_sign);
        if (soliton && lm.lhs >= -opt.tolerance)
            c.verdicts.push_back("einstein: integral of tr(L_xi Rm) is nonnegative");
    } else {
        const TensorField& s = g.scalar();
        TensorField a1 = s, a2 = s;
        for (auto& v : a1.data()) v = std::abs(v);
        for (auto& v : a2.data()) v = v * v;
        c.hypotheses.push_back(make_hypothesis("int_abs_s_q1", integrate(g, a1).value, opt.tolerance, true,
                                               "box integral; L^1 membership is not decidable on a truncation"));
        c.hypotheses.push_back(make_hypothesis("int_abs_s_q2", integrate(g, a2).value, opt.tolerance, true,
                                               "box integral; L^2 membership is not decidable on a truncation"));
        c.undecidable = {"completeness of the metric", "stochastic completeness", "L^q membership of s"};
    }
    return c;
}

Certificate sphere_certificate(double r, int n, double lambda, double tolerance) {
    const ConstantCurvatureSlice sl = sphere_slice_at_radius(r, n);
    Certificate c;
    c.classification = classify(lambda);
    c.lambda = lambda;
    c.gradient = true;
    c.flag_tolerance = tolerance;
    // ξ = 0: L_ξ g = 0 and the soliton equation reduces to −Ric = λ g
    double worst = 0.0, ric_max = 0.0;
    for (std::size_t a = 0; a < sl.g.size(); ++a) {
        worst = std::max(worst, std::abs(-sl.ric[a] - lambda * sl.g[a]));
        ric_max = std::max(ric_max, std::abs(sl.ric[a]));
    }
    ResidualReport core;
    core.name = "soliton_equation";
    core.max_norm = core.l2_norm = worst;
    core.tolerance = tolerance;
    core.pass = worst <= tolerance;
    c.residuals.push_back(core);
    ResidualReport tp = core;
    tp.name = "trace_potential";
    tp.max_norm = tp.l2_norm = std::abs(sl.s + n * lambda);
    tp.tolerance = tolerance * n;
    tp.pass = tp.max_norm <= tp.tolerance;
    c.residuals.push_back(tp);
    c.einstein = true;
    c.trivial = true;
    c.ricci_flat = ric_max <= tolerance;
    c.hypotheses.push_back(make_hypothesis("energy", 0.0, tolerance));
    c.hypotheses.push_back(make_hypothesis("int_xi_s", 0.0, tolerance));
    if (core.pass) c.verdicts.push_back("einstein: xi = 0 and Ric = -lambda g");
    return c;
}

} // namespace rfl
