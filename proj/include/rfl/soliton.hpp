#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rfl/families.hpp"
#include "rfl/flow.hpp"
#include "rfl/integrate.hpp"
#include "rfl/metric_state.hpp"
#include "rfl/residual.hpp"

namespace rfl {

enum class FieldKind { vector, gradient };

const char* to_string(FieldKind k) noexcept;

/// (g, ξ, λ) or (g, f, λ). For the gradient kind ξ = ∇f is derived, never supplied.
class SolitonSpec {
public:
    /// Throws ShapeError when ξ is not a vector field on the metric's grid.
    static SolitonSpec from_field(MetricState g, TensorField xi, double lambda);
    /// Throws ShapeError when f is not a scalar field on the metric's grid.
    static SolitonSpec from_potential(MetricState g, TensorField f, double lambda);
    /// Uses the family's sampled soliton data; InapplicableError when it has none.
    static SolitonSpec from_family(const FamilyInstance& inst);

    const MetricState& metric() const noexcept { return g_; }
    FieldKind kind() const noexcept { return kind_; }
    bool is_gradient() const noexcept { return kind_ == FieldKind::gradient; }
    double lambda() const noexcept { return lambda_; }
    /// ξ^i (supplied, or ∇f).
    const TensorField& xi() const noexcept { return xi_; }
    /// θ = ξ^♭ (df for the gradient kind).
    TensorField theta() const;
    /// The potential f; InapplicableError for the vector kind.
    const TensorField& potential() const;
    /// Same metric and λ with ξ replaced by cξ (f by cf for the gradient kind).
    SolitonSpec scaled(double c) const;

private:
    SolitonSpec(MetricState g, FieldKind kind, TensorField xi, std::optional<TensorField> f, double lambda);

    MetricState g_;
    FieldKind kind_;
    TensorField xi_;
    std::optional<TensorField> f_;
    double lambda_;
};

/// Sign convention written into every certificate.
inline constexpr const char* kSolitonConvention = "lambda<0 shrinking, lambda=0 steady, lambda>0 expanding";

/// "shrinking", "steady" or "expanding".
const char* classify(double lambda) noexcept;

struct CertifyOptions {
    /// Identity residual tolerance. 1e-10 suits closed-form inputs; FD inputs need the calibrated C·h^p.
    double tolerance = 1e-10;
    /// Threshold for the einstein / trivial / ricci_flat flags.
    double flag_tolerance = 1e-8;
    /// Pointwise agreement of the soliton and gradient-soliton residual fields on gradient specs.
    double agreement_tolerance = 1e-12;
    /// Nodes with ‖ξ‖ ≤ zero_fraction · max‖ξ‖ are skipped in the Kato inequality.
    double zero_fraction = 1e-8;
    /// Boundary band skipped on truncated grids; negative selects twice the stencil order.
    int band = -1;
};

/// A signed scalar reported in the hypothesis table.
struct HypothesisEntry {
    std::string name;
    double value = 0.0;
    /// "positive", "negative", "zero" (|value| ≤ tolerance) or a SignSummary label for fields.
    std::string sign;
    double tolerance = 0.0;
    bool truncated = false;
    std::string note;
};

HypothesisEntry make_hypothesis(std::string name, double value, double tolerance, bool truncated = false,
                                std::string note = {});

struct Certificate {
    std::string classification;
    std::string convention = kSolitonConvention;
    double lambda = 0.0;
    bool gradient = false;
    bool einstein = false;
    bool trivial = false;
    bool ricci_flat = false;
    double flag_tolerance = 0.0;
    bool truncated = false;
    std::vector<ResidualReport> residuals;
    std::vector<HypothesisEntry> hypotheses;
    /// Threshold classifications restating which hypothesis was met.
    std::vector<std::string> verdicts;
    /// Hypotheses that cannot be decided on a finite grid.
    std::vector<std::string> undecidable;

    const ResidualReport* find(const std::string& name) const;
    const HypothesisEntry* find_hypothesis(const std::string& name) const;
    /// Every non-skipped residual passes.
    bool pass() const;
};

// -- core ---------------------------------------------------------------------

/// −Ric − ½ L_ξ g − λ g.
TensorField soliton_residual_field(const SolitonSpec& spec);
/// −Ric − Hess f − λ g (gradient kind only).
TensorField gradient_residual_field(const SolitonSpec& spec);

/// Core certificate: residuals "soliton_equation" (and "gradient_soliton_equation", "gradient_agreement" for gradient specs),
/// classification and flags.
Certificate soliton_residual(const SolitonSpec& spec, const CertifyOptions& opt = {});

/// ‖Δ̄f − s − nλ‖. InapplicableError for the vector kind.
ResidualReport trace_potential_identity(const SolitonSpec& spec, const CertifyOptions& opt = {});

// -- integral tests on closed grids -------------------------------------------

struct GradSReport {
    /// ∫ ξ(s₀) dvol with the computed scalar curvature.
    double int_xi_s = 0.0;
    /// ∫ ξ(s_c) dvol with s_c = Δ̄f − nλ, the scalar curvature the soliton equation implies.
    double int_xi_s_constrained = 0.0;
    /// ∫ (Δ̄f)² dvol.
    double int_bar_f_sq = 0.0;
    /// |int_xi_s_constrained − int_bar_f_sq| / max(|int_bar_f_sq|, tolerance).
    double relative_mismatch = 0.0;
    /// |int_xi_s − int_xi_s_constrained|; nonzero exactly when the soliton constraint fails.
    double constraint_mismatch = 0.0;
    /// ‖Δ̄f‖_{L²}.
    double bar_f_l2 = 0.0;
    double tolerance = 0.0;
    /// Both integrals ≤ tolerance: Δ̄f = 0 and the metric is forced to be Einstein.
    bool einstein_forced = false;
};
/// InapplicableError on truncated grids or vector specs.
GradSReport grad_s_integral_test(const SolitonSpec& spec, const CertifyOptions& opt = {});

struct KatoReport {
    double epsilon = 0.0;
    std::size_t checked = 0;
    std::size_t excluded = 0;
    std::size_t violations = 0;
    /// min over checked nodes of ‖ξ‖Δ‖ξ‖ + Ric(ξ, ξ).
    double min_margin = 0.0;
    bool pass() const noexcept { return violations == 0; }
};

struct BochnerReport {
    /// The identities hold for infinitesimal harmonic transformations; the suite runs when
    /// the soliton residual or ‖Δ̄θ − Ric(ξ,·)‖ is within tolerance.
    bool applied = false;
    std::string gate;
    /// ½Δ‖ξ‖² − ‖∇ξ‖² + Ric(ξ, ξ).
    ResidualReport bochner;
    /// Δ̄θ − Ric(ξ, ·).
    ResidualReport harmonic;
    KatoReport kato;
};
BochnerReport bochner_kato_suite(const SolitonSpec& spec, const CertifyOptions& opt = {});

/// ½ ∫ ‖ξ‖² dvol.
Integral energy(const SolitonSpec& spec);

struct LieRicciReport {
    bool applied = false;
    std::string gate;
    /// Δ̄(div ξ) − tr_g(L_ξ Ric).
    ResidualReport lie_trace;
    /// tr_g(L_ξ Ric) − Δs, the soliton form (div ξ = −(s + nλ)).
    ResidualReport lie_trace_soliton;
    /// Sign field of tr_g(L_ξ Ric).
    SignSummary trace_sign;
    double grad_s_max = 0.0;
    double trace_max = 0.0;
    /// max |‖Ric‖² + λ s| when ∇s and tr(L_ξ Ric) both vanish to tolerance.
    std::optional<double> ric_sq_identity;
    std::vector<std::string> verdicts;
};
LieRicciReport lie_ricci_trace_test(const SolitonSpec& spec, const CertifyOptions& opt = {});

struct LieRiemannReport {
    /// g^{jk} g^{il} L_ξ R_ijkl − ξ(s) − 4 g^{jk} g^{il} R_ij ∇_k ξ_l.
    ResidualReport pointwise;
    /// ∫ g^{jk} g^{il} L_ξ R_ijkl dvol.
    double lhs = 0.0;
    /// −∫ ξ(s) dvol.
    double rhs = 0.0;
    double abs_residual = 0.0;
    /// abs_residual / max(|lhs|, |rhs|, tolerance).
    double relative_residual = 0.0;
    HypothesisEntry integral_sign;
};
/// Any smooth ξ. InapplicableError on truncated grids.
LieRiemannReport lie_riemann_integral_test(const MetricState& g, const TensorField& xi,
                                           const CertifyOptions& opt = {});

/// Every applicable entry: core, potential trace identity, ∫ξ(s₀), Bochner/Kato, Lie–Ricci trace,
/// L_ξRm integral, energy and the sign hypotheses.
Certificate certify(const SolitonSpec& spec, const CertifyOptions& opt = {});

/// Closed-form certificate of the round sphere of radius r with ξ = 0.
Certificate sphere_certificate(double r, int n, double lambda, double tolerance = 1e-10);

} // namespace rfl
