#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rfl/expression.hpp"
#include "rfl/metric_state.hpp"

namespace rfl {

enum class FamilyKind { flat_torus, conformal_torus, round_sphere, cigar, gaussian_shrinker, product };

const char* to_string(FamilyKind k) noexcept;
/// Throws ConfigError on an unknown name.
FamilyKind family_kind_from_string(const std::string& s);

/// Parameters of one closed-form family.
///
/// round_sphere: `radius`, `n`. Gridded only as the pole-free warped patch
/// g = r²(dψ² + sin²ψ dθ²) (n = 2, ψ a box axis inside (0, π), θ periodic); every
/// closed-manifold use goes through the closed-form evaluators instead.
/// gaussian_shrinker: flat Rⁿ with f = −λ|x|²/2 and λ < 0.
/// cigar: g = (dx² + dy²)/(1 + x² + y²), f = −log(1 + x² + y²), λ = 0.
/// product: block-diagonal product of `factors` (non-soliton kinds only).
struct FamilySpec {
    FamilyKind kind = FamilyKind::flat_torus;
    int n = 2;
    std::string u_expr;  // conformal_torus: g = e^{2u} δ
    double radius = 1.0;
    double lambda = -0.5;
    double truncation = 0.0;  // box half-width for cigar / gaussian_shrinker
    std::vector<FamilySpec> factors;

    /// Total dimension (sum of factor dimensions for products).
    int dim() const;
    /// Throws ConfigError on violated invariants (radius > 0, λ < 0, truncation > 0, ...).
    void validate() const;
};

/// Closed-form geometry of a family, as pure functions of chart coordinates.
/// Curvature follows the MetricState conventions (R_{ijji} > 0 on the sphere).
class ExactCurvature {
public:
    virtual ~ExactCurvature() = default;
    virtual int dim() const = 0;
    virtual void metric(const double* x, double* g) const = 0;
    /// Γ^k_{ij} stored [k][i][j].
    virtual void christoffel(const double* x, double* gamma) const = 0;
    /// R_{ijkl}, all covariant.
    virtual void riemann(const double* x, double* rm) const = 0;

    void metric_inverse(const double* x, double* gi) const;
    void ricci(const double* x, double* ric) const;
    double scalar(const double* x) const;

    // Soliton data (−Ric = ½ L_ξ g + λ g). Families without a structure return false.
    virtual bool has_soliton() const { return false; }
    virtual bool is_gradient() const { return false; }
    virtual double soliton_lambda() const { return 0.0; }
    /// ξ^i.
    virtual void soliton_field(const double* x, double* xi) const;
    /// Potential f with ξ = ∇f (gradient families only).
    virtual double potential(const double* x) const;
    /// Hess_g f, covariant.
    virtual void potential_hessian(const double* x, double* h) const;
};

/// Sampled closed-form fields on a grid.
struct ExactFields {
    TensorField g, gamma, rm, ric, s;
    std::optional<TensorField> f, xi, hess_f;
};

ExactFields sample(const ExactCurvature& exact, std::shared_ptr<const ChartGrid> grid);

/// A family sampled on a grid with its oracle attached.
struct FamilyInstance {
    FamilySpec spec;
    std::shared_ptr<const ExactCurvature> exact;
    MetricState metric;
    /// Soliton data sampled from the closed form, when the family carries one.
    std::optional<double> lambda;
    std::optional<TensorField> potential;
    std::optional<TensorField> field;
};

/// Closed-form evaluators for a family (no grid).
std::shared_ptr<const ExactCurvature> make_exact(const FamilySpec& spec);

/// Samples the family metric on `grid`. Errors: dimension mismatch, noncompact kinds
/// on periodic axes, torus kinds on box axes, an u-expression that does not wrap on
/// the periodic domain, a sphere grid that is not a pole-free warped patch.
FamilyInstance instantiate(const FamilySpec& spec, std::shared_ptr<const ChartGrid> grid, int fd_order = 4);

/// Exact round-sphere Ricci flow: r(t)² = r₀² − 2(n−1)t, s = n(n−1)/r².
struct SphereFlowPoint {
    double r = 0.0;
    double r2 = 0.0;
    double s = 0.0;
};
double sphere_extinction_time(double r0, int n);
/// Throws ExtinctionError for t ≥ r₀²/(2(n−1)), ConfigError for r₀ ≤ 0, n < 2 or t < 0.
SphereFlowPoint sphere_flow_closed_form(double r0, int n, double t);

/// Constant-curvature algebra at one point of the round sphere of radius r in
/// coordinates where g = r² δ. Time derivatives follow the exact flow.
struct ConstantCurvatureSlice {
    int n = 2;
    double r2 = 1.0;
    double dr2_dt = 0.0;
    std::vector<double> g, g_inv, rm, ric, dg_dt, drm_dt, dric_dt;
    double s = 0.0, ds_dt = 0.0;
};
ConstantCurvatureSlice sphere_slice(double r0, int n, double t);
/// Same algebra at radius r (no extinction check).
ConstantCurvatureSlice sphere_slice_at_radius(double r, int n);

} // namespace rfl
