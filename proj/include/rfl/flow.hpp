#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rfl/families.hpp"
#include "rfl/metric_state.hpp"
#include "rfl/residual.hpp"

namespace rfl {

enum class Scheme { euler, rk4 };

const char* to_string(Scheme s) noexcept;
Scheme scheme_from_string(const std::string& s);

/// Stability bound on the step: cfl · h_min² / (1 + max|s|).
double stability_bound(const MetricState& g, double cfl);

/// One step of ∂g/∂t = −2 Ric. Throws ConfigError when dt is not positive or exceeds
/// stability_bound(g, cfl), CurvatureBlowUpError (carrying t + dt and the node) when
/// an intermediate or final metric fails the Cholesky test.
MetricState step(const MetricState& g, double dt, Scheme scheme, double t = 0.0, double cfl = 0.5);

/// Per-slice monitors. int_ric_sq = ∫ ‖Ric‖² dvol.
struct MonitorRow {
    double t = 0.0;
    double s_min = 0.0;
    double s_max = 0.0;
    double vol = 0.0;
    double int_s = 0.0;
    double int_ric_sq = 0.0;
};

MonitorRow compute_monitors(const MetricState& g, double t);

struct FlowOptions {
    Scheme scheme = Scheme::rk4;
    /// Fixed step; when 0 the step is safety · h_min² / (1 + max|s(0)|).
    double dt = 0.0;
    double safety = 0.1;
    double t_end = 0.0;
    /// Keep every k-th slice (slices 0 and the last are always aligned to the stride).
    int store_stride = 1;
    double cfl = 0.5;
};

/// Stored slices of a grid flow; uniform spacing dt_store between slices.
struct FlowTrajectory {
    std::vector<double> times;
    std::vector<MetricState> states;
    std::vector<MonitorRow> monitors;
    double dt = 0.0;
    double dt_store = 0.0;
    std::size_t steps = 0;

    std::size_t size() const noexcept { return states.size(); }
};

FlowTrajectory run_flow(const MetricState& g0, const FlowOptions& opt);

// -- time derivatives over stored slices -------------------------------------

/// Central difference in the interior, one-sided second order at both ends.
/// Needs at least 3 slices (NeedsHistoryError otherwise).
TensorField time_derivative(const std::vector<const TensorField*>& slices, std::size_t k, double dt);

// -- evolution residuals ------------------------------------------------------

/// ∂_t s − Δs − 2‖Ric‖².
ResidualReport scalar_evolution_residual(const FlowTrajectory& traj, std::size_t k, double tol);

struct RicciEvolutionReport {
    /// ∂_t Ric − (Δ Ric − ℜ₂(Ric)), Δ the rough Laplacian tr∇².
    ResidualReport tensor;
    /// tr_g(∂_t Ric) − Δs, with Δs evaluated as tr_g(ΔRic).
    ResidualReport trace;
};
RicciEvolutionReport ricci_evolution_residual(const FlowTrajectory& traj, std::size_t k, double tol);

/// Residual of the Δ̄-sign form ∂_t Ric = Δ̄Ric − ℜ₂(Ric); kept as a negative control.
ResidualReport ricci_evolution_residual_bar_form(const FlowTrajectory& traj, std::size_t k, double tol);

/// Sign statistics of a scalar field.
struct SignSummary {
    double min = 0.0;
    double max = 0.0;
    std::size_t positive = 0;
    std::size_t negative = 0;
    std::size_t zero = 0;
    bool strictly_positive() const noexcept { return negative == 0 && zero == 0 && positive > 0; }
    bool nonnegative() const noexcept { return negative == 0; }
    bool nonpositive() const noexcept { return positive == 0; }
    const char* label() const noexcept;
};
SignSummary sign_summary(const TensorField& scalar, double zero_tol = 0.0);

struct RiemannEvolutionReport {
    ResidualReport residual;
    /// g^{jk} g^{il} ∂_t R_ijkl.
    SignSummary trace_sign;
};
RiemannEvolutionReport riemann_evolution_residual(const FlowTrajectory& traj, std::size_t k, double tol);

/// Reaction terms of the curvature evolution at one point:
/// 2(B_ijkl − B_ijlk + B_ikjl − B_iljk) − Ric^q_i R_qjkl − Ric^q_j R_iqkl − Ric^q_k R_ijql − Ric^q_l R_ijkq,
/// B_ijkl = −g^{pr} g^{qm} R_ipjq R_krlm.
void riemann_reaction(int n, const double* g_inv, const double* rm, const double* ric, double* out);

/// Sign field of tr_g(∂_t Ric) (hypotheses read ≥ 0 or ≤ 0).
SignSummary ricci_trace_sign(const FlowTrajectory& traj, std::size_t k);

// -- maximum principle and averaged scalar curvature ------------------------

struct MaximumPrincipleReport {
    bool monotone = true;
    bool bound_applicable = false;
    bool bound_holds = true;
    std::size_t violations = 0;
    std::optional<std::size_t> first_violation;
    std::string first_violation_kind;
    /// min over stored times of s_min(t) / bound(t) when the bound applies.
    double min_ratio = 0.0;
    bool pass() const noexcept { return monotone && bound_holds; }
};

/// Checks s_min(t_{k+1}) ≥ s_min(t_k) − tol and, when s_min(0) > 0,
/// s_min(t) ≥ 1/((n/s_min(0)) − 2t).
MaximumPrincipleReport monitor_maximum_principle(const std::vector<double>& times, const std::vector<double>& s_min,
                                                 int n, double tol = 1e-9);
MaximumPrincipleReport monitor_maximum_principle(const FlowTrajectory& traj, double tol = 1e-9);

struct AverageProbeRow {
    double t = 0.0;
    double int_dt_s = 0.0;
    double int_lap_s = 0.0;
    double int_ric_sq = 0.0;
    /// |∫∂_t s − 2∫‖Ric‖²|.
    double identity_residual = 0.0;
    /// ∫∂_t s ≤ tol, the hypothesis under which the flow must be trivial.
    bool hypothesis_holds = false;
};
struct AverageProbeReport {
    std::vector<AverageProbeRow> rows;
    double max_identity_residual = 0.0;
    /// The hypothesis can only hold for Ric ≡ 0.
    bool hypothesis_anywhere = false;
    bool ricci_flat = false;
};
/// Rejects open (truncated) grids with InapplicableError.
AverageProbeReport decreasing_average_probe(const FlowTrajectory& traj, double tol = 1e-10);

// -- round sphere through the warped-profile reduction -----------------------

/// g(t) = dρ² + w(ρ)² g_{S^{n−1}}, w(ρ) = r sin(ρ/r). The flow keeps the profile round,
/// so the state is the single radius r with dr/dt = −(n−1) K r and K read off the profile.
class SphereReduction {
public:
    SphereReduction(double r0, int n);
    int n() const noexcept { return n_; }
    /// Radial and tangential sectional curvatures of the warp profile at ρ.
    static double radial_curvature(double r, double rho);
    static double tangential_curvature(double r, double rho);
    /// dr/dt.
    double rhs(double r) const;
    double step(double r, double dt, Scheme scheme) const;

private:
    double r0_;
    int n_;
};

struct SphereTrajectory {
    int n = 2;
    double r0 = 1.0;
    double dt = 0.0;
    std::vector<double> times, r, s, vol;
    std::vector<MonitorRow> monitors;
    /// Linear extrapolation of r² to zero from the last two stored samples.
    double extinction_estimate() const;
};

/// Integrates up to t_end (≤ extinction) with fixed dt.
SphereTrajectory run_sphere(double r0, int n, double dt, double t_end, Scheme scheme = Scheme::rk4,
                            int store_stride = 1);

/// Volume of the unit n-sphere.
double unit_sphere_volume(int n);

/// Closed-form residuals on the constant-curvature slice at radius r (dr/dt taken from the reduction).
struct SphereResiduals {
    double scalar = 0.0;    // |∂_t s − Δs − 2‖Ric‖²|
    double ricci = 0.0;     // ‖∂_t Ric − (ΔRic − ℜ₂(Ric))‖
    double ricci_trace = 0.0;
    double riemann = 0.0;   // max |∂_t Rm − RHS|
    double rm_trace = 0.0;  // g^{jk} g^{il} ∂_t R_ijkl
};
SphereResiduals sphere_closed_form_residuals(const ConstantCurvatureSlice& c);

} // namespace rfl
