#pragma once

#include "rfl/metric_state.hpp"
#include "rfl/tensor_field.hpp"

namespace rfl {

/// Discretization of the scalar Laplace–Beltrami operator.
///
/// `conservative` evaluates (1/√g) ∂_i(√g g^{ij} ∂_j φ); on a closed grid its volume
/// integral telescopes to zero up to roundoff. `expanded` evaluates g^{ij}(Hess φ)_{ij}
/// and agrees with the trace of hessian() to roundoff. Both are consistent to the
/// stencil order.
enum class LaplacianForm { conservative, expanded };

// -- curvature (thin wrappers over the MetricState caches) ------------------

const TensorField& christoffel(const MetricState& g);
const TensorField& riemann(const MetricState& g);
const TensorField& ricci(const MetricState& g);
const TensorField& scalar_curv(const MetricState& g);

// -- index gymnastics -------------------------------------------------------

/// ξ_i = g_{ij} ξ^j
TensorField lower(const MetricState& g, const TensorField& vec);
/// θ^i = g^{ij} θ_j
TensorField raise(const MetricState& g, const TensorField& form);
/// tr_g φ = g^{ij} φ_{ij} for a covariant rank-2 field.
TensorField trace(const MetricState& g, const TensorField& phi);
/// Full metric contraction ⟨A, B⟩_g of two fields with equal signatures.
TensorField inner(const MetricState& g, const TensorField& a, const TensorField& b);
/// ‖A‖²_g pointwise.
TensorField norm_sq(const MetricState& g, const TensorField& a);
/// T(ξ, ·) for a covariant rank-2 T and a vector ξ.
TensorField contract_vector(const TensorField& t, const TensorField& vec);
/// T(ξ, ξ).
TensorField quadratic(const TensorField& t, const TensorField& vec);
/// ξ(φ) = ξ^i ∂_i φ.
TensorField directional(const MetricState& g, const TensorField& vec, const TensorField& phi);

// -- first-order operators --------------------------------------------------

/// dφ as a 1-form.
TensorField differential(const MetricState& g, const TensorField& phi);
/// ∇φ = (dφ)^♯.
TensorField gradient(const MetricState& g, const TensorField& phi);
/// ∇T with the new covariant slot first: (∇T)_{a I}.
TensorField covariant_derivative(const MetricState& g, const TensorField& t);
/// div ξ = (1/√g) ∂_i(√g ξ^i).
TensorField divergence(const MetricState& g, const TensorField& vec);

// -- second-order operators -------------------------------------------------

/// Δφ = tr_g ∇²φ (positive on convex functions: Δ(x²) > 0 for flat g).
TensorField laplace_beltrami(const MetricState& g, const TensorField& phi,
                             LaplacianForm form = LaplacianForm::conservative);
/// Rough Laplacian g^{ab} ∇_a ∇_b T for tensors of any rank (+ sign convention).
TensorField rough_laplacian(const MetricState& g, const TensorField& t);
/// Connection Laplacian Δ̄T = −tr_g ∇²T. For scalars this is exactly −laplace_beltrami().
TensorField connection_laplacian(const MetricState& g, const TensorField& t,
                                 LaplacianForm form = LaplacianForm::conservative);
/// (Hess f)_{ij} = ∂_i∂_j f − Γ^k_{ij} ∂_k f, symmetrized.
TensorField hessian(const MetricState& g, const TensorField& f);

// -- Lie derivatives --------------------------------------------------------

/// (L_ξ g)_{ij} = ∇_i ξ_j + ∇_j ξ_i.
TensorField lie_metric(const MetricState& g, const TensorField& vec);
/// (L_ξ Ric)_{ij} = ξ^m ∇_m R_{ij} + ∇_i ξ^m R_{mj} + ∇_j ξ^m R_{im}.
TensorField lie_ricci(const MetricState& g, const TensorField& vec);
/// L_ξ R_{ijkl} = ξ^m ∇_m R_{ijkl} + ∇_i ξ^m R_{mjkl} + ∇_j ξ^m R_{imkl} + ∇_k ξ^m R_{ijml} + ∇_l ξ^m R_{ijkm}.
TensorField lie_riemann(const MetricState& g, const TensorField& vec);
/// g^{jk} g^{il} T_{ijkl} for a covariant rank-4 field.
TensorField curvature_trace(const MetricState& g, const TensorField& t4);

// -- Weitzenböck-type operators ---------------------------------------------

/// ℜ₂(φ)_{ij} = −2 φ^{kl} R_{kijl} + φ_j^k R_{ki} + φ_i^k R_{kj}.
TensorField weitzenboeck_r2(const MetricState& g, const TensorField& phi);
/// Δ^S φ = Δ̄φ − ℜ₂(φ) for symmetric covariant 2-tensors.
TensorField sampson_laplacian(const MetricState& g, const TensorField& phi);
/// □θ = Δ̄θ − Ric(θ^♯, ·).
TensorField yano_laplacian(const MetricState& g, const TensorField& theta);

} // namespace rfl
