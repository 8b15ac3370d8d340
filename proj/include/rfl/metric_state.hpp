#pragma once

#include <memory>
#include <mutex>
#include <optional>

#include "rfl/stencil.hpp"
#include "rfl/tensor_field.hpp"

namespace rfl {

/// One time slice of a Riemannian metric on a ChartGrid, with its inverse, volume
/// density and lazily built connection/curvature caches.
///
/// A MetricState never changes after construction; a new metric is a new state, so
/// cached curvature can never go stale. Copies share the caches. Cache population is
/// guarded by once-flags, so a populated state can be read from several threads.
///
/// Curvature conventions:
///   R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z,  R^l_{ijk} ∂_l = R(∂_i,∂_j)∂_k,
///   R_{ijkl} = g_{lm} R^m_{ijk}  (so R_{ijji} > 0 on the round sphere),
///   Ric_{jk} = R^i_{ijk} = g^{il} R_{ijkl},  s = g^{jk} Ric_{jk}.
class MetricState {
public:
    /// `g` must be a symmetric covariant rank-2 field. Throws DegenerateMetricError
    /// naming the first node whose pointwise Cholesky factorization fails.
    explicit MetricState(TensorField g, int fd_order = 4);

    const ChartGrid& grid() const noexcept { return g_.grid(); }
    const std::shared_ptr<const ChartGrid>& grid_ptr() const noexcept { return g_.grid_ptr(); }
    int dim() const noexcept { return g_.dim(); }
    int fd_order() const noexcept { return differ_->order(); }
    const Differ& differ() const noexcept { return *differ_; }

    const TensorField& g() const noexcept { return g_; }
    const TensorField& g_inv() const noexcept { return g_inv_; }
    /// √det g at every node.
    const TensorField& vol_density() const noexcept { return vol_; }

    /// Γ^k_{ij}, stored [k][i][j].
    const TensorField& christoffel() const;
    /// R^l_{ijk}, stored [l][i][j][k].
    const TensorField& riemann_mixed() const;
    /// R_{ijkl}, all covariant.
    const TensorField& riemann() const;
    const TensorField& ricci() const;
    const TensorField& scalar() const;

private:
    struct Cache {
        std::once_flag gamma_once, rmix_once, rm_once, ric_once, s_once;
        std::optional<TensorField> gamma, rmix, rm, ric, s;
    };

    TensorField g_;
    TensorField g_inv_;
    TensorField vol_;
    std::shared_ptr<const Differ> differ_;
    std::shared_ptr<Cache> cache_;
};

} // namespace rfl
