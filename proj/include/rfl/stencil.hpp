#pragma once

#include <memory>
#include <span>
#include <vector>

#include "rfl/grid.hpp"
#include "rfl/tensor_field.hpp"

namespace rfl {

/// Finite-difference weights for the `deriv`-th derivative at `x0` from samples at `xs`
/// (Fornberg's recursion). Returned weights align with `xs`.
std::vector<double> fornberg_weights(double x0, std::span<const double> xs, int deriv);

/// Central first-derivative weights w_k (k = 1..order/2) for unit spacing, so that
/// f'(x) ~ sum_k w_k (f(x+k) - f(x-k)).
std::vector<double> central_first_weights(int order);

/// Componentwise partial derivatives on a ChartGrid.
///
/// Periodic axes and the interior of box axes use antisymmetric central pairs, which
/// annihilate constants exactly and telescope under periodic summation. Near box
/// boundaries a one-sided window of the same width is used.
class Differ {
public:
    Differ(std::shared_ptr<const ChartGrid> grid, int order = 4);

    int order() const noexcept { return order_; }
    int axis_order(int axis) const noexcept { return axes_[axis].order; }
    /// Half-width of the central first-derivative stencil on `axis`.
    int half_width(int axis) const noexcept { return axes_[axis].order / 2; }
    const ChartGrid& grid() const noexcept { return *grid_; }

    /// ∂_axis of raw component data (ncomp values per node).
    void partial(std::span<const double> in, std::size_t ncomp, int axis, std::span<double> out) const;
    /// ∂_axis of every component; result keeps the signature.
    TensorField partial(const TensorField& f, int axis) const;
    /// Coordinate gradient with the new (covariant) slot first: (dT)_{a, I} = ∂_a T_I.
    TensorField gradient(const TensorField& f) const;

private:
    struct Boundary {
        std::vector<int> offsets;
        std::vector<double> weights;
    };
    struct Axis {
        int order = 4;
        std::vector<double> pair;           // central weights / h
        std::vector<Boundary> lo, hi;       // one-sided windows for box axes
    };

    std::shared_ptr<const ChartGrid> grid_;
    int order_;
    std::vector<Axis> axes_;
};

} // namespace rfl
