#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "rfl/grid.hpp"

namespace rfl {

enum class Variance { covariant, contravariant };

using Signature = std::vector<Variance>;

/// Component arrays over a ChartGrid. Components of one node are contiguous,
/// row-major over the slots: T(node, i0, i1, ...) = data[node * n^rank + ((i0 * n) + i1) ...].
///
/// A field tagged symmetric (rank 2 only) is written through set_sym(), which stores
/// both (i,j) and (j,i) from the same value.
class TensorField {
public:
    TensorField() = default;
    TensorField(std::shared_ptr<const ChartGrid> grid, Signature sig, bool symmetric = false);

    static TensorField scalar(std::shared_ptr<const ChartGrid> grid);
    static TensorField vector(std::shared_ptr<const ChartGrid> grid);
    static TensorField form(std::shared_ptr<const ChartGrid> grid);
    static TensorField sym2(std::shared_ptr<const ChartGrid> grid,
                            Variance v = Variance::covariant);
    static TensorField covariant(std::shared_ptr<const ChartGrid> grid, int rank);

    const ChartGrid& grid() const noexcept { return *grid_; }
    const std::shared_ptr<const ChartGrid>& grid_ptr() const noexcept { return grid_; }
    const Signature& signature() const noexcept { return sig_; }
    int rank() const noexcept { return static_cast<int>(sig_.size()); }
    int dim() const noexcept { return grid_->dim(); }
    bool symmetric() const noexcept { return symmetric_; }
    std::size_t components() const noexcept { return ncomp_; }
    std::size_t nodes() const noexcept { return grid_->node_count(); }

    std::span<double> node(std::size_t p) noexcept { return {data_.data() + p * ncomp_, ncomp_}; }
    std::span<const double> node(std::size_t p) const noexcept {
        return {data_.data() + p * ncomp_, ncomp_};
    }
    double& operator()(std::size_t p, std::size_t c) noexcept { return data_[p * ncomp_ + c]; }
    double operator()(std::size_t p, std::size_t c) const noexcept { return data_[p * ncomp_ + c]; }

    /// Rank-2 helper: writes (i,j) and (j,i).
    void set_sym(std::size_t p, int i, int j, double v) noexcept {
        const auto n = static_cast<std::size_t>(dim());
        data_[p * ncomp_ + i * n + j] = v;
        data_[p * ncomp_ + j * n + i] = v;
    }

    std::vector<double>& data() noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }

    bool all_finite() const noexcept;
    /// Throws ShapeError when signature or grid differ.
    void require_compatible(const TensorField& other, const char* what) const;

    TensorField& operator+=(const TensorField& o);
    TensorField& operator-=(const TensorField& o);
    TensorField& operator*=(double s) noexcept;

    /// Pointwise max |component|.
    double max_abs() const noexcept;

private:
    std::shared_ptr<const ChartGrid> grid_;
    Signature sig_;
    bool symmetric_ = false;
    std::size_t ncomp_ = 0;
    std::vector<double> data_;
};

TensorField operator+(TensorField a, const TensorField& b);
TensorField operator-(TensorField a, const TensorField& b);
TensorField operator*(double s, TensorField a);

/// n^rank
constexpr std::size_t ipow(int n, int r) noexcept {
    std::size_t v = 1;
    for (int i = 0; i < r; ++i) v *= static_cast<std::size_t>(n);
    return v;
}

} // namespace rfl
