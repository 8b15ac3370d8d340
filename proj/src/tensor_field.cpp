#include "rfl/tensor_field.hpp"

#include <algorithm>
#include <cmath>

#include "rfl/errors.hpp"

namespace rfl {

TensorField::TensorField(std::shared_ptr<const ChartGrid> grid, Signature sig, bool symmetric)
    : grid_(std::move(grid)), sig_(std::move(sig)), symmetric_(symmetric) {
    if (!grid_) throw ShapeError("tensor field without grid");
    if (symmetric_ && sig_.size() != 2) throw ShapeError("only rank-2 fields may be tagged symmetric");
    ncomp_ = ipow(grid_->dim(), rank());
    data_.assign(grid_->node_count() * ncomp_, 0.0);
}

TensorField TensorField::scalar(std::shared_ptr<const ChartGrid> grid) {
    return TensorField(std::move(grid), {});
}
TensorField TensorField::vector(std::shared_ptr<const ChartGrid> grid) {
    return TensorField(std::move(grid), {Variance::contravariant});
}
TensorField TensorField::form(std::shared_ptr<const ChartGrid> grid) {
    return TensorField(std::move(grid), {Variance::covariant});
}
TensorField TensorField::sym2(std::shared_ptr<const ChartGrid> grid, Variance v) {
    return TensorField(std::move(grid), {v, v}, true);
}
TensorField TensorField::covariant(std::shared_ptr<const ChartGrid> grid, int rank) {
    return TensorField(std::move(grid), Signature(static_cast<std::size_t>(rank), Variance::covariant));
}

bool TensorField::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void TensorField::require_compatible(const TensorField& other, const char* what) const {
    if (sig_ != other.sig_)
        throw ShapeError(std::string(what) + ": tensor signatures differ");
    if (grid_ != other.grid_ && !grid_->same_as(*other.grid_))
        throw ShapeError(std::string(what) + ": fields live on different grids");
}

TensorField& TensorField::operator+=(const TensorField& o) {
    require_compatible(o, "add");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    symmetric_ = symmetric_ && o.symmetric_;
    return *this;
}

TensorField& TensorField::operator-=(const TensorField& o) {
    require_compatible(o, "subtract");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    symmetric_ = symmetric_ && o.symmetric_;
    return *this;
}

TensorField& TensorField::operator*=(double s) noexcept {
    for (double& v : data_) v *= s;
    return *this;
}

double TensorField::max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

TensorField operator+(TensorField a, const TensorField& b) { return a += b; }
TensorField operator-(TensorField a, const TensorField& b) { return a -= b; }
TensorField operator*(double s, TensorField a) { return a *= s; }

} // namespace rfl
