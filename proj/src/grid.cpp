#include "rfl/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rfl/errors.hpp"

namespace rfl {

ChartGrid::ChartGrid(std::vector<int> shape, std::vector<double> spacing, std::vector<bool> periodic,
                     std::vector<double> lower)
    : shape_(std::move(shape)), spacing_(std::move(spacing)), lower_(std::move(lower)),
      periodic_(std::move(periodic)) {
    const auto n = shape_.size();
    if (n < 1 || n > static_cast<std::size_t>(kMaxDim))
        throw ConfigError("grid dimension must be in [1, " + std::to_string(kMaxDim) + "]");
    if (spacing_.size() != n || periodic_.size() != n)
        throw ConfigError("grid shape/spacing/periodic lengths differ");
    if (lower_.empty()) lower_.assign(n, 0.0);
    if (lower_.size() != n) throw ConfigError("grid lower-corner length differs from dimension");
    for (std::size_t a = 0; a < n; ++a) {
        if (shape_[a] < 5)
            throw ConfigError("grid axis " + std::to_string(a) + " has " + std::to_string(shape_[a]) +
                              " nodes; at least 5 are required");
        if (!(spacing_[a] > 0.0) || !std::isfinite(spacing_[a]))
            throw ConfigError("grid spacing on axis " + std::to_string(a) + " must be positive");
    }
    strides_.assign(n, 1);
    for (int a = static_cast<int>(n) - 2; a >= 0; --a) strides_[a] = strides_[a + 1] * shape_[a + 1];
    nodes_ = strides_[0] * shape_[0];
}

ChartGrid ChartGrid::torus(std::vector<int> shape, std::vector<double> lower, std::vector<double> upper) {
    std::vector<double> h(shape.size());
    if (lower.size() != shape.size() || upper.size() != shape.size())
        throw ConfigError("torus bounds length differs from dimension");
    for (std::size_t a = 0; a < shape.size(); ++a) h[a] = (upper[a] - lower[a]) / shape[a];
    std::vector<bool> periodic(shape.size(), true);
    return ChartGrid(std::move(shape), std::move(h), std::move(periodic), std::move(lower));
}

ChartGrid ChartGrid::box(std::vector<int> shape, std::vector<double> lower, std::vector<double> upper) {
    std::vector<double> h(shape.size());
    if (lower.size() != shape.size() || upper.size() != shape.size())
        throw ConfigError("box bounds length differs from dimension");
    for (std::size_t a = 0; a < shape.size(); ++a) h[a] = (upper[a] - lower[a]) / (shape[a] - 1);
    std::vector<bool> periodic(shape.size(), false);
    return ChartGrid(std::move(shape), std::move(h), std::move(periodic), std::move(lower));
}

bool ChartGrid::closed() const noexcept {
    return std::all_of(periodic_.begin(), periodic_.end(), [](bool p) { return p; });
}

double ChartGrid::cell_volume() const noexcept {
    double v = 1.0;
    for (double h : spacing_) v *= h;
    return v;
}

double ChartGrid::weight(std::size_t node) const noexcept {
    double w = cell_volume();
    const auto idx = index(node);
    for (int a = 0; a < dim(); ++a)
        if (!periodic_[a] && (idx[a] == 0 || idx[a] == shape_[a] - 1)) w *= 0.5;
    return w;
}

double ChartGrid::max_spacing() const noexcept { return *std::max_element(spacing_.begin(), spacing_.end()); }
double ChartGrid::min_spacing() const noexcept { return *std::min_element(spacing_.begin(), spacing_.end()); }

std::array<int, kMaxDim> ChartGrid::index(std::size_t node) const noexcept {
    std::array<int, kMaxDim> idx{};
    for (int a = 0; a < dim(); ++a) {
        idx[a] = static_cast<int>(node / strides_[a]);
        node %= strides_[a];
    }
    return idx;
}

std::size_t ChartGrid::node(const std::array<int, kMaxDim>& idx) const noexcept {
    std::size_t p = 0;
    for (int a = 0; a < dim(); ++a) p += static_cast<std::size_t>(idx[a]) * strides_[a];
    return p;
}

std::array<double, kMaxDim> ChartGrid::coords(std::size_t node) const noexcept {
    const auto idx = index(node);
    std::array<double, kMaxDim> x{};
    for (int a = 0; a < dim(); ++a) x[a] = coord(a, idx[a]);
    return x;
}

bool ChartGrid::shift(std::size_t node, int axis, int k, std::size_t& out) const noexcept {
    const int n = shape_[axis];
    const int i = static_cast<int>((node / strides_[axis]) % n);
    int j = i + k;
    if (periodic_[axis]) {
        j %= n;
        if (j < 0) j += n;
    } else if (j < 0 || j >= n) {
        return false;
    }
    out = node + (static_cast<std::ptrdiff_t>(j) - i) * static_cast<std::ptrdiff_t>(strides_[axis]);
    return true;
}

int ChartGrid::boundary_distance(std::size_t node) const noexcept {
    int d = std::numeric_limits<int>::max();
    const auto idx = index(node);
    for (int a = 0; a < dim(); ++a)
        if (!periodic_[a]) d = std::min({d, idx[a], shape_[a] - 1 - idx[a]});
    return d;
}

bool ChartGrid::same_as(const ChartGrid& other) const noexcept {
    return shape_ == other.shape_ && spacing_ == other.spacing_ && periodic_ == other.periodic_;
}

} // namespace rfl
