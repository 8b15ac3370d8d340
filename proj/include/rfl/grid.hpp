#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace rfl {

inline constexpr int kMaxDim = 4;

/// Rectangular coordinate lattice, one chart. Periodic axes wrap; non-periodic
/// axes are truncated boxes that include both endpoints.
///
/// Nodes are stored row-major with axis 0 slowest.
class ChartGrid {
public:
    ChartGrid() = default;

    /// Build from node counts and spacing; `lower` is the coordinate of node 0.
    ChartGrid(std::vector<int> shape, std::vector<double> spacing, std::vector<bool> periodic,
              std::vector<double> lower = {});

    /// Periodic lattice covering [lower, upper) on every axis.
    static ChartGrid torus(std::vector<int> shape, std::vector<double> lower,
                           std::vector<double> upper);
    /// Non-periodic lattice covering [lower, upper] (endpoints are nodes).
    static ChartGrid box(std::vector<int> shape, std::vector<double> lower,
                         std::vector<double> upper);

    int dim() const noexcept { return static_cast<int>(shape_.size()); }
    const std::vector<int>& shape() const noexcept { return shape_; }
    const std::vector<double>& spacing() const noexcept { return spacing_; }
    const std::vector<double>& lower() const noexcept { return lower_; }
    const std::vector<bool>& periodic() const noexcept { return periodic_; }
    bool closed() const noexcept;

    std::size_t node_count() const noexcept { return nodes_; }
    std::size_t stride(int axis) const noexcept { return strides_[axis]; }

    /// Node volume Π h_i, i.e. the quadrature weight of an interior node.
    double cell_volume() const noexcept;
    /// Quadrature weight of a node: Π h_i, halved on non-periodic endpoints (trapezoid).
    double weight(std::size_t node) const noexcept;
    double max_spacing() const noexcept;
    double min_spacing() const noexcept;

    std::array<int, kMaxDim> index(std::size_t node) const noexcept;
    std::size_t node(const std::array<int, kMaxDim>& idx) const noexcept;
    std::array<double, kMaxDim> coords(std::size_t node) const noexcept;
    double coord(int axis, int i) const noexcept { return lower_[axis] + i * spacing_[axis]; }

    /// Neighbor along `axis` at offset `k`; wraps on periodic axes, returns false when it leaves a box.
    bool shift(std::size_t node, int axis, int k, std::size_t& out) const noexcept;

    /// Distance (in nodes) to the nearest non-periodic boundary; large for fully periodic grids.
    int boundary_distance(std::size_t node) const noexcept;

    /// Same lattice topology and spacing.
    bool same_as(const ChartGrid& other) const noexcept;

private:
    std::vector<int> shape_;
    std::vector<double> spacing_;
    std::vector<double> lower_;
    std::vector<bool> periodic_;
    std::vector<std::size_t> strides_;
    std::size_t nodes_ = 0;
};

} // namespace rfl
