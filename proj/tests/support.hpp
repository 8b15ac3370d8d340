#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "rfl/families.hpp"
#include "rfl/grid.hpp"
#include "rfl/tensor_field.hpp"

namespace rfl::test {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline std::shared_ptr<const ChartGrid> torus(int n_nodes, int dim = 2) {
    return std::make_shared<const ChartGrid>(ChartGrid::torus(std::vector<int>(dim, n_nodes),
                                                              std::vector<double>(dim, 0.0),
                                                              std::vector<double>(dim, kTwoPi)));
}

inline std::shared_ptr<const ChartGrid> box(int n_nodes, double half, int dim = 2) {
    return std::make_shared<const ChartGrid>(ChartGrid::box(std::vector<int>(dim, n_nodes),
                                                            std::vector<double>(dim, -half),
                                                            std::vector<double>(dim, half)));
}

/// Pole-free warped patch ψ ∈ [0.5, π − 0.5] (box) × θ ∈ [0, 2π) (periodic).
inline std::shared_ptr<const ChartGrid> sphere_patch(int n_nodes) {
    return std::make_shared<const ChartGrid>(ChartGrid({n_nodes + 1, 2 * n_nodes},
                                                       {(std::numbers::pi - 1.0) / n_nodes, kTwoPi / (2 * n_nodes)},
                                                       {false, true}, {0.5, 0.0}));
}

inline FamilySpec conformal_spec(const std::string& u, int n = 2) {
    FamilySpec s;
    s.kind = FamilyKind::conformal_torus;
    s.n = n;
    s.u_expr = u;
    return s;
}

inline FamilySpec flat_spec(int n = 2) {
    FamilySpec s;
    s.kind = FamilyKind::flat_torus;
    s.n = n;
    return s;
}

/// Largest componentwise |a − b| over nodes at least `band` away from any box edge.
inline double max_diff(const TensorField& a, const TensorField& b, int band = 0) {
    double m = 0.0;
    for (std::size_t p = 0; p < a.nodes(); ++p) {
        if (band > 0 && a.grid().boundary_distance(p) < band) continue;
        auto x = a.node(p);
        auto y = b.node(p);
        for (std::size_t c = 0; c < x.size(); ++c) m = std::max(m, std::abs(x[c] - y[c]));
    }
    return m;
}

inline double max_abs(const TensorField& a, int band = 0) {
    double m = 0.0;
    for (std::size_t p = 0; p < a.nodes(); ++p) {
        if (band > 0 && a.grid().boundary_distance(p) < band) continue;
        for (double v : a.node(p)) m = std::max(m, std::abs(v));
    }
    return m;
}

/// Observed order from successive halvings.
inline double slope(const std::vector<double>& err) {
    double acc = 0.0;
    for (std::size_t i = 1; i < err.size(); ++i) acc += std::log2(err[i - 1] / err[i]);
    return acc / static_cast<double>(err.size() - 1);
}

} // namespace rfl::test
