#pragma once

#include <vector>

#include "rfl/metric_state.hpp"

namespace rfl {

/// Result of a volume integral. `truncated` is set when the grid has a non-periodic
/// axis: the value then covers a truncated box, not a closed manifold.
struct Integral {
    double value = 0.0;
    bool truncated = false;
};

/// ∫ φ dvol_g as Σ_nodes φ √det g w_node. Periodic axes use the node rule; box axes
/// halve the endpoint weights.
Integral integrate(const MetricState& g, const TensorField& phi);

/// ∫ 1 dvol_g.
Integral volume(const MetricState& g);

/// Geodesic-ball volume series around one node.
struct VolumeGrowth {
    std::vector<double> radii;
    std::vector<double> volumes;
    /// R / ln V_R; NaN where V_R = 1.
    std::vector<double> integrand;
    /// true where R exceeds the largest graph distance from the center (V_R saturates).
    std::vector<bool> saturated;
    double total_volume = 0.0;
    double max_distance = 0.0;
};

/// Graph shortest-path distances from `center` over the lattice, with edges to all
/// neighbors whose offsets lie in {-2..2}^n and have coprime components; an edge
/// length is sqrt(Δx^T ḡ Δx) with ḡ the endpoint-averaged metric.
std::vector<double> graph_distances(const MetricState& g, std::size_t center);

/// V_R = volume of {x : d(center, x) ≤ R} for each R; diagnostic only.
VolumeGrowth volume_growth(const MetricState& g, std::size_t center, const std::vector<double>& radii);

} // namespace rfl
