#include "rfl/integrate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "rfl/errors.hpp"

namespace rfl {

Integral integrate(const MetricState& g, const TensorField& phi) {
    if (phi.rank() != 0) throw ShapeError("integrate: integrand must be a scalar field");
    if (!g.grid().same_as(phi.grid())) throw ShapeError("integrate: field and metric grids differ");
    const ChartGrid& grid = g.grid();
    Integral out;
    out.truncated = !grid.closed();
    const double cell = grid.cell_volume();
    double acc = 0.0;
    for (std::size_t p = 0; p < phi.nodes(); ++p) {
        const double w = out.truncated ? grid.weight(p) : cell;
        acc += phi(p, 0) * g.vol_density()(p, 0) * w;
    }
    out.value = acc;
    return out;
}

Integral volume(const MetricState& g) {
    TensorField one = TensorField::scalar(g.grid_ptr());
    for (double& v : one.data()) v = 1.0;
    return integrate(g, one);
}

namespace {

std::vector<std::array<int, kMaxDim>> neighbor_offsets(int n) {
    std::vector<std::array<int, kMaxDim>> out;
    std::array<int, kMaxDim> o{};
    const int total = static_cast<int>(std::pow(5, n));
    for (int code = 0; code < total; ++code) {
        int c = code;
        int gcd = 0;
        bool zero = true;
        for (int a = 0; a < n; ++a) {
            o[a] = c % 5 - 2;
            c /= 5;
            if (o[a] != 0) zero = false;
            gcd = std::gcd(gcd, std::abs(o[a]));
        }
        if (!zero && gcd == 1) out.push_back(o);
    }
    return out;
}

} // namespace

std::vector<double> graph_distances(const MetricState& g, std::size_t center) {
    const ChartGrid& grid = g.grid();
    const int n = grid.dim();
    if (center >= grid.node_count()) throw ConfigError("volume_growth: center node out of range");
    const auto offsets = neighbor_offsets(n);
    std::vector<double> dist(grid.node_count(), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[center] = 0.0;
    heap.emplace(0.0, center);
    while (!heap.empty()) {
        const auto [d, p] = heap.top();
        heap.pop();
        if (d > dist[p]) continue;
        for (const auto& o : offsets) {
            std::size_t q = p;
            bool ok = true;
            for (int a = 0; a < n && ok; ++a)
                if (o[a] != 0) ok = grid.shift(q, a, o[a], q);
            if (!ok) continue;
            double len2 = 0.0;
            auto gp = g.g().node(p);
            auto gq = g.g().node(q);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    len2 += 0.5 * (gp[i * n + j] + gq[i * n + j]) * o[i] * grid.spacing()[i] * o[j] *
                            grid.spacing()[j];
            const double nd = d + std::sqrt(len2);
            if (nd < dist[q]) {
                dist[q] = nd;
                heap.emplace(nd, q);
            }
        }
    }
    return dist;
}

VolumeGrowth volume_growth(const MetricState& g, std::size_t center, const std::vector<double>& radii) {
    const ChartGrid& grid = g.grid();
    const auto dist = graph_distances(g, center);
    VolumeGrowth out;
    out.radii = radii;
    out.max_distance = 0.0;
    for (double d : dist)
        if (std::isfinite(d)) out.max_distance = std::max(out.max_distance, d);
    const bool closed = grid.closed();
    std::vector<double> w(grid.node_count());
    for (std::size_t p = 0; p < w.size(); ++p)
        w[p] = g.vol_density()(p, 0) * (closed ? grid.cell_volume() : grid.weight(p));
    out.total_volume = std::accumulate(w.begin(), w.end(), 0.0);
    for (double r : radii) {
        double v = 0.0;
        for (std::size_t p = 0; p < w.size(); ++p)
            if (dist[p] <= r) v += w[p];
        out.volumes.push_back(v);
        const double lv = std::log(v);
        out.integrand.push_back(lv == 0.0 ? std::numeric_limits<double>::quiet_NaN() : r / lv);
        out.saturated.push_back(r >= out.max_distance);
    }
    return out;
}

} // namespace rfl
