#include "rfl/residual.hpp"

#include <algorithm>
#include <cmath>

#include "rfl/errors.hpp"
#include "rfl/operators.hpp"

namespace rfl {

FieldNorms field_norms(const MetricState& g, const TensorField& f, int band) {
    const ChartGrid& grid = g.grid();
    const TensorField sq = norm_sq(g, f);
    const bool closed = grid.closed();
    FieldNorms out;
    double acc = 0.0;
    for (std::size_t p = 0; p < sq.nodes(); ++p) {
        if (band > 0 && grid.boundary_distance(p) < band) continue;
        const double v = std::max(sq(p, 0), 0.0);
        out.max_norm = std::max(out.max_norm, std::sqrt(v));
        acc += v * g.vol_density()(p, 0) * (closed ? grid.cell_volume() : grid.weight(p));
    }
    out.l2_norm = std::sqrt(acc);
    return out;
}

ResidualReport make_report(std::string name, const MetricState& g, const TensorField& residual, double tolerance,
                           double t, int band) {
    ResidualReport r;
    r.name = std::move(name);
    const FieldNorms n = field_norms(g, residual, band);
    r.max_norm = n.max_norm;
    r.l2_norm = n.l2_norm;
    r.h = g.grid().max_spacing();
    r.t = t;
    r.tolerance = tolerance;
    r.pass = std::isfinite(r.max_norm) && r.max_norm <= tolerance;
    r.truncated = !g.grid().closed();
    return r;
}

double fit_order(const std::vector<double>& h, const std::vector<double>& err) {
    if (h.size() != err.size() || h.size() < 2) throw ConfigError("fit_order: need at least two (h, err) pairs");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double x = std::log(h[i]), y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

} // namespace rfl
