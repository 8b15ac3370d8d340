#pragma once

#include <string>
#include <vector>

#include "rfl/metric_state.hpp"

namespace rfl {

/// Max-norm and L²-norm of a field, both measured pointwise in the metric g.
struct FieldNorms {
    double max_norm = 0.0;
    double l2_norm = 0.0;
};

/// Nodes closer than `band` to a box boundary are skipped (band = 0 keeps all).
FieldNorms field_norms(const MetricState& g, const TensorField& f, int band = 0);

/// One identity residual at one grid spacing and time.
struct ResidualReport {
    std::string name;
    double max_norm = 0.0;
    double l2_norm = 0.0;
    double h = 0.0;
    double t = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    bool truncated = false;
    /// The identity's precondition failed; the value is informative only.
    bool skipped = false;

    const char* verdict() const noexcept { return skipped ? "skipped" : (pass ? "pass" : "fail"); }
};

ResidualReport make_report(std::string name, const MetricState& g, const TensorField& residual, double tolerance,
                           double t = 0.0, int band = 0);

/// Least-squares slope of log(err) against log(h).
double fit_order(const std::vector<double>& h, const std::vector<double>& err);

} // namespace rfl
