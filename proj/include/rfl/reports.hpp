#pragma once

#include <string>

#include "rfl/runner.hpp"

namespace rfl {

/// Fixed-width scientific format used by every report ("%.12e", C locale).
std::string format_number(double v);

std::string monitors_csv(const RunResult& r);
std::string residuals_csv(const RunResult& r);
std::string certificate_json(const Certificate& c);
/// Machine-readable verdicts. Contains no timestamps, so identical runs give identical bytes.
std::string summary_json(const RunResult& r, const RunOptions& opt);
std::string ladder_csv(const LadderResult& r);
std::string ladder_json(const LadderResult& r, const RunOptions& opt);

/// Writes monitors.csv, residuals.csv, summary.json and (with a certificate) certificate.json
/// under <out>/<scenario>/. Returns that directory.
std::string write_run_reports(const RunResult& r, const RunOptions& opt, const std::string& out);
/// Writes ladder.csv and ladder.json under <out>/<scenario>/.
std::string write_ladder_reports(const LadderResult& r, const RunOptions& opt, const std::string& out);

} // namespace rfl
