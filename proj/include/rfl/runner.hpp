#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rfl/flow.hpp"
#include "rfl/residual.hpp"
#include "rfl/scenario.hpp"
#include "rfl/soliton.hpp"

namespace rfl {

/// What a check can run against.
enum CheckTarget : unsigned {
    target_grid_flow = 1u,
    target_sphere_flow = 2u,
    target_grid_soliton = 4u,
    target_sphere_soliton = 8u,
};

struct CheckInfo {
    const char* name;
    unsigned targets;
    double default_tolerance;
    /// Compares a label against `expect` instead of a value against a tolerance.
    bool labelled;
    const char* default_expect;
    const char* description;
};

const std::vector<CheckInfo>& check_registry();
/// nullptr for unknown names.
const CheckInfo* find_check(const std::string& name);

/// Target bits the scenario provides.
unsigned scenario_targets(const Scenario& sc);

struct RunOptions {
    /// Global multiplier on every tolerance.
    double tolerance_scale = 1.0;
};

struct CheckResult {
    std::string name;
    /// Measured value (residual, violation count, ...); NaN for labelled checks.
    double value = 0.0;
    double tolerance = 0.0;
    std::string label;
    std::string expect;
    /// "pass", "fail" or "skipped".
    std::string verdict;
    std::string detail;

    bool pass() const noexcept { return verdict == "pass"; }
};

/// One row of residuals.csv.
struct ResidualRow {
    std::string check;
    double t = 0.0;
    double h = 0.0;
    double max_norm = 0.0;
    double l2_norm = 0.0;
    double tolerance = 0.0;
    std::string verdict;
};

struct RunResult {
    std::string scenario;
    std::string target;
    double h = 0.0;
    std::vector<int> nodes;
    std::vector<MonitorRow> monitors;
    std::vector<ResidualRow> residuals;
    std::optional<Certificate> certificate;
    std::vector<CheckResult> checks;

    bool pass() const noexcept;
    /// 0 when every check passes, 1 otherwise. Skipped checks count as failures.
    int exit_code() const noexcept { return pass() ? 0 : 1; }
};

/// Runs the scenario's flow and/or soliton part and evaluates every listed check.
/// Throws rfl::Error subclasses on runtime failures (exit code 2 at the CLI).
RunResult run_scenario(const Scenario& sc, const RunOptions& opt = {});

struct LadderEntry {
    std::string name;
    std::vector<double> values;
    double slope = 0.0;
    double min_order = 0.0;
    /// Value on the finest grid against the check tolerance.
    double finest = 0.0;
    double tolerance = 0.0;
    bool finest_pass = false;
    /// "pass", "fail" or "skipped"; "floor" tag when every value sits at the roundoff floor.
    std::string verdict;
    std::string tag;

    bool pass() const noexcept { return verdict != "fail"; }
};

struct LadderResult {
    std::string scenario;
    std::vector<int> grids;
    std::vector<double> h;
    std::vector<LadderEntry> entries;

    bool pass() const noexcept;
    int exit_code() const noexcept { return pass() ? 0 : 1; }
};

/// Least-squares order of every valued check across the grids (≥ 3, fixed refinement ratio).
/// Labelled checks are not fitted. Throws ConfigError on bad ladders.
LadderResult convergence_ladder(const Scenario& sc, const std::vector<int>& grids, const RunOptions& opt = {});

} // namespace rfl
