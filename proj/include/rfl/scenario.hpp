#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rfl/errors.hpp"
#include "rfl/families.hpp"
#include "rfl/flow.hpp"
#include "rfl/grid.hpp"

namespace rfl {

inline constexpr const char* kScenarioSchema = "v1";

/// Line and column (both 1-based) of a value in a scenario file.
struct SourcePos {
    int line = 1;
    int col = 1;
};

/// Scenario parse or validation failure; the message is prefixed with file:line:col.
class ScenarioError : public ConfigError {
public:
    ScenarioError(const std::string& file, SourcePos pos, const std::string& what)
        : ConfigError(file + ":" + std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + what),
          pos_(pos) {}
    SourcePos pos() const noexcept { return pos_; }

private:
    SourcePos pos_;
};

/// Start positions of every value in a JSON text, keyed by JSON pointer ("" is the root).
class JsonLocator {
public:
    JsonLocator() = default;
    /// The text must already be valid JSON.
    explicit JsonLocator(const std::string& text);
    SourcePos at(const std::string& pointer) const;
    /// Line and column of a byte offset.
    static SourcePos of_offset(const std::string& text, std::size_t offset);

private:
    std::map<std::string, SourcePos> pos_;
};

enum class GridKind { torus, box, sphere_patch, reduction };

const char* to_string(GridKind k) noexcept;

/// torus: periodic on [lower, upper) (default [0, 2π)). box: [lower, upper], default
/// [−truncation, truncation]. sphere_patch: ψ ∈ [margin, π − margin] with nodes+1 points
/// and θ periodic with 2·nodes points. reduction: no lattice (round sphere ODE).
struct GridSpec {
    GridKind kind = GridKind::torus;
    std::vector<int> nodes;
    std::vector<double> lower, upper;
    double margin = 0.5;
    int fd_order = 4;

    /// Same spec with every axis at `n` nodes.
    GridSpec resized(int n) const;
    std::shared_ptr<const ChartGrid> build(const FamilySpec& family) const;
};

struct FlowSection {
    Scheme scheme = Scheme::rk4;
    /// Fixed step, or dt = dt_h2 · h_min² when dt_h2 > 0 (refines with the grid).
    double dt = 0.0;
    double dt_h2 = 0.0;
    double t_end = 0.0;
    int store_stride = 1;
    double cfl = 0.5;
};

enum class FieldSource { family, potential, field, random_field, random_potential };

const char* to_string(FieldSource s) noexcept;

struct SolitonSection {
    FieldSource source = FieldSource::family;
    std::optional<double> lambda;
    std::string potential;
    std::vector<std::string> field;
    int max_mode = 2;
    double amplitude = 1.0;
    double tolerance = 1e-10;
    double flag_tolerance = 1e-8;
    int band = -1;
};

struct CheckSpec {
    std::string name;
    std::optional<double> tolerance;
    /// Expected label for classification / flag / sign checks.
    std::optional<std::string> expect;
    std::optional<double> min_order;
    std::optional<double> floor;
    SourcePos pos;
};

struct LadderSection {
    std::vector<int> grids;
    double min_order = 1.8;
    /// Residuals at or below this on every grid are reported as "floor" (order not measurable).
    double floor = 1e-11;
};

struct Scenario {
    std::string schema = kScenarioSchema;
    std::string name;
    std::uint64_t seed = 0;
    FamilySpec family;
    GridSpec grid;
    std::optional<FlowSection> flow;
    std::optional<SolitonSection> soliton;
    std::vector<CheckSpec> checks;
    LadderSection ladder;
    std::string source;
};

/// Parses and validates a scenario; every error carries file:line:col.
Scenario parse_scenario(const std::string& text, const std::string& file = "<scenario>");
Scenario load_scenario(const std::string& path);

} // namespace rfl
