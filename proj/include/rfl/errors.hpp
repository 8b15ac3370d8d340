#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rfl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Grid/rank/shape mismatch between operands.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration (scenario, family parameters, ladder setup).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Metric failed the pointwise Cholesky test.
class DegenerateMetricError : public Error {
public:
    DegenerateMetricError(std::size_t node, const std::string& where)
        : Error("degenerate metric at node " + std::to_string(node) + " (" + where + ")"),
          node_(node) {}
    std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

/// Positive-definiteness lost during a flow step.
class CurvatureBlowUpError : public Error {
public:
    CurvatureBlowUpError(double t, std::size_t node)
        : Error("metric lost positive-definiteness at t=" + std::to_string(t) +
                ", node " + std::to_string(node)),
          t_(t), node_(node) {}
    double time() const noexcept { return t_; }
    std::size_t node() const noexcept { return node_; }

private:
    double t_;
    std::size_t node_;
};

/// Requested time lies at or beyond the extinction time of a shrinking sphere.
class ExtinctionError : public Error {
public:
    explicit ExtinctionError(double t_extinct)
        : Error("time at or beyond extinction time " + std::to_string(t_extinct)),
          t_extinct_(t_extinct) {}
    double extinction_time() const noexcept { return t_extinct_; }

private:
    double t_extinct_;
};

/// Time-derivative residual requested without enough stored slices.
class NeedsHistoryError : public Error {
public:
    using Error::Error;
};

/// Operation does not apply to the given input (e.g. potential identity on a non-gradient spec).
class InapplicableError : public Error {
public:
    using Error::Error;
};

} // namespace rfl
