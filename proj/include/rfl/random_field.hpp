#pragma once

#include <cstdint>
#include <memory>

#include "rfl/grid.hpp"
#include "rfl/tensor_field.hpp"

namespace rfl {

/// SplitMix64 (Steele, Lea, Flood 2014). The stream is counter based:
/// draw k of seed s is mix(s + (k + 1) · 0x9E3779B97F4A7C15), so any draw can be
/// reproduced without replaying the ones before it.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : seed_(seed) {}

    static std::uint64_t mix(std::uint64_t z) noexcept;
    /// Draw number `counter` of the stream.
    std::uint64_t at(std::uint64_t counter) const noexcept;
    /// Uniform double in [0, 1) from the top 53 bits of at(counter).
    double uniform_at(std::uint64_t counter) const noexcept;

    std::uint64_t next() noexcept { return at(counter_++); }
    double uniform() noexcept { return uniform_at(counter_++); }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

/// Smooth random scalar field: a sum of Fourier modes cos/sin(2π k·(x − lower)/L) over
/// integer wavevectors with 1 ≤ max|k_i| ≤ max_mode, coefficients uniform in [−1, 1],
/// scaled so the coefficient sum is bounded by `amplitude`. Periodic axes wrap exactly.
/// Coefficients are drawn in lexicographic k order (cos then sin), so fields are
/// platform independent.
TensorField random_scalar(std::shared_ptr<const ChartGrid> grid, std::uint64_t seed, int max_mode = 2,
                          double amplitude = 1.0);

/// Vector field whose component i is random_scalar with seed mix(seed + i + 1).
TensorField random_vector(std::shared_ptr<const ChartGrid> grid, std::uint64_t seed, int max_mode = 2,
                          double amplitude = 1.0);

} // namespace rfl
