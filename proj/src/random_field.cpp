#include "rfl/random_field.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "rfl/errors.hpp"

namespace rfl {

std::uint64_t SplitMix64::mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t SplitMix64::at(std::uint64_t counter) const noexcept {
    return mix(seed_ + (counter + 1) * 0x9E3779B97F4A7C15ULL);
}

double SplitMix64::uniform_at(std::uint64_t counter) const noexcept {
    return static_cast<double>(at(counter) >> 11) * 0x1.0p-53;
}

TensorField random_scalar(std::shared_ptr<const ChartGrid> grid, std::uint64_t seed, int max_mode, double amplitude) {
    if (max_mode < 1) throw ConfigError("random field: max_mode must be >= 1");
    const int n = grid->dim();
    // wavevectors k ∈ {−M..M}^n, k ≠ 0
    std::vector<std::vector<int>> ks;
    std::vector<int> k(n, -max_mode);
    for (;;) {
        bool zero = true;
        for (int v : k) zero = zero && v == 0;
        if (!zero) ks.push_back(k);
        int a = n - 1;
        while (a >= 0 && k[a] == max_mode) k[a--] = -max_mode;
        if (a < 0) break;
        ++k[a];
    }
    SplitMix64 rng(seed);
    const double scale = amplitude / static_cast<double>(2 * ks.size());
    std::vector<double> ca(ks.size()), sa(ks.size());
    for (std::size_t m = 0; m < ks.size(); ++m) {
        ca[m] = scale * (2.0 * rng.uniform() - 1.0);
        sa[m] = scale * (2.0 * rng.uniform() - 1.0);
    }
    std::vector<double> omega(n);
    for (int a = 0; a < n; ++a) {
        const double len = grid->periodic()[a] ? grid->shape()[a] * grid->spacing()[a]
                                             : (grid->shape()[a] - 1) * grid->spacing()[a];
        omega[a] = 2.0 * std::numbers::pi / len;
    }
    TensorField f = TensorField::scalar(grid);
    for (std::size_t p = 0; p < f.nodes(); ++p) {
        const auto x = grid->coords(p);
        double v = 0.0;
        for (std::size_t m = 0; m < ks.size(); ++m) {
            double phase = 0.0;
            for (int a = 0; a < n; ++a) phase += ks[m][a] * omega[a] * (x[a] - grid->lower()[a]);
            v += ca[m] * std::cos(phase) + sa[m] * std::sin(phase);
        }
        f(p, 0) = v;
    }
    return f;
}

TensorField random_vector(std::shared_ptr<const ChartGrid> grid, std::uint64_t seed, int max_mode, double amplitude) {
    TensorField v = TensorField::vector(grid);
    for (int i = 0; i < grid->dim(); ++i) {
        const TensorField c = random_scalar(grid, SplitMix64::mix(seed + static_cast<std::uint64_t>(i) + 1), max_mode,
                                            amplitude);
        for (std::size_t p = 0; p < v.nodes(); ++p) v(p, i) = c(p, 0);
    }
    return v;
}

} // namespace rfl
