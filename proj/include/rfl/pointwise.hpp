#pragma once

#include <cmath>
#include <cstddef>

namespace rfl::pointwise {

/// In-place Cholesky of a row-major n×n SPD matrix into its lower factor.
/// Returns false when a pivot is not strictly positive.
inline bool cholesky(int n, const double* a, double* l) noexcept {
    for (int i = 0; i < n * n; ++i) l[i] = 0.0;
    for (int j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (int k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
        if (!(d > 0.0) || !std::isfinite(d)) return false;
        const double ljj = std::sqrt(d);
        l[j * n + j] = ljj;
        for (int i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (int k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
            l[i * n + j] = s / ljj;
        }
    }
    return true;
}

/// Inverse of an SPD matrix from its Cholesky factor; result is exactly symmetric.
inline void spd_inverse(int n, const double* l, double* inv) noexcept {
    double linv[16] = {};
    for (int i = 0; i < n; ++i) {
        linv[i * n + i] = 1.0 / l[i * n + i];
        for (int j = 0; j < i; ++j) {
            double s = 0.0;
            for (int k = j; k < i; ++k) s -= l[i * n + k] * linv[k * n + j];
            linv[i * n + j] = s / l[i * n + i];
        }
    }
    // inv = L^{-T} L^{-1}
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int k = j; k < n; ++k) s += linv[k * n + i] * linv[k * n + j];
            inv[i * n + j] = s;
            inv[j * n + i] = s;
        }
}

/// out_{..i..} = Σ_m M[i][m] in_{..m..} acting on one slot of a rank-r, dimension-n block.
inline void transform_slot(int n, int rank, int slot, const double* m, const double* in, double* out) noexcept {
    std::size_t inner = 1;
    for (int s = slot + 1; s < rank; ++s) inner *= static_cast<std::size_t>(n);
    std::size_t outer = 1;
    for (int s = 0; s < slot; ++s) outer *= static_cast<std::size_t>(n);
    const std::size_t un = static_cast<std::size_t>(n);
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t i = 0; i < un; ++i)
            for (std::size_t r = 0; r < inner; ++r) {
                double acc = 0.0;
                for (std::size_t k = 0; k < un; ++k) acc += m[i * un + k] * in[(o * un + k) * inner + r];
                out[(o * un + i) * inner + r] = acc;
            }
}

} // namespace rfl::pointwise
