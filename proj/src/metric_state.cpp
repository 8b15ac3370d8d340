#include "rfl/metric_state.hpp"

#include "rfl/errors.hpp"
#include "rfl/pointwise.hpp"

namespace rfl {

MetricState::MetricState(TensorField g, int fd_order)
    : g_(std::move(g)),
      g_inv_(TensorField::sym2(g_.grid_ptr(), Variance::contravariant)),
      vol_(TensorField::scalar(g_.grid_ptr())),
      differ_(std::make_shared<Differ>(g_.grid_ptr(), fd_order)),
      cache_(std::make_shared<Cache>()) {
    if (g_.rank() != 2 || g_.signature()[0] != Variance::covariant || g_.signature()[1] != Variance::covariant)
        throw ShapeError("metric must be a covariant rank-2 field");
    const int n = dim();
    double l[16];
    double inv[16];
    for (std::size_t p = 0; p < g_.nodes(); ++p) {
        auto gp = g_.node(p);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (gp[i * n + j] != gp[j * n + i]) throw ShapeError("metric is not stored symmetric");
        if (!pointwise::cholesky(n, gp.data(), l)) throw DegenerateMetricError(p, "Cholesky pivot <= 0");
        double det_sqrt = 1.0;
        for (int i = 0; i < n; ++i) det_sqrt *= l[i * n + i];
        pointwise::spd_inverse(n, l, inv);
        auto ip = g_inv_.node(p);
        for (int i = 0; i < n * n; ++i) ip[i] = inv[i];
        vol_(p, 0) = det_sqrt;
    }
}

const TensorField& MetricState::christoffel() const {
    std::call_once(cache_->gamma_once, [this] {
        const int n = dim();
        const TensorField dg = differ_->gradient(g_); // [a][i][j] = ∂_a g_ij
        TensorField gamma(grid_ptr(), {Variance::contravariant, Variance::covariant, Variance::covariant});
        const std::size_t n2 = static_cast<std::size_t>(n) * n;
        std::vector<double> first(n2 * n);
        for (std::size_t p = 0; p < g_.nodes(); ++p) {
            auto d = dg.node(p);
            auto gi = g_inv_.node(p);
            auto out = gamma.node(p);
            // Γ_{l,ij} = ½(∂_i g_jl + ∂_j g_il − ∂_l g_ij)
            for (int l = 0; l < n; ++l)
                for (int i = 0; i < n; ++i)
                    for (int j = i; j < n; ++j) {
                        const double v = 0.5 * (d[(i * n + j) * n + l] + d[(j * n + i) * n + l] - d[(l * n + i) * n + j]);
                        first[(l * n + i) * n + j] = v;
                        first[(l * n + j) * n + i] = v;
                    }
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i)
                    for (int j = i; j < n; ++j) {
                        double acc = 0.0;
                        for (int l = 0; l < n; ++l) acc += gi[k * n + l] * first[(l * n + i) * n + j];
                        out[(k * n + i) * n + j] = acc;
                        out[(k * n + j) * n + i] = acc;
                    }
        }
        cache_->gamma.emplace(std::move(gamma));
    });
    return *cache_->gamma;
}

const TensorField& MetricState::riemann_mixed() const {
    std::call_once(cache_->rmix_once, [this] {
        const int n = dim();
        const TensorField& gam = christoffel();
        const TensorField dgam = differ_->gradient(gam); // [a][l][j][k] = ∂_a Γ^l_jk
        TensorField r(grid_ptr(), {Variance::contravariant, Variance::covariant, Variance::covariant,
                                   Variance::covariant});
        const std::size_t un = static_cast<std::size_t>(n);
        auto G = [un](std::size_t k, std::size_t i, std::size_t j) { return (k * un + i) * un + j; };
        auto D = [un](std::size_t a, std::size_t l, std::size_t j, std::size_t k) {
            return ((a * un + l) * un + j) * un + k;
        };
        for (std::size_t p = 0; p < g_.nodes(); ++p) {
            auto gp = gam.node(p);
            auto dp = dgam.node(p);
            auto out = r.node(p);
            for (std::size_t l = 0; l < un; ++l)
                for (std::size_t i = 0; i < un; ++i)
                    for (std::size_t j = 0; j < un; ++j)
                        for (std::size_t k = 0; k < un; ++k) {
                            if (i == j) {
                                out[D(l, i, j, k)] = 0.0;
                                continue;
                            }
                            double v = dp[D(i, l, j, k)] - dp[D(j, l, i, k)];
                            for (std::size_t m = 0; m < un; ++m)
                                v += gp[G(m, j, k)] * gp[G(l, i, m)] - gp[G(m, i, k)] * gp[G(l, j, m)];
                            out[D(l, i, j, k)] = v;
                        }
        }
        cache_->rmix.emplace(std::move(r));
    });
    return *cache_->rmix;
}

const TensorField& MetricState::riemann() const {
    std::call_once(cache_->rm_once, [this] {
        const int n = dim();
        const TensorField& rmix = riemann_mixed();
        TensorField r = TensorField::covariant(grid_ptr(), 4);
        const std::size_t un = static_cast<std::size_t>(n);
        const std::size_t n3 = un * un * un;
        for (std::size_t p = 0; p < g_.nodes(); ++p) {
            auto gp = g_.node(p);
            auto mp = rmix.node(p);
            auto out = r.node(p);
            for (std::size_t ijk = 0; ijk < n3; ++ijk)
                for (std::size_t l = 0; l < un; ++l) {
                    double acc = 0.0;
                    for (std::size_t m = 0; m < un; ++m) acc += gp[l * un + m] * mp[m * n3 + ijk];
                    out[ijk * un + l] = acc;
                }
        }
        cache_->rm.emplace(std::move(r));
    });
    return *cache_->rm;
}

const TensorField& MetricState::ricci() const {
    std::call_once(cache_->ric_once, [this] {
        const int n = dim();
        const TensorField& rmix = riemann_mixed();
        TensorField ric = TensorField::sym2(grid_ptr());
        const std::size_t un = static_cast<std::size_t>(n);
        for (std::size_t p = 0; p < g_.nodes(); ++p) {
            auto mp = rmix.node(p);
            for (std::size_t j = 0; j < un; ++j)
                for (std::size_t k = j; k < un; ++k) {
                    double acc = 0.0;
                    for (std::size_t i = 0; i < un; ++i) acc += mp[((i * un + i) * un + j) * un + k];
                    ric.set_sym(p, static_cast<int>(j), static_cast<int>(k), acc);
                }
        }
        cache_->ric.emplace(std::move(ric));
    });
    return *cache_->ric;
}

const TensorField& MetricState::scalar() const {
    std::call_once(cache_->s_once, [this] {
        const TensorField& ric = ricci();
        TensorField s = TensorField::scalar(grid_ptr());
        const std::size_t nn = static_cast<std::size_t>(dim()) * dim();
        for (std::size_t p = 0; p < g_.nodes(); ++p) {
            auto gi = g_inv_.node(p);
            auto rp = ric.node(p);
            double acc = 0.0;
            for (std::size_t c = 0; c < nn; ++c) acc += gi[c] * rp[c];
            s(p, 0) = acc;
        }
        cache_->s.emplace(std::move(s));
    });
    return *cache_->s;
}

} // namespace rfl
