#include "rfl/stencil.hpp"

#include <algorithm>

#include "rfl/errors.hpp"

namespace rfl {

std::vector<double> fornberg_weights(double x0, std::span<const double> xs, int deriv) {
    const int n = static_cast<int>(xs.size());
    const int m = deriv;
    // c[j][k]: weight of sample j for derivative k
    std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0;
    double c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = xs[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int j = 0; j < n; ++j) w[j] = c[j][m];
    return w;
}

std::vector<double> central_first_weights(int order) {
    switch (order) {
    case 2: return {0.5};
    case 4: return {2.0 / 3.0, -1.0 / 12.0};
    case 6: return {3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0};
    default: throw ConfigError("finite-difference order must be 2, 4 or 6");
    }
}

Differ::Differ(std::shared_ptr<const ChartGrid> grid, int order) : grid_(std::move(grid)), order_(order) {
    central_first_weights(order); // validates
    const int n = grid_->dim();
    axes_.resize(n);
    for (int a = 0; a < n; ++a) {
        Axis& ax = axes_[a];
        const int len = grid_->shape()[a];
        // fall back to second order when the axis is too short for the full window
        ax.order = (len >= order + 1) ? order : 2;
        const double h = grid_->spacing()[a];
        ax.pair = central_first_weights(ax.order);
        for (double& w : ax.pair) w /= h;
        if (grid_->periodic()[a]) continue;
        const int hw = ax.order / 2;
        const int width = ax.order + 1;
        for (int i = 0; i < hw; ++i) {
            Boundary lo, hi;
            std::vector<double> xs(width);
            for (int j = 0; j < width; ++j) {
                lo.offsets.push_back(j - i);
                xs[j] = static_cast<double>(j - i);
            }
            lo.weights = fornberg_weights(0.0, xs, 1);
            for (double& w : lo.weights) w /= h;
            hi.offsets.resize(width);
            hi.weights.resize(width);
            for (int j = 0; j < width; ++j) {
                hi.offsets[j] = -lo.offsets[j];
                hi.weights[j] = -lo.weights[j];
            }
            ax.lo.push_back(std::move(lo));
            ax.hi.push_back(std::move(hi));
        }
    }
}

void Differ::partial(std::span<const double> in, std::size_t ncomp, int axis, std::span<double> out) const {
    const ChartGrid& g = *grid_;
    const Axis& ax = axes_[axis];
    const std::size_t stride = g.stride(axis);
    const int len = g.shape()[axis];
    const bool periodic = g.periodic()[axis];
    const int hw = ax.order / 2;
    const std::size_t nodes = g.node_count();
    if (in.size() != nodes * ncomp || out.size() != nodes * ncomp)
        throw ShapeError("partial: data size does not match grid");

    for (std::size_t p = 0; p < nodes; ++p) {
        const int i = static_cast<int>((p / stride) % len);
        const std::size_t base = p - static_cast<std::size_t>(i) * stride;
        double* o = out.data() + p * ncomp;
        std::fill(o, o + ncomp, 0.0);
        const bool interior = periodic || (i >= hw && i < len - hw);
        if (interior) {
            for (int k = 1; k <= hw; ++k) {
                int ip = i + k, im = i - k;
                if (ip >= len) ip -= len;
                if (im < 0) im += len;
                const double* fp = in.data() + (base + static_cast<std::size_t>(ip) * stride) * ncomp;
                const double* fm = in.data() + (base + static_cast<std::size_t>(im) * stride) * ncomp;
                const double w = ax.pair[k - 1];
                for (std::size_t c = 0; c < ncomp; ++c) o[c] += w * (fp[c] - fm[c]);
            }
        } else {
            // weights sum to zero, so differencing against the center keeps constants exact
            const Boundary& b = (i < hw) ? ax.lo[i] : ax.hi[len - 1 - i];
            const double* f0 = in.data() + p * ncomp;
            for (std::size_t j = 0; j < b.offsets.size(); ++j) {
                if (b.offsets[j] == 0) continue;
                const int q = i + b.offsets[j];
                const double* f = in.data() + (base + static_cast<std::size_t>(q) * stride) * ncomp;
                const double w = b.weights[j];
                for (std::size_t c = 0; c < ncomp; ++c) o[c] += w * (f[c] - f0[c]);
            }
        }
    }
}

TensorField Differ::partial(const TensorField& f, int axis) const {
    if (!f.grid().same_as(*grid_)) throw ShapeError("partial: field lives on a different grid");
    TensorField out(f.grid_ptr(), f.signature(), false);
    partial(f.data(), f.components(), axis, out.data());
    return out;
}

TensorField Differ::gradient(const TensorField& f) const {
    if (!f.grid().same_as(*grid_)) throw ShapeError("gradient: field lives on a different grid");
    Signature sig;
    sig.push_back(Variance::covariant);
    sig.insert(sig.end(), f.signature().begin(), f.signature().end());
    TensorField out(f.grid_ptr(), sig);
    const std::size_t nc = f.components();
    const std::size_t nodes = f.nodes();
    std::vector<double> tmp(nodes * nc);
    for (int a = 0; a < f.dim(); ++a) {
        partial(f.data(), nc, a, tmp);
        for (std::size_t p = 0; p < nodes; ++p)
            for (std::size_t c = 0; c < nc; ++c) out(p, a * nc + c) = tmp[p * nc + c];
    }
    return out;
}

} // namespace rfl
