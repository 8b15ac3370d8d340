#include "rfl/operators.hpp"

#include <vector>

#include "rfl/errors.hpp"
#include "rfl/pointwise.hpp"

namespace rfl {

namespace {

void require_rank(const TensorField& t, const Signature& sig, const char* what) {
    if (t.signature() != sig) throw ShapeError(std::string(what) + ": unexpected tensor signature");
}

void require_grid(const MetricState& g, const TensorField& t, const char* what) {
    if (!g.grid().same_as(t.grid())) throw ShapeError(std::string(what) + ": field and metric grids differ");
}

const Signature kScalar{};
const Signature kVector{Variance::contravariant};
const Signature kForm{Variance::covariant};
const Signature kCov2{Variance::covariant, Variance::covariant};
const Signature kCov4(4, Variance::covariant);

} // namespace

const TensorField& christoffel(const MetricState& g) { return g.christoffel(); }
const TensorField& riemann(const MetricState& g) { return g.riemann(); }
const TensorField& ricci(const MetricState& g) { return g.ricci(); }
const TensorField& scalar_curv(const MetricState& g) { return g.scalar(); }

TensorField lower(const MetricState& g, const TensorField& vec) {
    require_grid(g, vec, "lower");
    require_rank(vec, kVector, "lower");
    const int n = g.dim();
    TensorField out = TensorField::form(vec.grid_ptr());
    for (std::size_t p = 0; p < vec.nodes(); ++p) {
        auto gp = g.g().node(p);
        auto v = vec.node(p);
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += gp[i * n + j] * v[j];
            out(p, i) = acc;
        }
    }
    return out;
}

TensorField raise(const MetricState& g, const TensorField& form) {
    require_grid(g, form, "raise");
    require_rank(form, kForm, "raise");
    const int n = g.dim();
    TensorField out = TensorField::vector(form.grid_ptr());
    for (std::size_t p = 0; p < form.nodes(); ++p) {
        auto gi = g.g_inv().node(p);
        auto v = form.node(p);
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += gi[i * n + j] * v[j];
            out(p, i) = acc;
        }
    }
    return out;
}

TensorField trace(const MetricState& g, const TensorField& phi) {
    require_grid(g, phi, "trace");
    require_rank(phi, kCov2, "trace");
    const std::size_t nn = static_cast<std::size_t>(g.dim()) * g.dim();
    TensorField out = TensorField::scalar(phi.grid_ptr());
    for (std::size_t p = 0; p < phi.nodes(); ++p) {
        auto gi = g.g_inv().node(p);
        auto f = phi.node(p);
        double acc = 0.0;
        for (std::size_t c = 0; c < nn; ++c) acc += gi[c] * f[c];
        out(p, 0) = acc;
    }
    return out;
}

TensorField inner(const MetricState& g, const TensorField& a, const TensorField& b) {
    a.require_compatible(b, "inner");
    require_grid(g, a, "inner");
    const int n = g.dim();
    const int r = a.rank();
    const std::size_t nc = a.components();
    TensorField out = TensorField::scalar(a.grid_ptr());
    std::vector<double> buf0(nc), buf1(nc);
    for (std::size_t p = 0; p < a.nodes(); ++p) {
        auto ap = a.node(p);
        std::copy(ap.begin(), ap.end(), buf0.begin());
        for (int s = 0; s < r; ++s) {
            const double* m = (a.signature()[s] == Variance::covariant) ? g.g_inv().node(p).data()
                                                                         : g.g().node(p).data();
            pointwise::transform_slot(n, r, s, m, buf0.data(), buf1.data());
            std::swap(buf0, buf1);
        }
        auto bp = b.node(p);
        double acc = 0.0;
        for (std::size_t c = 0; c < nc; ++c) acc += buf0[c] * bp[c];
        out(p, 0) = acc;
    }
    return out;
}

TensorField norm_sq(const MetricState& g, const TensorField& a) { return inner(g, a, a); }

TensorField contract_vector(const TensorField& t, const TensorField& vec) {
    require_rank(t, kCov2, "contract_vector");
    require_rank(vec, kVector, "contract_vector");
    const int n = t.dim();
    TensorField out = TensorField::form(t.grid_ptr());
    for (std::size_t p = 0; p < t.nodes(); ++p) {
        auto tp = t.node(p);
        auto v = vec.node(p);
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += tp[i * n + j] * v[i];
            out(p, j) = acc;
        }
    }
    return out;
}

TensorField quadratic(const TensorField& t, const TensorField& vec) {
    require_rank(t, kCov2, "quadratic");
    require_rank(vec, kVector, "quadratic");
    const int n = t.dim();
    TensorField out = TensorField::scalar(t.grid_ptr());
    for (std::size_t p = 0; p < t.nodes(); ++p) {
        auto tp = t.node(p);
        auto v = vec.node(p);
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) acc += tp[i * n + j] * v[i] * v[j];
        out(p, 0) = acc;
    }
    return out;
}

TensorField directional(const MetricState& g, const TensorField& vec, const TensorField& phi) {
    require_rank(vec, kVector, "directional");
    const TensorField d = differential(g, phi);
    const int n = g.dim();
    TensorField out = TensorField::scalar(phi.grid_ptr());
    for (std::size_t p = 0; p < phi.nodes(); ++p) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += vec(p, i) * d(p, i);
        out(p, 0) = acc;
    }
    return out;
}

TensorField differential(const MetricState& g, const TensorField& phi) {
    require_grid(g, phi, "differential");
    require_rank(phi, kScalar, "differential");
    return g.differ().gradient(phi);
}

TensorField gradient(const MetricState& g, const TensorField& phi) { return raise(g, differential(g, phi)); }

TensorField covariant_derivative(const MetricState& g, const TensorField& t) {
    require_grid(g, t, "covariant_derivative");
    TensorField out = g.differ().gradient(t);
    const int r = t.rank();
    if (r == 0) return out;
    const int n = g.dim();
    const std::size_t un = static_cast<std::size_t>(n);
    const std::size_t nc = t.components();
    const TensorField& gam = g.christoffel();
    std::vector<double> mcov(un * un), mcon(un * un), tmp(nc);
    for (std::size_t p = 0; p < t.nodes(); ++p) {
        auto gp = gam.node(p);
        auto tp = t.node(p);
        auto op = out.node(p);
        for (std::size_t a = 0; a < un; ++a) {
            for (std::size_t i = 0; i < un; ++i)
                for (std::size_t m = 0; m < un; ++m) {
                    mcov[i * un + m] = gp[(m * un + a) * un + i]; // Γ^m_{a i}
                    mcon[i * un + m] = gp[(i * un + a) * un + m]; // Γ^i_{a m}
                }
            double* dst = op.data() + a * nc;
            for (int s = 0; s < r; ++s) {
                const bool cov = t.signature()[s] == Variance::covariant;
                pointwise::transform_slot(n, r, s, cov ? mcov.data() : mcon.data(), tp.data(), tmp.data());
                if (cov)
                    for (std::size_t c = 0; c < nc; ++c) dst[c] -= tmp[c];
                else
                    for (std::size_t c = 0; c < nc; ++c) dst[c] += tmp[c];
            }
        }
    }
    return out;
}

TensorField divergence(const MetricState& g, const TensorField& vec) {
    require_grid(g, vec, "divergence");
    require_rank(vec, kVector, "divergence");
    const int n = g.dim();
    const std::size_t nodes = vec.nodes();
    std::vector<double> flux(nodes), dflux(nodes);
    TensorField out = TensorField::scalar(vec.grid_ptr());
    for (int i = 0; i < n; ++i) {
        for (std::size_t p = 0; p < nodes; ++p) flux[p] = g.vol_density()(p, 0) * vec(p, i);
        g.differ().partial(flux, 1, i, dflux);
        for (std::size_t p = 0; p < nodes; ++p) out(p, 0) += dflux[p];
    }
    for (std::size_t p = 0; p < nodes; ++p) out(p, 0) /= g.vol_density()(p, 0);
    return out;
}

TensorField hessian(const MetricState& g, const TensorField& f) {
    require_grid(g, f, "hessian");
    require_rank(f, kScalar, "hessian");
    const int n = g.dim();
    const TensorField df = g.differ().gradient(f);
    const TensorField ddf = g.differ().gradient(df); // [i][j] = ∂_i ∂_j f
    const TensorField& gam = g.christoffel();
    TensorField out = TensorField::sym2(f.grid_ptr());
    for (std::size_t p = 0; p < f.nodes(); ++p) {
        auto gp = gam.node(p);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double v = 0.5 * (ddf(p, i * n + j) + ddf(p, j * n + i));
                for (int k = 0; k < n; ++k) v -= gp[(k * n + i) * n + j] * df(p, k);
                out.set_sym(p, i, j, v);
            }
    }
    return out;
}

TensorField laplace_beltrami(const MetricState& g, const TensorField& phi, LaplacianForm form) {
    require_grid(g, phi, "laplace_beltrami");
    require_rank(phi, kScalar, "laplace_beltrami");
    if (form == LaplacianForm::expanded) return trace(g, hessian(g, phi));
    const int n = g.dim();
    const std::size_t nodes = phi.nodes();
    const TensorField df = g.differ().gradient(phi);
    std::vector<double> flux(nodes), dflux(nodes);
    TensorField out = TensorField::scalar(phi.grid_ptr());
    for (int i = 0; i < n; ++i) {
        for (std::size_t p = 0; p < nodes; ++p) {
            auto gi = g.g_inv().node(p);
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += gi[i * n + j] * df(p, j);
            flux[p] = g.vol_density()(p, 0) * acc;
        }
        g.differ().partial(flux, 1, i, dflux);
        for (std::size_t p = 0; p < nodes; ++p) out(p, 0) += dflux[p];
    }
    for (std::size_t p = 0; p < nodes; ++p) out(p, 0) /= g.vol_density()(p, 0);
    return out;
}

TensorField rough_laplacian(const MetricState& g, const TensorField& t) {
    if (t.rank() == 0) return laplace_beltrami(g, t);
    const TensorField dd = covariant_derivative(g, covariant_derivative(g, t)); // [b][a][I]
    const int n = g.dim();
    const std::size_t nc = t.components();
    TensorField out(t.grid_ptr(), t.signature(), t.symmetric());
    for (std::size_t p = 0; p < t.nodes(); ++p) {
        auto gi = g.g_inv().node(p);
        auto dp = dd.node(p);
        auto op = out.node(p);
        for (int b = 0; b < n; ++b)
            for (int a = 0; a < n; ++a) {
                const double w = gi[b * n + a];
                const double* src = dp.data() + (static_cast<std::size_t>(b) * n + a) * nc;
                for (std::size_t c = 0; c < nc; ++c) op[c] += w * src[c];
            }
        if (t.symmetric())
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    const double v = 0.5 * (op[i * n + j] + op[j * n + i]);
                    op[i * n + j] = v;
                    op[j * n + i] = v;
                }
    }
    return out;
}

TensorField connection_laplacian(const MetricState& g, const TensorField& t, LaplacianForm form) {
    TensorField out = (t.rank() == 0) ? laplace_beltrami(g, t, form) : rough_laplacian(g, t);
    out *= -1.0;
    return out;
}

TensorField lie_metric(const MetricState& g, const TensorField& vec) {
    require_rank(vec, kVector, "lie_metric");
    const TensorField dtheta = covariant_derivative(g, lower(g, vec)); // [i][j] = ∇_i ξ_j
    const int n = g.dim();
    TensorField out = TensorField::sym2(vec.grid_ptr());
    for (std::size_t p = 0; p < vec.nodes(); ++p)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) out.set_sym(p, i, j, dtheta(p, i * n + j) + dtheta(p, j * n + i));
    return out;
}

TensorField lie_ricci(const MetricState& g, const TensorField& vec) {
    require_rank(vec, kVector, "lie_ricci");
    const TensorField& ric = g.ricci();
    const TensorField dric = covariant_derivative(g, ric); // [m][i][j]
    const TensorField dxi = covariant_derivative(g, vec);  // [i][m] = ∇_i ξ^m
    const int n = g.dim();
    const std::size_t n2 = static_cast<std::size_t>(n) * n;
    TensorField out = TensorField::sym2(vec.grid_ptr());
    for (std::size_t p = 0; p < vec.nodes(); ++p) {
        auto r = ric.node(p);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double v = 0.0;
                for (int m = 0; m < n; ++m) {
                    v += vec(p, m) * dric(p, m * n2 + i * n + j);
                    v += dxi(p, i * n + m) * r[m * n + j];
                    v += dxi(p, j * n + m) * r[i * n + m];
                }
                out.set_sym(p, i, j, v);
            }
    }
    return out;
}

TensorField lie_riemann(const MetricState& g, const TensorField& vec) {
    require_rank(vec, kVector, "lie_riemann");
    const TensorField& rm = g.riemann();
    const TensorField drm = covariant_derivative(g, rm); // [m][i][j][k][l]
    const TensorField dxi = covariant_derivative(g, vec); // [a][m]
    const std::size_t n = static_cast<std::size_t>(g.dim());
    const std::size_t n4 = n * n * n * n;
    auto R = [n](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        return ((i * n + j) * n + k) * n + l;
    };
    TensorField out = TensorField::covariant(vec.grid_ptr(), 4);
    for (std::size_t p = 0; p < vec.nodes(); ++p) {
        auto r = rm.node(p);
        auto dr = drm.node(p);
        auto dx = dxi.node(p);
        auto op = out.node(p);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k)
                    for (std::size_t l = 0; l < n; ++l) {
                        double v = 0.0;
                        for (std::size_t m = 0; m < n; ++m) {
                            v += vec(p, m) * dr[m * n4 + R(i, j, k, l)];
                            v += dx[i * n + m] * r[R(m, j, k, l)];
                            v += dx[j * n + m] * r[R(i, m, k, l)];
                            v += dx[k * n + m] * r[R(i, j, m, l)];
                            v += dx[l * n + m] * r[R(i, j, k, m)];
                        }
                        op[R(i, j, k, l)] = v;
                    }
    }
    return out;
}

TensorField curvature_trace(const MetricState& g, const TensorField& t4) {
    require_rank(t4, kCov4, "curvature_trace");
    const std::size_t n = static_cast<std::size_t>(g.dim());
    TensorField out = TensorField::scalar(t4.grid_ptr());
    for (std::size_t p = 0; p < t4.nodes(); ++p) {
        auto gi = g.g_inv().node(p);
        auto tp = t4.node(p);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k)
                    for (std::size_t l = 0; l < n; ++l)
                        acc += gi[j * n + k] * gi[i * n + l] * tp[((i * n + j) * n + k) * n + l];
        out(p, 0) = acc;
    }
    return out;
}

TensorField weitzenboeck_r2(const MetricState& g, const TensorField& phi) {
    require_grid(g, phi, "weitzenboeck_r2");
    require_rank(phi, kCov2, "weitzenboeck_r2");
    if (!phi.symmetric()) throw ShapeError("weitzenboeck_r2: input must be a symmetric 2-tensor");
    const TensorField& rm = g.riemann();
    const TensorField& ric = g.ricci();
    const std::size_t n = static_cast<std::size_t>(g.dim());
    TensorField out = TensorField::sym2(phi.grid_ptr());
    std::vector<double> up(n * n), mixed(n * n);
    for (std::size_t p = 0; p < phi.nodes(); ++p) {
        auto gi = g.g_inv().node(p);
        auto f = phi.node(p);
        auto r = rm.node(p);
        auto rc = ric.node(p);
        // mixed[k][j] = φ^k_j = g^{ka} φ_{aj};  up[k][l] = φ^{kl}
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) {
                double acc = 0.0;
                for (std::size_t a = 0; a < n; ++a) acc += gi[k * n + a] * f[a * n + j];
                mixed[k * n + j] = acc;
            }
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = 0; l < n; ++l) {
                double acc = 0.0;
                for (std::size_t b = 0; b < n; ++b) acc += mixed[k * n + b] * gi[b * n + l];
                up[k * n + l] = acc;
            }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                double v = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    for (std::size_t l = 0; l < n; ++l) v -= 2.0 * up[k * n + l] * r[((k * n + i) * n + j) * n + l];
                    v += mixed[k * n + j] * rc[k * n + i] + mixed[k * n + i] * rc[k * n + j];
                }
                out.set_sym(p, static_cast<int>(i), static_cast<int>(j), v);
            }
    }
    return out;
}

TensorField sampson_laplacian(const MetricState& g, const TensorField& phi) {
    TensorField out = connection_laplacian(g, phi);
    out -= weitzenboeck_r2(g, phi);
    return out;
}

TensorField yano_laplacian(const MetricState& g, const TensorField& theta) {
    require_rank(theta, kForm, "yano_laplacian");
    TensorField out = connection_laplacian(g, theta);
    out -= contract_vector(g.ricci(), raise(g, theta));
    return out;
}

} // namespace rfl
