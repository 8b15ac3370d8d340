#include "rfl/families.hpp"

#include <cmath>
#include <numbers>

#include "rfl/errors.hpp"
#include "rfl/pointwise.hpp"

namespace rfl {

const char* to_string(FamilyKind k) noexcept {
    switch (k) {
        case FamilyKind::flat_torus: return "flat_torus";
        case FamilyKind::conformal_torus: return "conformal_torus";
        case FamilyKind::round_sphere: return "round_sphere";
        case FamilyKind::cigar: return "cigar";
        case FamilyKind::gaussian_shrinker: return "gaussian_shrinker";
        case FamilyKind::product: return "product";
    }
    return "?";
}

FamilyKind family_kind_from_string(const std::string& s) {
    for (FamilyKind k : {FamilyKind::flat_torus, FamilyKind::conformal_torus, FamilyKind::round_sphere,
                         FamilyKind::cigar, FamilyKind::gaussian_shrinker, FamilyKind::product})
        if (s == to_string(k)) return k;
    throw ConfigError("unknown family kind '" + s + "'");
}

int FamilySpec::dim() const {
    switch (kind) {
        case FamilyKind::cigar:
        case FamilyKind::round_sphere: return kind == FamilyKind::cigar ? 2 : n;
        case FamilyKind::product: {
            int d = 0;
            for (const auto& f : factors) d += f.dim();
            return d;
        }
        default: return n;
    }
}

void FamilySpec::validate() const {
    const std::string k = to_string(kind);
    if (kind != FamilyKind::product && kind != FamilyKind::cigar && (n < 1 || n > kMaxDim))
        throw ConfigError(k + ": n must lie in 1.." + std::to_string(kMaxDim));
    switch (kind) {
        case FamilyKind::flat_torus: break;
        case FamilyKind::conformal_torus:
            if (u_expr.empty()) throw ConfigError("conformal_torus: missing u expression");
            if (TrigExpression::parse(u_expr).arity() > n)
                throw ConfigError("conformal_torus: u references a coordinate beyond n = " + std::to_string(n));
            break;
        case FamilyKind::round_sphere:
            if (!(radius > 0.0)) throw ConfigError("round_sphere: radius must be > 0");
            if (n < 2) throw ConfigError("round_sphere: n must be >= 2");
            break;
        case FamilyKind::gaussian_shrinker:
            if (!(lambda < 0.0)) throw ConfigError("gaussian_shrinker: lambda must be < 0 (shrinking)");
            [[fallthrough]];
        case FamilyKind::cigar:
            if (!(truncation > 0.0)) throw ConfigError(k + ": truncation half-width must be > 0");
            break;
        case FamilyKind::product:
            if (factors.size() < 2) throw ConfigError("product: needs at least two factors");
            for (const auto& f : factors) {
                if (f.kind == FamilyKind::product || f.kind == FamilyKind::cigar ||
                    f.kind == FamilyKind::gaussian_shrinker || f.kind == FamilyKind::round_sphere)
                    throw ConfigError(std::string("product: unsupported factor kind ") + to_string(f.kind));
                f.validate();
            }
            if (dim() > kMaxDim) throw ConfigError("product: total dimension exceeds " + std::to_string(kMaxDim));
            break;
    }
}

// -- ExactCurvature defaults ------------------------------------------------

void ExactCurvature::metric_inverse(const double* x, double* gi) const {
    const int n = dim();
    double g[kMaxDim * kMaxDim], l[kMaxDim * kMaxDim];
    metric(x, g);
    if (!pointwise::cholesky(n, g, l)) throw DegenerateMetricError(0, "closed-form metric");
    pointwise::spd_inverse(n, l, gi);
}

void ExactCurvature::ricci(const double* x, double* ric) const {
    const int n = dim();
    double gi[kMaxDim * kMaxDim];
    std::vector<double> rm(ipow(n, 4));
    metric_inverse(x, gi);
    riemann(x, rm.data());
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i)
                for (int l = 0; l < n; ++l) acc += gi[i * n + l] * rm[((i * n + j) * n + k) * n + l];
            ric[j * n + k] = acc;
        }
}

double ExactCurvature::scalar(const double* x) const {
    const int n = dim();
    double gi[kMaxDim * kMaxDim], ric[kMaxDim * kMaxDim];
    metric_inverse(x, gi);
    ricci(x, ric);
    double s = 0.0;
    for (int i = 0; i < n * n; ++i) s += gi[i] * ric[i];
    return s;
}

void ExactCurvature::soliton_field(const double*, double* xi) const {
    for (int i = 0; i < dim(); ++i) xi[i] = 0.0;
}

double ExactCurvature::potential(const double*) const {
    throw InapplicableError("family has no potential function");
}

void ExactCurvature::potential_hessian(const double*, double*) const {
    throw InapplicableError("family has no potential function");
}

namespace {

// (A ⊙ δ)_{ijkl} = A_ik δ_jl + A_jl δ_ik − A_il δ_jk − A_jk δ_il
void kulkarni_nomizu_delta(int n, const double* a, double scale, double* rm) {
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double v = 0.0;
                    if (j == l) v += a[i * n + k];
                    if (i == k) v += a[j * n + l];
                    if (j == k) v -= a[i * n + l];
                    if (i == l) v -= a[j * n + k];
                    rm[((i * n + j) * n + k) * n + l] = scale * v;
                }
}

class FlatExact : public ExactCurvature {
public:
    explicit FlatExact(int n) : n_(n) {}
    int dim() const override { return n_; }
    void metric(const double*, double* g) const override {
        for (int i = 0; i < n_ * n_; ++i) g[i] = 0.0;
        for (int i = 0; i < n_; ++i) g[i * n_ + i] = 1.0;
    }
    void christoffel(const double*, double* gamma) const override {
        for (std::size_t i = 0; i < ipow(n_, 3); ++i) gamma[i] = 0.0;
    }
    void riemann(const double*, double* rm) const override {
        for (std::size_t i = 0; i < ipow(n_, 4); ++i) rm[i] = 0.0;
    }

protected:
    int n_;
};

class GaussianExact final : public FlatExact {
public:
    GaussianExact(int n, double lambda) : FlatExact(n), lambda_(lambda) {}
    bool has_soliton() const override { return true; }
    bool is_gradient() const override { return true; }
    double soliton_lambda() const override { return lambda_; }
    double potential(const double* x) const override {
        double r2 = 0.0;
        for (int i = 0; i < n_; ++i) r2 += x[i] * x[i];
        return -0.5 * lambda_ * r2;
    }
    void soliton_field(const double* x, double* xi) const override {
        for (int i = 0; i < n_; ++i) xi[i] = -lambda_ * x[i];
    }
    void potential_hessian(const double*, double* h) const override {
        for (int i = 0; i < n_ * n_; ++i) h[i] = 0.0;
        for (int i = 0; i < n_; ++i) h[i * n_ + i] = -lambda_;
    }

private:
    double lambda_;
};

class ConformalFactor {
public:
    virtual ~ConformalFactor() = default;
    virtual double u(const double* x) const = 0;
    virtual void du(const double* x, int n, double* d) const = 0;
    virtual void d2u(const double* x, int n, double* h) const = 0;
};

class TrigFactor final : public ConformalFactor {
public:
    explicit TrigFactor(TrigExpression e) : e_(std::move(e)) {}
    double u(const double* x) const override { return e_.value(x); }
    void du(const double* x, int n, double* d) const override { e_.gradient(x, n, d); }
    void d2u(const double* x, int n, double* h) const override { e_.hessian(x, n, h); }

private:
    TrigExpression e_;
};

// u = −½ log(1 + r²)
class CigarFactor final : public ConformalFactor {
public:
    double u(const double* x) const override { return -0.5 * std::log1p(x[0] * x[0] + x[1] * x[1]); }
    void du(const double* x, int n, double* d) const override {
        const double q = 1.0 + x[0] * x[0] + x[1] * x[1];
        for (int i = 0; i < n; ++i) d[i] = -x[i] / q;
    }
    void d2u(const double* x, int n, double* h) const override {
        const double q = 1.0 + x[0] * x[0] + x[1] * x[1];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) h[i * n + j] = (i == j ? -1.0 / q : 0.0) + 2.0 * x[i] * x[j] / (q * q);
    }
};

class ConformalExact : public ExactCurvature {
public:
    ConformalExact(int n, std::shared_ptr<const ConformalFactor> u) : n_(n), u_(std::move(u)) {}
    int dim() const override { return n_; }
    void metric(const double* x, double* g) const override {
        const double e = std::exp(2.0 * u_->u(x));
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) g[i * n_ + j] = i == j ? e : 0.0;
    }
    void christoffel(const double* x, double* gamma) const override {
        double d[kMaxDim];
        u_->du(x, n_, d);
        for (int k = 0; k < n_; ++k)
            for (int i = 0; i < n_; ++i)
                for (int j = 0; j < n_; ++j) {
                    double v = 0.0;
                    if (k == i) v += d[j];
                    if (k == j) v += d[i];
                    if (i == j) v -= d[k];
                    gamma[(k * n_ + i) * n_ + j] = v;
                }
    }
    // Rm = e^{2u} (A ⊙ δ), A = ∂²u − du⊗du + ½|du|² δ
    void riemann(const double* x, double* rm) const override {
        double d[kMaxDim], h[kMaxDim * kMaxDim], a[kMaxDim * kMaxDim];
        u_->du(x, n_, d);
        u_->d2u(x, n_, h);
        double du2 = 0.0;
        for (int i = 0; i < n_; ++i) du2 += d[i] * d[i];
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) a[i * n_ + j] = h[i * n_ + j] - d[i] * d[j] + (i == j ? 0.5 * du2 : 0.0);
        kulkarni_nomizu_delta(n_, a, std::exp(2.0 * u_->u(x)), rm);
    }

protected:
    int n_;
    std::shared_ptr<const ConformalFactor> u_;
};

// Steady gradient soliton with f = −log(1 + r²), λ = 0.
class CigarExact final : public ConformalExact {
public:
    CigarExact() : ConformalExact(2, std::make_shared<CigarFactor>()) {}
    bool has_soliton() const override { return true; }
    bool is_gradient() const override { return true; }
    double soliton_lambda() const override { return 0.0; }
    double potential(const double* x) const override { return -std::log1p(x[0] * x[0] + x[1] * x[1]); }
    void soliton_field(const double* x, double* xi) const override {
        xi[0] = -2.0 * x[0];
        xi[1] = -2.0 * x[1];
    }
    void potential_hessian(const double* x, double* h) const override {
        const double q = 1.0 + x[0] * x[0] + x[1] * x[1];
        double df[2] = {-2.0 * x[0] / q, -2.0 * x[1] / q};
        double gamma[8];
        christoffel(x, gamma);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double v = (i == j ? -2.0 / q : 0.0) + 4.0 * x[i] * x[j] / (q * q);
                for (int k = 0; k < 2; ++k) v -= gamma[(k * 2 + i) * 2 + j] * df[k];
                h[i * 2 + j] = v;
            }
    }
};

// Pole-free warped patch of the round 2-sphere: g = r²(dψ² + sin²ψ dθ²).
// Einstein with λ = −1/r², ξ = 0, f = 0.
class SpherePatchExact final : public ExactCurvature {
public:
    explicit SpherePatchExact(double r) : r_(r) {}
    int dim() const override { return 2; }
    void metric(const double* x, double* g) const override {
        const double s = std::sin(x[0]);
        g[0] = r_ * r_;
        g[1] = g[2] = 0.0;
        g[3] = r_ * r_ * s * s;
    }
    void christoffel(const double* x, double* gamma) const override {
        for (int i = 0; i < 8; ++i) gamma[i] = 0.0;
        const double s = std::sin(x[0]), c = std::cos(x[0]);
        gamma[(0 * 2 + 1) * 2 + 1] = -s * c;
        gamma[(1 * 2 + 0) * 2 + 1] = c / s;
        gamma[(1 * 2 + 1) * 2 + 0] = c / s;
    }
    // R_ijkl = K (g_il g_jk − g_ik g_jl), K = 1/r²
    void riemann(const double* x, double* rm) const override {
        double g[4];
        metric(x, g);
        const double k = 1.0 / (r_ * r_);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int a = 0; a < 2; ++a)
                    for (int l = 0; l < 2; ++l)
                        rm[((i * 2 + j) * 2 + a) * 2 + l] = k * (g[i * 2 + l] * g[j * 2 + a] - g[i * 2 + a] * g[j * 2 + l]);
    }
    bool has_soliton() const override { return true; }
    bool is_gradient() const override { return true; }
    double soliton_lambda() const override { return -1.0 / (r_ * r_); }
    double potential(const double*) const override { return 0.0; }
    void potential_hessian(const double*, double* h) const override {
        for (int i = 0; i < 4; ++i) h[i] = 0.0;
    }

private:
    double r_;
};

class ProductExact final : public ExactCurvature {
public:
    explicit ProductExact(std::vector<std::shared_ptr<const ExactCurvature>> parts) : parts_(std::move(parts)) {
        n_ = 0;
        for (const auto& p : parts_) {
            offsets_.push_back(n_);
            n_ += p->dim();
        }
    }
    int dim() const override { return n_; }
    void metric(const double* x, double* g) const override {
        for (int i = 0; i < n_ * n_; ++i) g[i] = 0.0;
        double b[kMaxDim * kMaxDim];
        for (std::size_t p = 0; p < parts_.size(); ++p) {
            const int m = parts_[p]->dim(), o = offsets_[p];
            parts_[p]->metric(x + o, b);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) g[(o + i) * n_ + o + j] = b[i * m + j];
        }
    }
    void christoffel(const double* x, double* gamma) const override {
        for (std::size_t i = 0; i < ipow(n_, 3); ++i) gamma[i] = 0.0;
        std::vector<double> b(ipow(kMaxDim, 3));
        for (std::size_t p = 0; p < parts_.size(); ++p) {
            const int m = parts_[p]->dim(), o = offsets_[p];
            parts_[p]->christoffel(x + o, b.data());
            for (int k = 0; k < m; ++k)
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j)
                        gamma[((o + k) * n_ + o + i) * n_ + o + j] = b[(k * m + i) * m + j];
        }
    }
    void riemann(const double* x, double* rm) const override {
        for (std::size_t i = 0; i < ipow(n_, 4); ++i) rm[i] = 0.0;
        std::vector<double> b(ipow(kMaxDim, 4));
        for (std::size_t p = 0; p < parts_.size(); ++p) {
            const int m = parts_[p]->dim(), o = offsets_[p];
            parts_[p]->riemann(x + o, b.data());
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    for (int k = 0; k < m; ++k)
                        for (int l = 0; l < m; ++l)
                            rm[(((o + i) * n_ + o + j) * n_ + o + k) * n_ + o + l] = b[((i * m + j) * m + k) * m + l];
        }
    }

private:
    std::vector<std::shared_ptr<const ExactCurvature>> parts_;
    std::vector<int> offsets_;
    int n_ = 0;
};

// Axis rules for one (possibly nested) factor occupying axes [o, o + dim).
void check_axes(const FamilySpec& spec, const ChartGrid& grid, int o) {
    const std::string k = to_string(spec.kind);
    const int d = spec.dim();
    auto extent = [&](int a) { return grid.spacing()[a] * (grid.periodic()[a] ? grid.shape()[a] : grid.shape()[a] - 1); };
    switch (spec.kind) {
        case FamilyKind::flat_torus:
        case FamilyKind::conformal_torus:
            for (int a = o; a < o + d; ++a)
                if (!grid.periodic()[a]) throw ConfigError(k + ": axis " + std::to_string(a) + " must be periodic");
            break;
        case FamilyKind::cigar:
        case FamilyKind::gaussian_shrinker:
            for (int a = o; a < o + d; ++a) {
                if (grid.periodic()[a])
                    throw ConfigError(k + ": axis " + std::to_string(a) +
                                      " is periodic; noncompact families need truncated (non-periodic) axes");
                const double lo = grid.lower()[a], hi = lo + extent(a), tol = 1e-9 * (1.0 + spec.truncation);
                if (lo < -spec.truncation - tol || hi > spec.truncation + tol)
                    throw ConfigError(k + ": grid axis " + std::to_string(a) + " exceeds the truncation box");
            }
            break;
        case FamilyKind::round_sphere: {
            if (d != 2) throw ConfigError("round_sphere: only the two-dimensional warped patch can be gridded");
            const double lo = grid.lower()[o], hi = lo + extent(o);
            if (grid.periodic()[o] || !(lo > 0.0) || !(hi < std::numbers::pi))
                throw ConfigError("round_sphere: axis " + std::to_string(o) +
                                  " (psi) must be a box strictly inside (0, pi)");
            if (!grid.periodic()[o + 1] || std::abs(extent(o + 1) - 2.0 * std::numbers::pi) > 1e-9)
                throw ConfigError("round_sphere: axis " + std::to_string(o + 1) + " (theta) must be periodic with length 2pi");
            break;
        }
        case FamilyKind::product: {
            int a = o;
            for (const auto& f : spec.factors) {
                check_axes(f, grid, a);
                a += f.dim();
            }
            break;
        }
    }
}

// The conformal factor must wrap across every periodic axis.
void check_periodic_u(const FamilySpec& spec, const ChartGrid& grid, int o) {
    if (spec.kind == FamilyKind::product) {
        int a = o;
        for (const auto& f : spec.factors) {
            check_periodic_u(f, grid, a);
            a += f.dim();
        }
        return;
    }
    if (spec.kind != FamilyKind::conformal_torus) return;
    const TrigExpression u = TrigExpression::parse(spec.u_expr);
    const int n = spec.n;
    const double probes[3] = {0.3, 1.1, 2.9};
    for (int a = 0; a < n; ++a) {
        const double len = grid.spacing()[o + a] * grid.shape()[o + a];
        for (double p : probes) {
            double x[kMaxDim], y[kMaxDim];
            for (int b = 0; b < n; ++b) x[b] = y[b] = grid.lower()[o + b] + p * (b + 1);
            x[a] = grid.lower()[o + a];
            y[a] = x[a] + len;
            double dx[kMaxDim], dy[kMaxDim];
            u.gradient(x, n, dx);
            u.gradient(y, n, dy);
            bool bad = std::abs(u.value(x) - u.value(y)) > 1e-10;
            for (int b = 0; b < n; ++b) bad = bad || std::abs(dx[b] - dy[b]) > 1e-10;
            if (bad)
                throw ConfigError("conformal_torus: u = '" + spec.u_expr + "' does not wrap across axis " +
                                  std::to_string(o + a) + " of the grid");
        }
    }
}

} // namespace

std::shared_ptr<const ExactCurvature> make_exact(const FamilySpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case FamilyKind::flat_torus: return std::make_shared<FlatExact>(spec.n);
        case FamilyKind::conformal_torus:
            return std::make_shared<ConformalExact>(spec.n,
                                                    std::make_shared<TrigFactor>(TrigExpression::parse(spec.u_expr)));
        case FamilyKind::round_sphere:
            if (spec.n != 2) throw ConfigError("round_sphere: only the two-dimensional warped patch has chart evaluators");
            return std::make_shared<SpherePatchExact>(spec.radius);
        case FamilyKind::cigar: return std::make_shared<CigarExact>();
        case FamilyKind::gaussian_shrinker: return std::make_shared<GaussianExact>(spec.n, spec.lambda);
        case FamilyKind::product: {
            std::vector<std::shared_ptr<const ExactCurvature>> parts;
            for (const auto& f : spec.factors) parts.push_back(make_exact(f));
            return std::make_shared<ProductExact>(std::move(parts));
        }
    }
    throw ConfigError("unknown family kind");
}

ExactFields sample(const ExactCurvature& exact, std::shared_ptr<const ChartGrid> grid) {
    const int n = exact.dim();
    if (grid->dim() != n) throw ShapeError("sample: grid dimension does not match the family");
    ExactFields out{TensorField::sym2(grid),
                    TensorField(grid, {Variance::contravariant, Variance::covariant, Variance::covariant}),
                    TensorField::covariant(grid, 4), TensorField::sym2(grid), TensorField::scalar(grid),
                    std::nullopt, std::nullopt, std::nullopt};
    if (exact.has_soliton()) {
        out.xi = TensorField::vector(grid);
        if (exact.is_gradient()) {
            out.f = TensorField::scalar(grid);
            out.hess_f = TensorField::sym2(grid);
        }
    }
    for (std::size_t p = 0; p < grid->node_count(); ++p) {
        const auto x = grid->coords(p);
        double g[kMaxDim * kMaxDim], ric[kMaxDim * kMaxDim];
        exact.metric(x.data(), g);
        exact.ricci(x.data(), ric);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                out.g.set_sym(p, i, j, g[i * n + j]);
                out.ric.set_sym(p, i, j, 0.5 * (ric[i * n + j] + ric[j * n + i]));
            }
        exact.christoffel(x.data(), out.gamma.node(p).data());
        exact.riemann(x.data(), out.rm.node(p).data());
        out.s(p, 0) = exact.scalar(x.data());
        if (out.xi) exact.soliton_field(x.data(), out.xi->node(p).data());
        if (out.f) {
            (*out.f)(p, 0) = exact.potential(x.data());
            double h[kMaxDim * kMaxDim];
            exact.potential_hessian(x.data(), h);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) out.hess_f->set_sym(p, i, j, 0.5 * (h[i * n + j] + h[j * n + i]));
        }
    }
    return out;
}

FamilyInstance instantiate(const FamilySpec& spec, std::shared_ptr<const ChartGrid> grid, int fd_order) {
    spec.validate();
    if (grid->dim() != spec.dim())
        throw ConfigError(std::string(to_string(spec.kind)) + ": family dimension " + std::to_string(spec.dim()) +
                          " does not match grid dimension " + std::to_string(grid->dim()));
    check_axes(spec, *grid, 0);
    check_periodic_u(spec, *grid, 0);
    auto exact = make_exact(spec);
    const int n = exact->dim();
    TensorField g = TensorField::sym2(grid);
    std::optional<TensorField> f, xi;
    if (exact->has_soliton()) {
        xi = TensorField::vector(grid);
        if (exact->is_gradient()) f = TensorField::scalar(grid);
    }
    for (std::size_t p = 0; p < grid->node_count(); ++p) {
        const auto x = grid->coords(p);
        double b[kMaxDim * kMaxDim];
        exact->metric(x.data(), b);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) g.set_sym(p, i, j, b[i * n + j]);
        if (xi) exact->soliton_field(x.data(), xi->node(p).data());
        if (f) (*f)(p, 0) = exact->potential(x.data());
    }
    FamilyInstance out{spec, exact, MetricState(std::move(g), fd_order), std::nullopt, std::move(f), std::move(xi)};
    if (exact->has_soliton()) out.lambda = exact->soliton_lambda();
    return out;
}

double sphere_extinction_time(double r0, int n) {
    if (!(r0 > 0.0) || n < 2) throw ConfigError("sphere: need r0 > 0 and n >= 2");
    return r0 * r0 / (2.0 * (n - 1));
}

SphereFlowPoint sphere_flow_closed_form(double r0, int n, double t) {
    const double te = sphere_extinction_time(r0, n);
    if (t < 0.0) throw ConfigError("sphere: t must be >= 0");
    if (t >= te) throw ExtinctionError(te);
    SphereFlowPoint out;
    out.r2 = r0 * r0 - 2.0 * (n - 1) * t;
    out.r = std::sqrt(out.r2);
    out.s = n * (n - 1) / out.r2;
    return out;
}

ConstantCurvatureSlice sphere_slice(double r0, int n, double t) {
    return sphere_slice_at_radius(sphere_flow_closed_form(r0, n, t).r, n);
}

ConstantCurvatureSlice sphere_slice_at_radius(double r, int n) {
    if (!(r > 0.0) || n < 2 || n > kMaxDim) throw ConfigError("sphere slice: need r > 0 and 2 <= n <= 4");
    ConstantCurvatureSlice c;
    c.n = n;
    c.r2 = r * r;
    c.dr2_dt = -2.0 * (n - 1);
    const std::size_t n2 = ipow(n, 2), n4 = ipow(n, 4);
    c.g.assign(n2, 0.0);
    c.g_inv.assign(n2, 0.0);
    c.ric.assign(n2, 0.0);
    c.dg_dt.assign(n2, 0.0);
    c.dric_dt.assign(n2, 0.0);
    for (int i = 0; i < n; ++i) {
        c.g[i * n + i] = c.r2;
        c.g_inv[i * n + i] = 1.0 / c.r2;
        c.ric[i * n + i] = n - 1.0;
        c.dg_dt[i * n + i] = c.dr2_dt;
    }
    // R_ijkl = r² (δ_il δ_jk − δ_ik δ_jl)
    c.rm.assign(n4, 0.0);
    c.drm_dt.assign(n4, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const double d = (i == l && j == k ? 1.0 : 0.0) - (i == k && j == l ? 1.0 : 0.0);
                    c.rm[((i * n + j) * n + k) * n + l] = c.r2 * d;
                    c.drm_dt[((i * n + j) * n + k) * n + l] = c.dr2_dt * d;
                }
    c.s = n * (n - 1.0) / c.r2;
    c.ds_dt = -n * (n - 1.0) * c.dr2_dt / (c.r2 * c.r2);
    return c;
}

} // namespace rfl
