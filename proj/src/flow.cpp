#include "rfl/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rfl/errors.hpp"
#include "rfl/integrate.hpp"
#include "rfl/operators.hpp"

namespace rfl {

const char* to_string(Scheme s) noexcept { return s == Scheme::euler ? "euler" : "rk4"; }

Scheme scheme_from_string(const std::string& s) {
    if (s == "euler") return Scheme::euler;
    if (s == "rk4") return Scheme::rk4;
    throw ConfigError("unknown scheme '" + s + "' (expected euler or rk4)");
}

double stability_bound(const MetricState& g, double cfl) {
    const double h = g.grid().min_spacing();
    return cfl * h * h / (1.0 + g.scalar().max_abs());
}

namespace {

MetricState checked_state(TensorField g, int order, double t) {
    try {
        return MetricState(std::move(g), order);
    } catch (const DegenerateMetricError& e) {
        throw CurvatureBlowUpError(t, e.node());
    }
}

// g + a·k
TensorField axpy(const TensorField& g, double a, const TensorField& k) {
    TensorField out = g;
    auto& d = out.data();
    const auto& kd = k.data();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += a * kd[i];
    return out;
}

TensorField flow_rhs(const MetricState& g) { return -2.0 * g.ricci(); }

} // namespace

MetricState step(const MetricState& g, double dt, Scheme scheme, double t, double cfl) {
    if (!(dt > 0.0)) throw ConfigError("step: dt must be positive");
    const double bound = stability_bound(g, cfl);
    if (dt > bound)
        throw ConfigError("step: dt = " + std::to_string(dt) + " exceeds the stability bound " + std::to_string(bound));
    const int order = g.fd_order();
    const TensorField& g0 = g.g();
    if (scheme == Scheme::euler) return checked_state(axpy(g0, dt, flow_rhs(g)), order, t + dt);

    const TensorField k1 = flow_rhs(g);
    const MetricState s2 = checked_state(axpy(g0, 0.5 * dt, k1), order, t + 0.5 * dt);
    const TensorField k2 = flow_rhs(s2);
    const MetricState s3 = checked_state(axpy(g0, 0.5 * dt, k2), order, t + 0.5 * dt);
    const TensorField k3 = flow_rhs(s3);
    const MetricState s4 = checked_state(axpy(g0, dt, k3), order, t + dt);
    const TensorField k4 = flow_rhs(s4);
    TensorField out = g0;
    auto& d = out.data();
    for (std::size_t i = 0; i < d.size(); ++i)
        d[i] += dt / 6.0 * (k1.data()[i] + 2.0 * k2.data()[i] + 2.0 * k3.data()[i] + k4.data()[i]);
    return checked_state(std::move(out), order, t + dt);
}

MonitorRow compute_monitors(const MetricState& g, double t) {
    MonitorRow m;
    m.t = t;
    const TensorField& s = g.scalar();
    m.s_min = *std::min_element(s.data().begin(), s.data().end());
    m.s_max = *std::max_element(s.data().begin(), s.data().end());
    m.vol = volume(g).value;
    m.int_s = integrate(g, s).value;
    m.int_ric_sq = integrate(g, norm_sq(g, g.ricci())).value;
    return m;
}

FlowTrajectory run_flow(const MetricState& g0, const FlowOptions& opt) {
    if (!(opt.t_end > 0.0)) throw ConfigError("flow: t_end must be positive");
    if (opt.store_stride < 1) throw ConfigError("flow: store_stride must be >= 1");
    double dt = opt.dt > 0.0 ? opt.dt : opt.safety * std::pow(g0.grid().min_spacing(), 2) / (1.0 + g0.scalar().max_abs());
    // round the step count up to a multiple of the stride and land exactly on t_end
    std::size_t steps = static_cast<std::size_t>(std::ceil(opt.t_end / dt - 1e-9));
    const auto stride = static_cast<std::size_t>(opt.store_stride);
    steps = std::max<std::size_t>(stride, (steps + stride - 1) / stride * stride);
    dt = opt.t_end / static_cast<double>(steps);

    FlowTrajectory traj;
    traj.dt = dt;
    traj.dt_store = dt * static_cast<double>(stride);
    traj.steps = steps;
    traj.times.push_back(0.0);
    traj.states.push_back(g0);
    traj.monitors.push_back(compute_monitors(g0, 0.0));
    MetricState g = g0;
    for (std::size_t k = 1; k <= steps; ++k) {
        const double t0 = static_cast<double>(k - 1) * dt;
        g = step(g, dt, opt.scheme, t0, opt.cfl);
        if (k % stride == 0) {
            const double t = static_cast<double>(k) * dt;
            traj.times.push_back(t);
            traj.states.push_back(g);
            traj.monitors.push_back(compute_monitors(g, t));
        }
    }
    return traj;
}

TensorField time_derivative(const std::vector<const TensorField*>& slices, std::size_t k, double dt) {
    const std::size_t m = slices.size();
    if (m < 3) throw NeedsHistoryError("time derivative needs at least 3 stored slices, have " + std::to_string(m));
    if (k >= m) throw NeedsHistoryError("time index " + std::to_string(k) + " is beyond the stored slices");
    std::size_t a, b, c;
    double wa, wb, wc;
    if (k == 0) {
        a = 0, b = 1, c = 2;
        wa = -1.5, wb = 2.0, wc = -0.5;
    } else if (k == m - 1) {
        a = m - 3, b = m - 2, c = m - 1;
        wa = 0.5, wb = -2.0, wc = 1.5;
    } else {
        a = k - 1, b = k, c = k + 1;
        wa = -0.5, wb = 0.0, wc = 0.5;
    }
    TensorField out(slices[b]->grid_ptr(), slices[b]->signature(), slices[b]->symmetric());
    auto& d = out.data();
    const auto &fa = slices[a]->data(), &fb = slices[b]->data(), &fc = slices[c]->data();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (wa * fa[i] + wb * fb[i] + wc * fc[i]) / dt;
    return out;
}

namespace {

template <class Getter>
TensorField slice_derivative(const FlowTrajectory& traj, std::size_t k, Getter get) {
    // only the three slices in use are touched, so lazy caches elsewhere stay cold
    const std::size_t m = traj.size();
    if (m < 3) throw NeedsHistoryError("time derivative needs at least 3 stored slices, have " + std::to_string(m));
    if (k >= m) throw NeedsHistoryError("time index " + std::to_string(k) + " is beyond the stored slices");
    const std::size_t lo = k == 0 ? 0 : (k == m - 1 ? m - 3 : k - 1);
    std::vector<const TensorField*> window;
    for (std::size_t i = lo; i < lo + 3; ++i) window.push_back(&get(traj.states[i]));
    return time_derivative(window, k - lo, traj.dt_store);
}

} // namespace

ResidualReport scalar_evolution_residual(const FlowTrajectory& traj, std::size_t k, double tol) {
    const TensorField ds = slice_derivative(traj, k, [](const MetricState& g) -> const TensorField& { return g.scalar(); });
    const MetricState& g = traj.states[k];
    TensorField res = ds - laplace_beltrami(g, g.scalar()) - 2.0 * norm_sq(g, g.ricci());
    return make_report("scalar_evolution", g, res, tol, traj.times[k]);
}

RicciEvolutionReport ricci_evolution_residual(const FlowTrajectory& traj, std::size_t k, double tol) {
    const TensorField dric = slice_derivative(traj, k, [](const MetricState& g) -> const TensorField& { return g.ricci(); });
    const MetricState& g = traj.states[k];
    const TensorField& ric = g.ricci();
    const TensorField lap = rough_laplacian(g, ric);
    TensorField res = dric - lap + weitzenboeck_r2(g, ric);
    // Δs taken as tr_g(ΔRic): the discrete connection is metric, and a separate scalar stencil
    // would add its own truncation error to the trace check
    TensorField tr = trace(g, dric) - trace(g, lap);
    return {make_report("ricci_evolution", g, res, tol, traj.times[k]),
            make_report("ricci_trace_evolution", g, tr, tol, traj.times[k])};
}

ResidualReport ricci_evolution_residual_bar_form(const FlowTrajectory& traj, std::size_t k, double tol) {
    const TensorField dric = slice_derivative(traj, k, [](const MetricState& g) -> const TensorField& { return g.ricci(); });
    const MetricState& g = traj.states[k];
    TensorField res = dric - sampson_laplacian(g, g.ricci());
    return make_report("ricci_evolution_bar_form", g, res, tol, traj.times[k]);
}

const char* SignSummary::label() const noexcept {
    if (strictly_positive()) return "positive";
    if (positive == 0 && zero == 0 && negative > 0) return "negative";
    if (positive == 0 && negative == 0) return "zero";
    if (negative == 0) return "nonnegative";
    if (positive == 0) return "nonpositive";
    return "mixed";
}

SignSummary sign_summary(const TensorField& f, double zero_tol) {
    if (f.rank() != 0) throw ShapeError("sign_summary: scalar field expected");
    SignSummary s;
    s.min = std::numeric_limits<double>::infinity();
    s.max = -std::numeric_limits<double>::infinity();
    for (double v : f.data()) {
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
        if (v > zero_tol) ++s.positive;
        else if (v < -zero_tol) ++s.negative;
        else ++s.zero;
    }
    return s;
}

void riemann_reaction(int n, const double* gi, const double* rm, const double* ric, double* out) {
    auto R = [&](int i, int j, int k, int l) { return rm[((i * n + j) * n + k) * n + l]; };
    const std::size_t n4 = ipow(n, 4);
    // T_{ij}^{rm} = g^{pr} g^{qm} R_ipjq
    std::vector<double> t(n4, 0.0), b(n4, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int r = 0; r < n; ++r)
                for (int m = 0; m < n; ++m) {
                    double acc = 0.0;
                    for (int p = 0; p < n; ++p)
                        for (int q = 0; q < n; ++q) acc += gi[p * n + r] * gi[q * n + m] * R(i, p, j, q);
                    t[((i * n + j) * n + r) * n + m] = acc;
                }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double acc = 0.0;
                    for (int r = 0; r < n; ++r)
                        for (int m = 0; m < n; ++m) acc += t[((i * n + j) * n + r) * n + m] * R(k, r, l, m);
                    b[((i * n + j) * n + k) * n + l] = -acc;
                }
    auto B = [&](int i, int j, int k, int l) { return b[((i * n + j) * n + k) * n + l]; };
    // Ric^q_i = g^{pq} R_ip
    double rmix[kMaxDim * kMaxDim];
    for (int i = 0; i < n; ++i)
        for (int q = 0; q < n; ++q) {
            double acc = 0.0;
            for (int p = 0; p < n; ++p) acc += gi[p * n + q] * ric[i * n + p];
            rmix[i * n + q] = acc;
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double v = 2.0 * (B(i, j, k, l) - B(i, j, l, k) + B(i, k, j, l) - B(i, l, j, k));
                    for (int q = 0; q < n; ++q)
                        v -= rmix[i * n + q] * R(q, j, k, l) + rmix[j * n + q] * R(i, q, k, l) +
                             rmix[k * n + q] * R(i, j, q, l) + rmix[l * n + q] * R(i, j, k, q);
                    out[((i * n + j) * n + k) * n + l] = v;
                }
}

RiemannEvolutionReport riemann_evolution_residual(const FlowTrajectory& traj, std::size_t k, double tol) {
    const TensorField drm = slice_derivative(traj, k, [](const MetricState& g) -> const TensorField& { return g.riemann(); });
    const MetricState& g = traj.states[k];
    const int n = g.dim();
    TensorField rhs = rough_laplacian(g, g.riemann());
    std::vector<double> react(ipow(n, 4));
    for (std::size_t p = 0; p < rhs.nodes(); ++p) {
        riemann_reaction(n, g.g_inv().node(p).data(), g.riemann().node(p).data(), g.ricci().node(p).data(),
                         react.data());
        auto r = rhs.node(p);
        for (std::size_t c = 0; c < react.size(); ++c) r[c] += react[c];
    }
    RiemannEvolutionReport out;
    out.residual = make_report("riemann_evolution", g, drm - rhs, tol, traj.times[k]);
    out.trace_sign = sign_summary(curvature_trace(g, drm));
    return out;
}

SignSummary ricci_trace_sign(const FlowTrajectory& traj, std::size_t k) {
    const TensorField dric = slice_derivative(traj, k, [](const MetricState& g) -> const TensorField& { return g.ricci(); });
    return sign_summary(trace(traj.states[k], dric));
}

MaximumPrincipleReport monitor_maximum_principle(const std::vector<double>& times, const std::vector<double>& s_min,
                                                 int n, double tol) {
    if (times.size() != s_min.size()) throw ShapeError("maximum principle: times and s_min differ in length");
    MaximumPrincipleReport r;
    if (times.empty()) return r;
    const double s0 = s_min.front();
    r.bound_applicable = s0 > 0.0;
    r.min_ratio = r.bound_applicable ? std::numeric_limits<double>::infinity() : 0.0;
    auto flag = [&](std::size_t k, const char* kind) {
        ++r.violations;
        if (!r.first_violation) {
            r.first_violation = k;
            r.first_violation_kind = kind;
        }
    };
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (k > 0 && s_min[k] < s_min[k - 1] - tol) {
            r.monotone = false;
            flag(k, "monotonicity");
        }
        if (r.bound_applicable) {
            const double denom = n / s0 - 2.0 * times[k];
            if (denom <= 0.0) continue;  // bound is +∞ past the blow-up time; reported by the extinction check
            const double bound = 1.0 / denom;
            r.min_ratio = std::min(r.min_ratio, s_min[k] / bound);
            if (s_min[k] < bound - tol * std::max(1.0, bound)) {
                r.bound_holds = false;
                flag(k, "lower_bound");
            }
        }
    }
    return r;
}

MaximumPrincipleReport monitor_maximum_principle(const FlowTrajectory& traj, double tol) {
    std::vector<double> s;
    for (const auto& m : traj.monitors) s.push_back(m.s_min);
    const int n = traj.states.empty() ? 2 : traj.states.front().dim();
    return monitor_maximum_principle(traj.times, s, n, tol);
}

AverageProbeReport decreasing_average_probe(const FlowTrajectory& traj, double tol) {
    if (traj.states.empty()) throw NeedsHistoryError("average probe: empty trajectory");
    if (!traj.states.front().grid().closed())
        throw InapplicableError("average probe: the averaged identity needs a closed manifold; grid is truncated");
    AverageProbeReport out;
    out.ricci_flat = true;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const MetricState& g = traj.states[k];
        const TensorField ds = slice_derivative(traj, k, [](const MetricState& s) -> const TensorField& { return s.scalar(); });
        AverageProbeRow row;
        row.t = traj.times[k];
        row.int_dt_s = integrate(g, ds).value;
        row.int_lap_s = integrate(g, laplace_beltrami(g, g.scalar())).value;
        row.int_ric_sq = traj.monitors[k].int_ric_sq;
        row.identity_residual = std::abs(row.int_dt_s - 2.0 * row.int_ric_sq);
        row.hypothesis_holds = row.int_dt_s <= tol;
        out.max_identity_residual = std::max(out.max_identity_residual, row.identity_residual);
        out.hypothesis_anywhere = out.hypothesis_anywhere || row.hypothesis_holds;
        out.ricci_flat = out.ricci_flat && g.ricci().max_abs() <= 1e-12;
        out.rows.push_back(row);
    }
    return out;
}

// -- sphere --------------------------------------------------------------------

SphereReduction::SphereReduction(double r0, int n) : r0_(r0), n_(n) {
    if (!(r0 > 0.0) || n < 2) throw ConfigError("sphere reduction: need r0 > 0 and n >= 2");
}

// w = r sin(ρ/r): K_rad = −w''/w, K_tan = (1 − w'²)/w²
double SphereReduction::radial_curvature(double r, double rho) {
    const double w = r * std::sin(rho / r);
    const double w2 = -std::sin(rho / r) / r;
    return -w2 / w;
}

double SphereReduction::tangential_curvature(double r, double rho) {
    const double w = r * std::sin(rho / r);
    const double w1 = std::cos(rho / r);
    return (1.0 - w1 * w1) / (w * w);
}

double SphereReduction::rhs(double r) const {
    // the equator ρ = πr/2 keeps both expressions well conditioned
    const double k = radial_curvature(r, 0.5 * std::numbers::pi * r);
    return -(n_ - 1) * k * r;
}

double SphereReduction::step(double r, double dt, Scheme scheme) const {
    if (scheme == Scheme::euler) return r + dt * rhs(r);
    const double k1 = rhs(r);
    const double k2 = rhs(r + 0.5 * dt * k1);
    const double k3 = rhs(r + 0.5 * dt * k2);
    const double k4 = rhs(r + dt * k3);
    return r + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
}

double unit_sphere_volume(int n) {
    // |S^n| = 2 π^{(n+1)/2} / Γ((n+1)/2)
    return 2.0 * std::pow(std::numbers::pi, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1));
}

double SphereTrajectory::extinction_estimate() const {
    if (times.size() < 2) throw NeedsHistoryError("extinction estimate needs two stored samples");
    const std::size_t m = times.size();
    const double a = r[m - 2] * r[m - 2], b = r[m - 1] * r[m - 1];
    const double slope = (b - a) / (times[m - 1] - times[m - 2]);
    return times[m - 1] - b / slope;
}

SphereTrajectory run_sphere(double r0, int n, double dt, double t_end, Scheme scheme, int store_stride) {
    SphereReduction red(r0, n);
    if (!(dt > 0.0) || !(t_end > 0.0)) throw ConfigError("sphere flow: dt and t_end must be positive");
    if (store_stride < 1) throw ConfigError("sphere flow: store_stride must be >= 1");
    const double te = sphere_extinction_time(r0, n);
    if (t_end >= te) throw ExtinctionError(te);
    const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
    if (std::abs(static_cast<double>(steps) * dt - t_end) > 1e-9 * t_end)
        throw ConfigError("sphere flow: t_end must be a whole number of steps");
    SphereTrajectory tr;
    tr.n = n;
    tr.r0 = r0;
    tr.dt = dt;
    const double omega = unit_sphere_volume(n);
    auto record = [&](double t, double r) {
        const double s = n * (n - 1.0) / (r * r);
        const double vol = omega * std::pow(r, n);
        tr.times.push_back(t);
        tr.r.push_back(r);
        tr.s.push_back(s);
        tr.vol.push_back(vol);
        tr.monitors.push_back({t, s, s, vol, s * vol, s * s / n * vol});
    };
    double r = r0;
    record(0.0, r);
    for (std::size_t k = 1; k <= steps; ++k) {
        r = red.step(r, dt, scheme);
        if (!(r > 0.0) || !std::isfinite(r)) throw ExtinctionError(te);
        if (k % static_cast<std::size_t>(store_stride) == 0 || k == steps) record(static_cast<double>(k) * dt, r);
    }
    return tr;
}

SphereResiduals sphere_closed_form_residuals(const ConstantCurvatureSlice& c) {
    const int n = c.n;
    const std::size_t n2 = ipow(n, 2), n4 = ipow(n, 4);
    const double* gi = c.g_inv.data();
    auto R = [&](int i, int j, int k, int l) { return c.rm[((i * n + j) * n + k) * n + l]; };
    SphereResiduals out;
    // ‖Ric‖² = g^{ik} g^{jl} R_ij R_kl
    double ric_sq = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) ric_sq += gi[i * n + k] * gi[j * n + l] * c.ric[i * n + j] * c.ric[k * n + l];
    // Rm is parallel, so every Laplacian term vanishes
    out.scalar = std::abs(c.ds_dt - 2.0 * ric_sq);

    // ℜ₂(Ric)_ij = −2 Ric^{kl} R_kijl + Ric^k_j R_ki + Ric^k_i R_kj
    std::vector<double> up(n2, 0.0), mixed(n2, 0.0);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            for (int a = 0; a < n; ++a) {
                mixed[k * n + l] += gi[k * n + a] * c.ric[a * n + l];
                for (int b = 0; b < n; ++b) up[k * n + l] += gi[k * n + a] * gi[l * n + b] * c.ric[a * n + b];
            }
    std::vector<double> res(n2);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double r2 = 0.0;
            for (int k = 0; k < n; ++k) {
                for (int l = 0; l < n; ++l) r2 -= 2.0 * up[k * n + l] * R(k, i, j, l);
                r2 += mixed[k * n + j] * c.ric[k * n + i] + mixed[k * n + i] * c.ric[k * n + j];
            }
            res[i * n + j] = c.dric_dt[i * n + j] + r2;
        }
    double rn = 0.0, tr = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            tr += gi[i * n + j] * c.dric_dt[i * n + j];
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) rn += gi[i * n + k] * gi[j * n + l] * res[i * n + j] * res[k * n + l];
        }
    out.ricci = std::sqrt(std::max(rn, 0.0));
    out.ricci_trace = std::abs(tr);

    std::vector<double> react(n4);
    riemann_reaction(n, gi, c.rm.data(), c.ric.data(), react.data());
    for (std::size_t a = 0; a < n4; ++a) out.riemann = std::max(out.riemann, std::abs(c.drm_dt[a] - react[a]));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    out.rm_trace += gi[j * n + k] * gi[i * n + l] * c.drm_dt[((i * n + j) * n + k) * n + l];
    return out;
}

} // namespace rfl
