#include "wnv/periodic.hpp"

#include "wnv/error.hpp"
#include "wnv/imex.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

namespace wnv {

namespace {

/// Shifted linear problems
///   U_t - D1 U_xx + K1 U = f1(U', V'),  V_t - D2 V_xx + K2 V = f2(U', V')
/// over one period, where (U', V') is the previous iterate and the start
/// slice is the previous iterate's terminal slice.
class ShiftedIteration {
public:
    ShiftedIteration(const ModelParams& params, double l, int n_cells, int steps, double boundary_u, double boundary_v)
        : params_(params), n_(n_cells), steps_(steps), bu_(boundary_u), bv_(boundary_v), solver_(n_cells) {
        const ShiftConstants k = shift_constants(params);
        k1_ = k.K1;
        k2_ = k.K2;
        dt_ = params.period_T / steps;
        const double dx = l / n_cells;
        diff_u_ = params.D1 / (dx * dx);
        diff_v_ = params.D2 / (dx * dx);
        beta_.resize(static_cast<std::size_t>(steps) * n_cells);
        gamma_.resize(beta_.size());
        for (int k2 = 0; k2 < steps; ++k2) {
            const double t = (k2 + 1) * dt_;
            for (int i = 0; i < n_cells; ++i) {
                const std::size_t idx = static_cast<std::size_t>(k2) * n_cells + i;
                beta_[idx] = params.beta_b(i * dx, t);
                gamma_[idx] = params.gamma_b(i * dx, t);
            }
        }
        rhs_u_.assign(static_cast<std::size_t>(n_cells) + 1, 0.0);
        rhs_v_.assign(static_cast<std::size_t>(n_cells) + 1, 0.0);
    }

    [[nodiscard]] double K1() const noexcept { return k1_; }
    [[nodiscard]] double K2() const noexcept { return k2_; }

    void apply(const std::vector<double>& prev_u, const std::vector<double>& prev_v, std::vector<double>& next_u,
               std::vector<double>& next_v) {
        const std::size_t stride = static_cast<std::size_t>(n_) + 1;
        next_u.resize(prev_u.size());
        next_v.resize(prev_v.size());
        const std::size_t last = static_cast<std::size_t>(steps_) * stride;
        std::copy_n(prev_u.begin() + static_cast<std::ptrdiff_t>(last), stride, next_u.begin());
        std::copy_n(prev_v.begin() + static_cast<std::ptrdiff_t>(last), stride, next_v.begin());

        const double Nb = params_.N_b;
        const double Am = params_.A_m;
        for (int k = 0; k < steps_; ++k) {
            const std::size_t cur = static_cast<std::size_t>(k) * stride;
            const std::size_t nxt = cur + stride;
            const std::size_t coef = static_cast<std::size_t>(k) * n_;
            for (int i = 0; i < n_; ++i) {
                const double U = prev_u[nxt + i];
                const double V = prev_v[nxt + i];
                const double beta = beta_[coef + i];
                const double f1 = k1_ * U - gamma_[coef + i] * U + params_.alpha_b * beta * (Nb - U) * V / Nb;
                const double f2 = k2_ * V - params_.d_m * V + params_.alpha_m * beta * (Am - V) * U / Nb;
                rhs_u_[i] = next_u[cur + i] + dt_ * f1;
                rhs_v_[i] = next_v[cur + i] + dt_ * f2;
            }
            rhs_u_[n_] = bu_;
            rhs_v_[n_] = bv_;
            solver_.solve({dt_, diff_u_, 0.0, k1_}, rhs_u_, bu_, std::span<double>(next_u).subspan(nxt, stride));
            solver_.solve({dt_, diff_v_, 0.0, k2_}, rhs_v_, bv_, std::span<double>(next_v).subspan(nxt, stride));
        }
    }

private:
    const ModelParams& params_;
    int n_;
    int steps_;
    double bu_;
    double bv_;
    double k1_ = 0.0;
    double k2_ = 0.0;
    double dt_ = 0.0;
    double diff_u_ = 0.0;
    double diff_v_ = 0.0;
    std::vector<double> beta_;
    std::vector<double> gamma_;
    std::vector<double> rhs_u_;
    std::vector<double> rhs_v_;
    ImplicitSolver solver_;
};

double sup_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Largest amount by which `next` moves against the expected direction.
double reversal(const std::vector<double>& prev, const std::vector<double>& next, PeriodicKind kind) {
    double worst = 0.0;
    for (std::size_t i = 0; i < prev.size(); ++i) {
        const double d = kind == PeriodicKind::Minimal ? prev[i] - next[i] : next[i] - prev[i];
        worst = std::max(worst, d);
    }
    return worst;
}

PeriodicSolution blank(double l, PeriodicKind kind, const ModelParams& params, const PeriodicConfig& config) {
    if (!(l > 0.0)) throw Error(ErrorCode::ConfigError, "periodic domain length must be positive");
    PeriodicSolution s;
    s.l = l;
    s.kind = kind;
    s.n_cells = periodic_cells(l, config);
    s.steps = config.steps_per_period;
    s.period = params.period_T;
    const std::size_t size = static_cast<std::size_t>(s.steps + 1) * (s.n_cells + 1);
    s.U.assign(size, 0.0);
    s.V.assign(size, 0.0);
    const ShiftConstants k = shift_constants(params);
    s.K1 = k.K1;
    s.K2 = k.K2;
    return s;
}

void finish(PeriodicSolution& s) {
    const std::size_t stride = static_cast<std::size_t>(s.n_cells) + 1;
    const std::size_t last = static_cast<std::size_t>(s.steps) * stride;
    double r = 0.0;
    for (std::size_t i = 0; i < stride; ++i)
        r = std::max({r, std::abs(s.U[i] - s.U[last + i]), std::abs(s.V[i] - s.V[last + i])});
    s.periodicity_residual = r;
}

// Runs the monotone iteration from `s` (already holding iterate 1 when
// `done` = 1) until the sup change drops below tol.
void iterate_to_convergence(PeriodicSolution& s, ShiftedIteration& kernel, const ModelParams& params,
                            const PeriodicConfig& config, int done) {
    const double mono = config.monotone_tol * std::max(params.N_b, params.A_m);
    std::vector<double> next_u;
    std::vector<double> next_v;
    for (int n = done + 1; n <= config.max_outer; ++n) {
        kernel.apply(s.U, s.V, next_u, next_v);
        const double rev = std::max(reversal(s.U, next_u, s.kind), reversal(s.V, next_v, s.kind));
        if (rev > mono) {
            std::ostringstream msg;
            msg << to_string(s.kind) << " iterate " << n << " on l=" << s.l << " reversed by " << rev
                << " (shift constants too small or grid too coarse)";
            throw Error(ErrorCode::NonMonotoneIterate, msg.str());
        }
        s.residual = std::max(sup_distance(s.U, next_u), sup_distance(s.V, next_v));
        s.U.swap(next_u);
        s.V.swap(next_v);
        s.outer_iterations = n;
        if (s.residual < config.tol) {
            finish(s);
            return;
        }
    }
    std::ostringstream msg;
    msg << to_string(s.kind) << " iteration on l=" << s.l << " did not reach tol " << config.tol << " in "
        << config.max_outer << " outer iterations (residual " << s.residual << ")";
    throw Error(ErrorCode::MaxIterations, msg.str());
}

double interpolate_slice(const std::vector<double>& data, int k, int n_cells, double dx, double x) {
    const std::size_t base = static_cast<std::size_t>(k) * (n_cells + 1);
    const double pos = std::clamp(x / dx, 0.0, static_cast<double>(n_cells));
    const int i = std::min(static_cast<int>(pos), n_cells - 1);
    const double w = pos - i;
    return (1.0 - w) * data[base + i] + w * data[base + i + 1];
}

} // namespace

std::string_view to_string(PeriodicKind kind) noexcept {
    return kind == PeriodicKind::Minimal ? "minimal" : "maximal";
}

double PeriodicSolution::u_at(int k, double xv) const { return interpolate_slice(U, k, n_cells, dx(), xv); }
double PeriodicSolution::v_at(int k, double xv) const { return interpolate_slice(V, k, n_cells, dx(), xv); }
double PeriodicSolution::sup_U() const { return *std::max_element(U.begin(), U.end()); }
double PeriodicSolution::sup_V() const { return *std::max_element(V.begin(), V.end()); }

ShiftConstants shift_constants(const ModelParams& params) {
    const FieldBounds beta = field_bounds(params.beta_b);
    const FieldBounds gamma = field_bounds(params.gamma_b);
    const double ratio = params.A_m / params.N_b + 1.0;
    return {gamma.max + params.alpha_b * beta.max * ratio, params.d_m + params.alpha_m * beta.max * ratio};
}

std::pair<double, double> endemic_equilibrium(const ModelParams& params) {
    const double a = params.alpha_b * params.beta_b.constant_value();
    const double b = params.alpha_m * params.beta_b.constant_value();
    const double g = params.gamma_b.constant_value();
    const double num = a * b * params.A_m - g * params.N_b * params.d_m;
    if (num <= 0.0) return {0.0, 0.0};
    const double frac = num / (g * params.N_b * b + a * b * params.A_m); // U* / N_b
    return {frac * params.N_b, b * params.A_m * frac / (params.d_m + b * frac)};
}

int periodic_cells(double l, const PeriodicConfig& config) {
    return std::max(16, static_cast<int>(std::lround(l * config.nodes_per_unit)));
}

PeriodicSolution iterate_minimal(double l, const ModelParams& params, const PeriodicConfig& config) {
    PeriodicSolution s = blank(l, PeriodicKind::Minimal, params, config);

    SpectralConfig spectral;
    spectral.n_cells = s.n_cells;
    spectral.steps_per_period = s.steps;
    const EigenResult eigen = principal_eigenvalue(1.0, l, params, spectral);
    s.mu1 = eigen.mu1;
    if (eigen.mu1 >= 0.0) {
        // l <= L0: no positive periodic solution; report the zero solution.
        s.positive = false;
        finish(s);
        return s;
    }

    const PeriodicEigenfunction ef = periodic_eigenfunction(eigen, params, spectral);
    double sup_phi = 0.0;
    double sup_psi = 0.0;
    for (const auto& slice : ef.phi) sup_phi = std::max(sup_phi, *std::max_element(slice.begin(), slice.end()));
    for (const auto& slice : ef.psi) sup_psi = std::max(sup_psi, *std::max_element(slice.begin(), slice.end()));

    ShiftedIteration kernel(params, l, s.n_cells, s.steps, 0.0, 0.0);
    const std::size_t stride = static_cast<std::size_t>(s.n_cells) + 1;

    // Largest delta = 2^-k whose scaled eigenfunction is a discrete lower
    // solution: one iteration must not decrease it anywhere.
    std::vector<double> u0(s.U.size());
    std::vector<double> v0(s.V.size());
    std::vector<double> u1;
    std::vector<double> v1;
    for (int k = 1; k <= 60; ++k) {
        const double delta = std::ldexp(1.0, -k);
        if (delta * sup_phi > 0.5 * params.N_b || delta * sup_psi > 0.5 * params.A_m) continue;
        for (int step = 0; step <= s.steps; ++step)
            for (std::size_t i = 0; i < stride; ++i) {
                u0[step * stride + i] = delta * ef.phi[step][i];
                v0[step * stride + i] = delta * ef.psi[step][i];
            }
        kernel.apply(u0, v0, u1, v1);
        const double rev = std::max(reversal(u0, u1, PeriodicKind::Minimal), reversal(v0, v1, PeriodicKind::Minimal));
        if (rev <= 1e-9 * delta) {
            s.delta = delta;
            s.residual = std::max(sup_distance(u0, u1), sup_distance(v0, v1));
            s.U = std::move(u1);
            s.V = std::move(v1);
            s.outer_iterations = 1;
            if (s.residual < config.tol) {
                finish(s);
                return s;
            }
            iterate_to_convergence(s, kernel, params, config, 1);
            return s;
        }
    }
    std::ostringstream msg;
    msg << "no delta in 2^-1..2^-60 makes the eigenfunction a discrete lower solution on l=" << l;
    throw Error(ErrorCode::NonMonotoneIterate, msg.str());
}

PeriodicSolution iterate_maximal(double l, const ModelParams& params, const PeriodicConfig& config) {
    PeriodicSolution s = blank(l, PeriodicKind::Maximal, params, config);
    std::fill(s.U.begin(), s.U.end(), params.N_b);
    std::fill(s.V.begin(), s.V.end(), params.A_m);
    ShiftedIteration kernel(params, l, s.n_cells, s.steps, params.N_b, params.A_m);
    iterate_to_convergence(s, kernel, params, config, 0);
    return s;
}

PeriodicSolution outer_iteration(const PeriodicSolution& current, const ModelParams& params) {
    const bool minimal = current.kind == PeriodicKind::Minimal;
    ShiftedIteration kernel(params, current.l, current.n_cells, current.steps, minimal ? 0.0 : params.N_b,
                            minimal ? 0.0 : params.A_m);
    PeriodicSolution next = current;
    kernel.apply(current.U, current.V, next.U, next.V);
    next.outer_iterations = current.outer_iterations + 1;
    next.residual = std::max(sup_distance(current.U, next.U), sup_distance(current.V, next.V));
    finish(next);
    return next;
}

EnvelopePair halfline_envelope(const ModelParams& params, const std::vector<double>& l_values, double window,
                               const PeriodicConfig& config, const SpectralConfig& spectral, int jobs) {
    if (l_values.empty()) throw Error(ErrorCode::ConfigError, "envelope needs at least one l");

    EnvelopePair out;
    out.window = window;
    out.l_values = l_values;
    std::sort(out.l_values.begin(), out.l_values.end());

    try {
        out.L0 = critical_length(params, spectral).L0;
    } catch (const Error& e) {
        throw Error(ErrorCode::PrerequisiteFailed, std::string("critical length unavailable: ") + e.what());
    }
    for (double l : out.l_values)
        if (!(l > out.L0)) {
            std::ostringstream msg;
            msg << "l=" << l << " does not exceed L0=" << out.L0;
            throw Error(ErrorCode::PrerequisiteFailed, msg.str());
        }
    if (!(window > 0.0) || window > out.l_values.front())
        throw Error(ErrorCode::PrerequisiteFailed, "window M must satisfy 0 < M <= min(l)");

    const std::size_t count = out.l_values.size();
    out.minimal.resize(count);
    out.maximal.resize(count);

    // 2*count independent tasks, at most `jobs` in flight.
    std::vector<std::function<void()>> tasks;
    for (std::size_t j = 0; j < count; ++j) {
        tasks.emplace_back([&, j] { out.minimal[j] = iterate_minimal(out.l_values[j], params, config); });
        tasks.emplace_back([&, j] { out.maximal[j] = iterate_maximal(out.l_values[j], params, config); });
    }
    const std::size_t width = static_cast<std::size_t>(std::max(1, jobs));
    for (std::size_t start = 0; start < tasks.size(); start += width) {
        std::vector<std::future<void>> running;
        for (std::size_t i = start; i < std::min(tasks.size(), start + width); ++i)
            running.push_back(std::async(width == 1 ? std::launch::deferred : std::launch::async, tasks[i]));
        for (auto& f : running) f.get();
    }

    // Compare on the window nodes of the smallest-l grid.
    const PeriodicSolution& ref = out.minimal.front();
    const int window_nodes = static_cast<int>(std::floor(window / ref.dx() + 1e-9));
    std::vector<double> xs;
    for (int i = 0; i <= window_nodes; ++i) xs.push_back(ref.x(i));
    const int steps = ref.steps;

    out.gap.assign(count, 0.0);
    for (std::size_t j = 0; j < count; ++j) {
        const auto& lo = out.minimal[j];
        const auto& hi = out.maximal[j];
        double g = 0.0;
        for (int k = 0; k <= steps; ++k)
            for (double x : xs)
                g = std::max({g, std::abs(hi.u_at(k, x) - lo.u_at(k, x)), std::abs(hi.v_at(k, x) - lo.v_at(k, x))});
        out.gap[j] = g;
    }
    for (std::size_t j = 0; j + 1 < count; ++j) {
        const auto& a_min = out.minimal[j];
        const auto& b_min = out.minimal[j + 1];
        const auto& a_max = out.maximal[j];
        const auto& b_max = out.maximal[j + 1];
        for (int k = 0; k <= steps; ++k)
            for (double x : xs) {
                out.minimal_decrease = std::max(
                    {out.minimal_decrease, a_min.u_at(k, x) - b_min.u_at(k, x), a_min.v_at(k, x) - b_min.v_at(k, x)});
                out.maximal_increase = std::max(
                    {out.maximal_increase, b_max.u_at(k, x) - a_max.u_at(k, x), b_max.v_at(k, x) - a_max.v_at(k, x)});
            }
        out.gap_increase = std::max(out.gap_increase, out.gap[j + 1] - out.gap[j]);
    }
    return out;
}

} // namespace wnv
