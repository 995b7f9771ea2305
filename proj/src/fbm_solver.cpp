#include "wnv/fbm_solver.hpp"

#include "wnv/error.hpp"

#include <cmath>
// Boost 1.74's pchip.hpp calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace wnv {

namespace {

double sup(const std::vector<double>& w) {
    double m = 0.0;
    for (double v : w) m = std::max(m, v);
    return m;
}

double trapezoid(const std::vector<double>& w, double length) {
    const int n = static_cast<int>(w.size()) - 1;
    double s = 0.5 * (w.front() + w.back());
    for (int i = 1; i < n; ++i) s += w[i];
    return s * length / n;
}

// Applies the undershoot policy: values within `tol` outside [0, cap] are
// clamped, anything further out is an instability.
void enforce_bounds(std::vector<double>& w, double cap, double tol, double t, const char* name) {
    for (double& v : w) {
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << name << " became non-finite at t=" << t;
            throw Error(ErrorCode::NonfiniteValue, msg.str());
        }
        if (v < 0.0) {
            if (v < -tol) {
                std::ostringstream msg;
                msg << name << " undershoot " << v << " at t=" << t << " (dt too large?)";
                throw Error(ErrorCode::StabilityFailure, msg.str());
            }
            v = 0.0;
        } else if (v > cap) {
            if (v > cap + tol) {
                std::ostringstream msg;
                msg << name << " overshoot " << v << " > " << cap << " at t=" << t << " (dt too large?)";
                throw Error(ErrorCode::StabilityFailure, msg.str());
            }
            v = cap;
        }
    }
}

std::vector<double> resample(const std::vector<double>& samples, double h0, int n_cells, double cap) {
    const std::size_t m = samples.size();
    std::vector<double> out(static_cast<std::size_t>(n_cells) + 1, 0.0);
    std::vector<double> xs(m);
    for (std::size_t j = 0; j < m; ++j) xs[j] = h0 * static_cast<double>(j) / static_cast<double>(m - 1);

    auto linear = [&](double x) {
        const double pos = x / h0 * static_cast<double>(m - 1);
        const std::size_t j = std::min(static_cast<std::size_t>(pos), m - 2);
        const double w = pos - static_cast<double>(j);
        return (1.0 - w) * samples[j] + w * samples[j + 1];
    };

    if (m < 4) {
        for (int i = 0; i < n_cells; ++i) out[i] = linear(h0 * i / n_cells);
    } else {
        using boost::math::interpolators::pchip;
        auto spline = pchip<std::vector<double>>(std::vector<double>(xs), std::vector<double>(samples), 0.0);
        for (int i = 0; i < n_cells; ++i) out[i] = spline(std::min(h0 * i / n_cells, h0));
    }
    for (double& v : out) v = std::clamp(v, 0.0, cap);
    out.back() = 0.0;
    return out;
}

} // namespace

std::string_view to_string(StopReason reason) noexcept {
    switch (reason) {
    case StopReason::Horizon: return "horizon";
    case StopReason::FrontReachedHmax: return "front_reached_H_max";
    case StopReason::Extinct: return "extinct";
    }
    return "unknown";
}

double stable_dt(const ModelParams& params) {
    const FieldBounds beta = field_bounds(params.beta_b);
    const FieldBounds gamma = field_bounds(params.gamma_b);
    const double rate_u = gamma.max + params.alpha_b * beta.max * params.A_m / params.N_b;
    const double rate_v = params.d_m + params.alpha_m * beta.max;
    return 1.0 / std::max(rate_u, rate_v);
}

double front_gradient(const SimState& state) {
    const int n = state.n_cells();
    const double dy = 1.0 / n;
    const auto& u = state.u;
    return (3.0 * u[n] - 4.0 * u[n - 1] + u[n - 2]) / (2.0 * dy * state.h);
}

double front_speed(const SimState& state, double mu) {
    return std::max(0.0, -mu * front_gradient(state));
}

SimState initial_state(const ModelParams& params, const InitialData& init, int n_cells) {
    if (n_cells < 3) throw Error(ErrorCode::ConfigError, "solver grid needs at least 3 cells");
    SimState s;
    s.t = 0.0;
    s.h = params.h0;
    s.u = resample(init.Ib0, params.h0, n_cells, params.N_b);
    s.v = resample(init.Im0, params.h0, n_cells, params.A_m);
    return s;
}

FrontStepper::FrontStepper(int n_cells)
    : solver_(n_cells), rhs_u_(static_cast<std::size_t>(n_cells) + 1), rhs_v_(static_cast<std::size_t>(n_cells) + 1) {}

SimState FrontStepper::step(const SimState& state, const ModelParams& params, double dt, bool fixed_front) {
    const int n = state.n_cells();
    if (n != solver_.n_cells()) {
        solver_.resize(n);
        rhs_u_.assign(static_cast<std::size_t>(n) + 1, 0.0);
        rhs_v_.assign(static_cast<std::size_t>(n) + 1, 0.0);
    }
    const double dy = 1.0 / n;

    // (1)-(2): Stefan condition, explicit in the current state.
    const double hp = fixed_front ? 0.0 : front_speed(state, params.mu);
    const double h_new = state.h + dt * hp;
    if (!std::isfinite(h_new)) throw Error(ErrorCode::NonfiniteValue, "front position became non-finite");

    // (3): explicit reaction at t_n ...
    const double t = state.t;
    for (int i = 0; i < n; ++i) {
        const double x = i * dy * state.h;
        const double beta = params.beta_b(x, t);
        const double gamma = params.gamma_b(x, t);
        const double u = state.u[i];
        const double v = state.v[i];
        rhs_u_[i] = u + dt * (-gamma * u + params.alpha_b * beta * (params.N_b - u) * v / params.N_b);
        rhs_v_[i] = v + dt * (-params.d_m * v + params.alpha_m * beta * (params.A_m - v) * u / params.N_b);
    }
    rhs_u_[n] = 0.0;
    rhs_v_[n] = 0.0;

    // ... implicit diffusion and front-induced advection.
    SimState next;
    next.t = t + dt;
    next.h = h_new;
    next.u.resize(static_cast<std::size_t>(n) + 1);
    next.v.resize(static_cast<std::size_t>(n) + 1);
    const double inv = 1.0 / (h_new * h_new * dy * dy);
    const double advection = hp / h_new;
    solver_.solve({dt, params.D1 * inv, advection, 0.0}, rhs_u_, 0.0, next.u);
    solver_.solve({dt, params.D2 * inv, advection, 0.0}, rhs_v_, 0.0, next.v);

    // (4): undershoot policy.
    const double tol = 1e-10 * std::max(params.N_b, params.A_m);
    enforce_bounds(next.u, params.N_b, tol, next.t, "I_b");
    enforce_bounds(next.v, params.A_m, tol, next.t, "I_m");
    return next;
}

SimState step(const SimState& state, const ModelParams& params, double dt) {
    FrontStepper stepper(state.n_cells());
    return stepper.step(state, params, dt);
}

Trajectory simulate(const ModelParams& params, const InitialData& init, const SolverConfig& config,
                    const StateObserver& observer) {
    return simulate_from(params, initial_state(params, init, config.n_cells), config, observer);
}

Trajectory simulate_from(const ModelParams& params, SimState state, const SolverConfig& config,
                         const StateObserver& observer) {
    if (!(config.dt > 0.0)) throw Error(ErrorCode::ConfigError, "solver.dt must be positive");
    const double dt_max = stable_dt(params);
    if (config.dt > dt_max * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "solver.dt=" << config.dt << " exceeds the stability bound " << dt_max;
        throw Error(ErrorCode::ConfigError, msg.str());
    }
    if (config.snapshot_stride < 1) throw Error(ErrorCode::ConfigError, "solver.snapshot_stride must be >= 1");

    Trajectory traj;
    FrontStepper stepper(state.n_cells());
    const double t0 = state.t;
    const long long total = static_cast<long long>(std::ceil((config.t_max - t0) / config.dt - 1e-9));

    auto record = [&](const SimState& s) {
        const double hp = config.fixed_front ? 0.0 : front_speed(s, params.mu);
        traj.history.push_back({s.t, s.h, hp, sup(s.u), sup(s.v), trapezoid(s.u, s.h), trapezoid(s.v, s.h)});
        traj.max_hprime = std::max(traj.max_hprime, hp);
        if (observer) observer(s);
        return hp;
    };

    double hp = record(state);
    traj.snapshots.push_back(state);
    double stall_since = hp < config.eps_front ? state.t : std::numeric_limits<double>::infinity();

    for (long long k = 1; k <= total; ++k) {
        SimState next;
        try {
            next = stepper.step(state, params, config.dt, config.fixed_front);
        } catch (const Error& e) {
            std::ostringstream msg;
            msg << "step failed at t=" << state.t << ": " << e.what();
            throw Error(e.code(), msg.str());
        }
        next.t = t0 + static_cast<double>(k) * config.dt;
        state = std::move(next);
        hp = record(state);

        const bool last = k == total;
        bool stop = false;
        if (state.h >= config.H_max) {
            traj.stop = StopReason::FrontReachedHmax;
            stop = true;
        } else {
            if (hp < config.eps_front) {
                if (!std::isfinite(stall_since)) stall_since = state.t;
            } else {
                stall_since = std::numeric_limits<double>::infinity();
            }
            const auto& rec = traj.history.back();
            if (rec.max_Ib + rec.max_Im < config.eps_ext && state.t - stall_since >= params.period_T - 1e-12) {
                traj.stop = StopReason::Extinct;
                stop = true;
            }
        }
        if (k % config.snapshot_stride == 0 || last || stop) traj.snapshots.push_back(state);
        if (stop) break;
    }
    return traj;
}

void write_front_csv(std::ostream& out, const Trajectory& trajectory) {
    out << "t,h,hprime,max_Ib,max_Im\n";
    out << std::setprecision(17);
    for (const auto& r : trajectory.history)
        out << r.t << ',' << r.h << ',' << r.hprime << ',' << r.max_Ib << ',' << r.max_Im << '\n';
}

void write_snapshot_csv(std::ostream& out, const Trajectory& trajectory) {
    out << "t,y,x,Ib,Im\n";
    out << std::setprecision(17);
    for (const auto& s : trajectory.snapshots) {
        const int n = s.n_cells();
        for (int i = 0; i <= n; ++i) {
            const double y = static_cast<double>(i) / n;
            out << s.t << ',' << y << ',' << y * s.h << ',' << s.u[i] << ',' << s.v[i] << '\n';
        }
    }
}

} // namespace wnv
