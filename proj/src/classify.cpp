#include "wnv/classify.hpp"

#include "wnv/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace wnv {

namespace {

// The mu-independent part of a classification.
struct Thresholds {
    double R0F0 = 0.0;
    double L0 = 0.0; // 0: no critical length below b_max
};

Thresholds spectral_thresholds(const ModelParams& params, const SpectralConfig& spectral) {
    Thresholds th;
    th.R0F0 = r0_domain(params.h0, params, spectral).value;
    try {
        th.L0 = critical_length(params, spectral).L0;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoCriticalLength) throw;
    }
    return th;
}

double sup(const std::vector<double>& w) { return w.empty() ? 0.0 : *std::max_element(w.begin(), w.end()); }

void record_final(Evidence& ev, const Trajectory& traj) {
    const FrontSample& last = traj.history.back();
    ev.h_final = last.h;
    ev.hprime_final = last.hprime;
    ev.max_Ib_final = last.max_Ib;
    ev.max_Im_final = last.max_Im;
    ev.t_final = last.t;
    ev.stop = std::string(to_string(traj.stop));
}

Classification classify_with(const ModelParams& params, const InitialData& init, const ClassifyConfig& config,
                             const Thresholds& th) {
    Classification out;
    Evidence& ev = out.evidence;
    ev.R0F0 = th.R0F0;
    ev.L0 = th.L0;
    ev.eps_ext = config.eps_ext;
    ev.eps_front = config.eps_front_rel * params.h0 / params.period_T;
    ev.H_max = config.h_max_factor * std::max(params.h0, th.L0);
    ev.h_final = params.h0;
    ev.max_Ib_final = sup(init.Ib0);
    ev.max_Im_final = sup(init.Im0);
    ev.R0F_end = th.R0F0;
    ev.stop = "none";

    if (th.R0F0 >= 1.0 - config.r0_tol) {
        out.verdict = Verdict::Spreading;
        ev.criteria.emplace_back(kInitialRiskAboveOne);
        return out;
    }
    if (params.constant_coefficients() && r0_spatially_independent(params) <= 1.0) {
        out.verdict = Verdict::Vanishing;
        ev.criteria.emplace_back(kSubcriticalR0);
        return out;
    }

    SolverConfig sc = config.solver;
    sc.t_max = config.t_max_periods * params.period_T;
    sc.eps_ext = ev.eps_ext;
    sc.eps_front = ev.eps_front;
    // R0F(h) increases with h, so the risk index reaches 1 exactly when h
    // reaches L0. Without L0 only the H_max proxy is available.
    sc.H_max = th.L0 > 0.0 ? th.L0 : ev.H_max;
    sc.snapshot_stride = std::max(1, static_cast<int>(std::lround(params.period_T / sc.dt)));

    Trajectory traj = simulate(params, init, sc);
    for (int phase = 0; phase < 3; ++phase) {
        record_final(ev, traj);
        ev.t_max = sc.t_max;
        const bool persistent = ev.max_Ib_final + ev.max_Im_final >= ev.eps_ext;
        if (traj.stop == StopReason::FrontReachedHmax && persistent) {
            out.verdict = Verdict::Spreading;
            ev.criteria.emplace_back(th.L0 > 0.0 && sc.H_max == th.L0 ? kRiskIndexCrossed : kFrontReachedHmax);
            break;
        }
        if (traj.stop == StopReason::Extinct) {
            out.verdict = Verdict::Vanishing;
            ev.criteria.emplace_back(kStalledAndExtinct);
            break;
        }
        if (phase == 2) break;
        if (traj.stop == StopReason::FrontReachedHmax) {
            // Crossed L0 with vanishing norms: keep running against H_max.
            sc.H_max = ev.H_max;
        } else {
            sc.t_max = 2.0 * sc.t_max;
            ev.criteria.emplace_back(kHorizonDoubled);
        }
        traj = simulate_from(params, traj.snapshots.back(), sc);
    }
    ev.R0F_end = ev.h_final > params.h0 ? r0_domain(ev.h_final, params, config.spectral).value : th.R0F0;
    return out;
}

std::string describe(const std::vector<MuTrial>& trace) {
    std::ostringstream msg;
    msg << std::setprecision(6);
    for (const auto& trial : trace) msg << " mu=" << trial.mu << ":" << to_string(trial.verdict);
    return msg.str();
}

} // namespace

std::string_view to_string(Verdict verdict) noexcept {
    switch (verdict) {
    case Verdict::Vanishing: return "Vanishing";
    case Verdict::Spreading: return "Spreading";
    case Verdict::Undetermined: return "Undetermined";
    }
    return "Undetermined";
}

Classification classify_dynamics(const ModelParams& params, const InitialData& init, const ClassifyConfig& config) {
    return classify_with(params, init, config, spectral_thresholds(params, config.spectral));
}

EnergyReport energy_residual(const Trajectory& trajectory, const ModelParams& params) {
    const double beta = params.beta_b.constant_value();
    const double gamma = params.gamma_b.constant_value();
    EnergyReport rep;
    rep.k = gamma * params.N_b / (params.A_m * params.alpha_m * beta);
    rep.r0 = r0_spatially_independent(params);
    const double source = params.alpha_b * beta * (1.0 - 1.0 / (rep.r0 * rep.r0));
    const double front = params.D1 / params.mu;

    const auto& hist = trajectory.history;
    if (hist.empty()) return rep;
    auto lhs = [&](const FrontSample& s) { return s.int_Ib + rep.k * s.int_Im + front * s.h; };
    const double base = lhs(hist.front());
    double accumulated = 0.0;
    for (std::size_t j = 0; j < hist.size(); ++j) {
        if (j > 0) accumulated += 0.5 * (hist[j].t - hist[j - 1].t) * (hist[j].int_Im + hist[j - 1].int_Im);
        const double rhs = base + source * accumulated;
        const double r = std::max(0.0, lhs(hist[j]) - rhs) / std::abs(base);
        rep.t.push_back(hist[j].t);
        rep.residual.push_back(r);
        rep.max_residual = std::max(rep.max_residual, r);
    }
    rep.h_final = hist.back().h;
    rep.h_bound = rep.r0 <= 1.0
                      ? hist.front().h + (hist.front().int_Ib + rep.k * hist.front().int_Im) / front
                      : std::numeric_limits<double>::infinity();
    return rep;
}

CriticalMuResult critical_mu(const ModelParams& params, const InitialData& init, const CriticalMuConfig& config) {
    if (!(config.mu_lo > 0.0 && config.mu_hi > config.mu_lo))
        throw Error(ErrorCode::ConfigError, "critical_mu needs 0 < mu_lo < mu_hi");
    const Thresholds th = spectral_thresholds(params, config.classify.spectral);
    if (th.R0F0 >= 1.0 - config.classify.r0_tol) {
        std::ostringstream msg;
        msg << "R0F(0)=" << th.R0F0 << " >= 1: spreading for every mu";
        throw Error(ErrorCode::NotInBistableRegime, msg.str());
    }
    if (th.L0 <= 0.0) throw Error(ErrorCode::NotInBistableRegime, "no critical length: vanishing for every mu");

    CriticalMuResult res;
    auto oracle = [&](double mu) {
        ModelParams p = params;
        p.mu = mu;
        const Verdict v = classify_with(p, init, config.classify, th).verdict;
        res.trace.push_back({mu, v});
        return v;
    };

    if (oracle(config.mu_lo) != Verdict::Vanishing || oracle(config.mu_hi) != Verdict::Spreading)
        throw Error(ErrorCode::NotInBistableRegime, "bracket endpoints do not straddle the threshold:" +
                                                        describe(res.trace));

    double lo = config.mu_lo;
    double hi = config.mu_hi;
    while (hi - lo >= config.rel_width * hi) {
        const double mid = std::sqrt(lo * hi);
        const Verdict v = oracle(mid);
        if (v == Verdict::Vanishing) {
            lo = mid;
        } else if (v == Verdict::Spreading) {
            hi = mid;
        } else {
            throw Error(ErrorCode::InconsistentOracle, "classifier undecided during bisection:" + describe(res.trace));
        }
    }
    res.lo = lo;
    res.hi = hi;
    res.mu_star = 0.5 * (lo + hi);
    res.verdict_below = oracle(res.mu_star * (1.0 - config.recheck_factor));
    res.verdict_above = oracle(res.mu_star * (1.0 + config.recheck_factor));

    // No Spreading verdict may sit below a Vanishing one.
    double min_spreading = std::numeric_limits<double>::infinity();
    double max_vanishing = 0.0;
    for (const auto& trial : res.trace) {
        if (trial.verdict == Verdict::Spreading) min_spreading = std::min(min_spreading, trial.mu);
        if (trial.verdict == Verdict::Vanishing) max_vanishing = std::max(max_vanishing, trial.mu);
    }
    if (min_spreading < max_vanishing || res.verdict_below != Verdict::Vanishing ||
        res.verdict_above != Verdict::Spreading)
        throw Error(ErrorCode::InconsistentOracle, "verdicts not monotone in mu:" + describe(res.trace));
    return res;
}

SandwichReport attractor_sandwich_check(const ModelParams& params, const InitialData& init,
                                        const SandwichConfig& config) {
    if (!(config.window > 0.0) || config.envelope_l < config.window)
        throw Error(ErrorCode::ConfigError, "sandwich window must satisfy 0 < M <= envelope l");
    if (config.compare_periods < 1 || config.compare_periods > config.n_periods)
        throw Error(ErrorCode::ConfigError, "compare_periods must lie in [1, n_periods]");

    const PeriodicSolution lower = iterate_minimal(config.envelope_l, params, config.periodic);
    const PeriodicSolution upper = iterate_maximal(config.envelope_l, params, config.periodic);
    if (!lower.positive) throw Error(ErrorCode::PrerequisiteFailed, "envelope length does not exceed L0");

    const int S = lower.steps;
    SolverConfig sc;
    sc.n_cells = config.n_cells;
    sc.dt = params.period_T / S;
    sc.t_max = config.n_periods * params.period_T;
    sc.snapshot_stride = S;

    std::pair<double, double> endemic{-1.0, -1.0};
    if (params.constant_coefficients()) endemic = endemic_equilibrium(params);

    std::vector<int> nodes;
    for (int i = 0; i <= lower.n_cells && lower.x(i) <= config.window + 1e-12; ++i) nodes.push_back(i);

    SandwichReport rep;
    rep.worst_lower = std::numeric_limits<double>::infinity();
    rep.worst_upper = std::numeric_limits<double>::infinity();
    bool uncovered = false;
    const long long first = static_cast<long long>(config.n_periods - config.compare_periods) * S;
    auto observe = [&](const SimState& s) {
        const long long j = std::llround(s.t / sc.dt);
        if (j < first) return;
        if (s.h < config.envelope_l) {
            uncovered = true;
            return;
        }
        const int k = static_cast<int>(j % S);
        const int n = s.n_cells();
        for (int i : nodes) {
            const double x = lower.x(i);
            const double pos = std::min(x / s.h * n, static_cast<double>(n));
            const int c = std::min(static_cast<int>(pos), n - 1);
            const double w = pos - c;
            const double Ib = (1.0 - w) * s.u[c] + w * s.u[c + 1];
            const double Im = (1.0 - w) * s.v[c] + w * s.v[c + 1];
            rep.worst_lower = std::min({rep.worst_lower, Ib - lower.u(k, i), Im - lower.v(k, i)});
            rep.worst_upper = std::min({rep.worst_upper, upper.u(k, i) - Ib, upper.v(k, i) - Im});
            if (endemic.first >= 0.0 && x <= 0.5 * config.window + 1e-12)
                rep.max_dev_endemic =
                    std::max({rep.max_dev_endemic, std::abs(Ib - endemic.first), std::abs(Im - endemic.second)});
            ++rep.samples;
        }
    };
    const Trajectory traj = simulate(params, init, sc, observe);
    const FrontSample& last = traj.history.back();
    rep.h_final = last.h;
    if (last.max_Ib + last.max_Im < 1e-6)
        throw Error(ErrorCode::PrerequisiteFailed, "the run vanishes; no attractor to compare");
    if (uncovered || rep.samples == 0) {
        std::ostringstream msg;
        msg << "front does not cover the envelope domain l=" << config.envelope_l << " in the compared periods";
        throw Error(ErrorCode::PrerequisiteFailed, msg.str());
    }
    rep.lower_margin = rep.worst_lower + config.tol;
    rep.upper_margin = rep.worst_upper + config.tol;
    rep.holds = rep.lower_margin >= 0.0 && rep.upper_margin >= 0.0;
    return rep;
}

} // namespace wnv
