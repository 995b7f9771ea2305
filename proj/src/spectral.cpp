#include "wnv/spectral.hpp"

#include "wnv/error.hpp"
#include "wnv/imex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace wnv {

namespace {

double joint_sup(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    for (double v : b) m = std::max(m, std::abs(v));
    return m;
}

/// One-period solution map of
///   phi_t = D1 phi_xx - gamma phi + alpha_b beta psi / R
///   psi_t = D2 psi_xx - d_m psi + alpha_m beta A_m phi / (N_b R)
/// on [0,b] with zero flux at 0 and zero Dirichlet data at b.
class PeriodMap {
public:
    PeriodMap(double R, double b, const ModelParams& params, const SpectralConfig& config)
        : params_(params), n_(config.n_cells), steps_(config.steps_per_period), solver_(config.n_cells) {
        if (n_ < 16) throw Error(ErrorCode::ConfigError, "spectral grid needs at least 16 cells");
        if (steps_ < 1) throw Error(ErrorCode::ConfigError, "steps_per_period must be >= 1");
        dt_ = params.period_T / steps_;
        const double dx = b / n_;
        diff_phi_ = params.D1 / (dx * dx);
        diff_psi_ = params.D2 / (dx * dx);
        const std::size_t cells = static_cast<std::size_t>(n_);
        gamma_.resize(static_cast<std::size_t>(steps_) * cells);
        cross_phi_.resize(gamma_.size());
        cross_psi_.resize(gamma_.size());
        for (int k = 0; k < steps_; ++k) {
            const double t = k * dt_;
            for (int i = 0; i < n_; ++i) {
                const double x = i * dx;
                const double beta = params.beta_b(x, t);
                const std::size_t idx = static_cast<std::size_t>(k) * cells + static_cast<std::size_t>(i);
                gamma_[idx] = params.gamma_b(x, t);
                cross_phi_[idx] = params.alpha_b * beta / R;
                cross_psi_[idx] = params.alpha_m * beta * params.A_m / (params.N_b * R);
            }
        }
        rhs_phi_.assign(cells + 1, 0.0);
        rhs_psi_.assign(cells + 1, 0.0);
    }

    [[nodiscard]] int steps() const noexcept { return steps_; }

    /// Advances one step from slice k; returns the log of the rescaling
    /// applied to keep the joint sup norm at one.
    double step(int k, std::vector<double>& phi, std::vector<double>& psi) {
        const std::size_t base = static_cast<std::size_t>(k) * static_cast<std::size_t>(n_);
        for (int i = 0; i < n_; ++i) {
            const std::size_t idx = base + static_cast<std::size_t>(i);
            const double p = phi[i];
            const double q = psi[i];
            rhs_phi_[i] = p + dt_ * (-gamma_[idx] * p + cross_phi_[idx] * q);
            rhs_psi_[i] = q + dt_ * (-params_.d_m * q + cross_psi_[idx] * p);
        }
        rhs_phi_[n_] = 0.0;
        rhs_psi_[n_] = 0.0;
        solver_.solve({dt_, diff_phi_, 0.0, 0.0}, rhs_phi_, 0.0, phi);
        solver_.solve({dt_, diff_psi_, 0.0, 0.0}, rhs_psi_, 0.0, psi);

        const double s = joint_sup(phi, psi);
        if (!(s > 0.0) || !std::isfinite(s)) return std::numeric_limits<double>::quiet_NaN();
        const double inv = 1.0 / s;
        for (double& v : phi) v *= inv;
        for (double& v : psi) v *= inv;
        return std::log(s);
    }

    /// Applies the full period map in place; returns log of the growth.
    double apply(std::vector<double>& phi, std::vector<double>& psi) {
        double log_growth = 0.0;
        for (int k = 0; k < steps_; ++k) log_growth += step(k, phi, psi);
        return log_growth;
    }

private:
    const ModelParams& params_;
    int n_;
    int steps_;
    double dt_ = 0.0;
    double diff_phi_ = 0.0;
    double diff_psi_ = 0.0;
    std::vector<double> gamma_;
    std::vector<double> cross_phi_;
    std::vector<double> cross_psi_;
    std::vector<double> rhs_phi_;
    std::vector<double> rhs_psi_;
    ImplicitSolver solver_;
};

void require_positive_length(double b, const char* what) {
    if (!(b > 0.0) || !std::isfinite(b)) throw Error(ErrorCode::ConfigError, std::string(what) + " must be positive");
}

} // namespace

EigenResult principal_eigenvalue(double R, double b, const ModelParams& params, const SpectralConfig& config,
                                 const EigenGuess* guess) {
    if (!(R > 0.0)) throw Error(ErrorCode::ConfigError, "R must be positive");
    require_positive_length(b, "domain length b");

    PeriodMap map(R, b, params, config);
    const int n = config.n_cells;
    const std::size_t nodes = static_cast<std::size_t>(n) + 1;

    std::vector<double> phi(nodes);
    std::vector<double> psi(nodes);
    if (guess && guess->phi.size() == nodes && guess->psi.size() == nodes && joint_sup(guess->phi, guess->psi) > 0.0) {
        phi = guess->phi;
        psi = guess->psi;
        const double s = joint_sup(phi, psi);
        for (auto* w : {&phi, &psi})
            for (double& v : *w) v = std::abs(v) / s;
    } else {
        for (int i = 0; i < n; ++i) phi[i] = psi[i] = std::cos(0.5 * std::numbers::pi * i / n);
    }
    phi[n] = psi[n] = 0.0;

    EigenResult result;
    result.R = R;
    result.b = b;
    double prev_log = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> old_phi;
    std::vector<double> old_psi;
    for (int it = 1; it <= config.max_power_iterations; ++it) {
        old_phi = phi;
        old_psi = psi;
        const double log_growth = map.apply(phi, psi);
        if (!std::isfinite(log_growth)) {
            std::ostringstream msg;
            msg << "period map collapsed the iterate at R=" << R << ", b=" << b << " (grid too coarse?)";
            throw Error(ErrorCode::DegenerateMap, msg.str());
        }
        double dist = 0.0;
        for (std::size_t i = 0; i < nodes; ++i)
            dist = std::max({dist, std::abs(phi[i] - old_phi[i]), std::abs(psi[i] - old_psi[i])});
        const double rho_change = std::isfinite(prev_log) ? std::abs(std::expm1(log_growth - prev_log))
                                                          : std::numeric_limits<double>::infinity();
        prev_log = log_growth;
        result.iterations = it;
        result.residual = dist;
        if (rho_change < config.power_tol && dist < config.power_tol) {
            result.log_rho = log_growth;
            result.rho = std::exp(log_growth);
            result.mu1 = -log_growth / params.period_T;
            result.phi = std::move(phi);
            result.psi = std::move(psi);
            return result;
        }
    }
    std::ostringstream msg;
    msg << "power iteration did not converge at R=" << R << ", b=" << b << " after "
        << config.max_power_iterations << " iterations (residual " << result.residual << ")";
    throw Error(ErrorCode::NoConvergence, msg.str());
}

R0Result r0_domain(double b, const ModelParams& params, const SpectralConfig& config) {
    require_positive_length(b, "domain length b");

    EigenGuess warm;
    auto eval = [&](double R) {
        EigenResult e = principal_eigenvalue(R, b, params, config, warm.phi.empty() ? nullptr : &warm);
        warm.phi = e.phi;
        warm.psi = e.psi;
        return e;
    };

    R0Result out;
    EigenResult at_one = eval(1.0);
    if (std::abs(at_one.mu1) < config.root_tol) {
        out.value = 1.0;
        out.bracket_lo = out.bracket_hi = 1.0;
        out.mu1_residual = at_one.mu1;
        out.eigen = std::move(at_one);
        return out;
    }

    // mu1 is increasing in R: find lo with mu1 < 0 and hi with mu1 > 0.
    double lo = 1.0;
    double hi = 1.0;
    std::vector<std::pair<double, double>> seen{{1.0, at_one.mu1}};
    bool found = false;
    if (at_one.mu1 > 0.0) {
        for (int k = 0; k < config.max_bracket_steps && !found; ++k) {
            hi = lo;
            lo /= 4.0;
            const double m = eval(lo).mu1;
            seen.emplace_back(lo, m);
            found = m < 0.0;
            if (std::abs(m) < config.root_tol) {
                hi = lo;
                found = true;
            }
        }
    } else {
        for (int k = 0; k < config.max_bracket_steps && !found; ++k) {
            lo = hi;
            hi *= 4.0;
            const double m = eval(hi).mu1;
            seen.emplace_back(hi, m);
            found = m > 0.0;
            if (std::abs(m) < config.root_tol) {
                lo = hi;
                found = true;
            }
        }
    }
    if (!found) {
        std::ostringstream msg;
        msg << "mu1(R) keeps one sign on b=" << b << ":";
        for (const auto& [R, m] : seen) msg << " mu1(" << R << ")=" << m;
        throw Error(ErrorCode::BracketFailure, msg.str());
    }
    out.bracket_lo = lo;
    out.bracket_hi = hi;

    if (lo == hi) {
        EigenResult e = eval(lo);
        out.value = lo;
        out.mu1_residual = e.mu1;
        out.eigen = std::move(e);
        return out;
    }

    for (int it = 1; it <= 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        EigenResult e = eval(mid);
        out.iterations = it;
        if (std::abs(e.mu1) < config.root_tol || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
            out.value = mid;
            out.mu1_residual = e.mu1;
            out.eigen = std::move(e);
            return out;
        }
        (e.mu1 < 0.0 ? lo : hi) = mid;
    }
    throw Error(ErrorCode::NoConvergence, "R0 bisection exhausted its iteration budget");
}

double r0_closed_form(double b, const ModelParams& params) {
    const double beta = params.beta_b.constant_value();
    const double gamma = params.gamma_b.constant_value();
    const double q = std::numbers::pi / (2.0 * b);
    const double num = params.A_m * params.alpha_b * params.alpha_m * beta * beta;
    const double den = params.N_b * (params.D1 * q * q + gamma) * (params.D2 * q * q + params.d_m);
    return std::sqrt(num / den);
}

double r0_spatially_independent(const ModelParams& params) {
    const double beta = params.beta_b.constant_value();
    const double gamma = params.gamma_b.constant_value();
    return std::sqrt(params.A_m * params.alpha_b * params.alpha_m * beta * beta / (params.N_b * gamma * params.d_m));
}

double lambda0(double b, const ModelParams& params, const SpectralConfig& config) {
    return principal_eigenvalue(1.0, b, params, config).mu1;
}

CriticalLengthResult critical_length(const ModelParams& params, const SpectralConfig& config, double b_max) {
    if (b_max <= 0.0) b_max = config.b_max_factor * params.h0;
    require_positive_length(b_max, "b_max");

    // Bisection on lambda0(b) = mu1(1, [0,b)), whose sign is that of
    // 1 - R0([0,b)) and which decreases in b.
    EigenGuess warm;
    auto lam = [&](double b) {
        EigenResult e = principal_eigenvalue(1.0, b, params, config, warm.phi.empty() ? nullptr : &warm);
        warm.phi = e.phi;
        warm.psi = e.psi;
        return e.mu1;
    };

    CriticalLengthResult out;
    out.b_max = b_max;
    const double lam_max = lam(b_max);
    if (lam_max >= 0.0) {
        std::ostringstream msg;
        msg << "R0([0," << b_max << ")) <= 1 (lambda0=" << lam_max << "); no bounded domain sustains the infection";
        throw Error(ErrorCode::NoCriticalLength, msg.str());
    }

    double hi = b_max;
    double lo = b_max;
    bool found = false;
    for (int k = 0; k < 60 && !found; ++k) {
        hi = lo;
        lo *= 0.5;
        found = lam(lo) > 0.0;
    }
    if (!found) throw Error(ErrorCode::BracketFailure, "could not find a domain length with R0 < 1");

    double mid = 0.5 * (lo + hi);
    double m = 0.0;
    for (int it = 1; it <= 200; ++it) {
        mid = 0.5 * (lo + hi);
        m = lam(mid);
        out.iterations = it;
        if (m == 0.0 || hi - lo <= 1e-10 * hi) break;
        (m > 0.0 ? lo : hi) = mid;
    }
    out.L0 = mid;
    out.lambda0_at_L0 = m;
    out.r0_at_L0 = r0_domain(mid, params, config).value;
    return out;
}

PeriodicEigenfunction periodic_eigenfunction(const EigenResult& eigen, const ModelParams& params,
                                             const SpectralConfig& config) {
    PeriodMap map(eigen.R, eigen.b, params, config);
    const int steps = map.steps();
    const double dt = params.period_T / steps;

    PeriodicEigenfunction out;
    out.mu1 = eigen.mu1;
    out.phi.resize(static_cast<std::size_t>(steps) + 1);
    out.psi.resize(static_cast<std::size_t>(steps) + 1);

    std::vector<double> phi = eigen.phi;
    std::vector<double> psi = eigen.psi;
    double log_scale = 0.0;
    std::vector<double> log_weight(static_cast<std::size_t>(steps) + 1, 0.0);
    out.phi[0] = phi;
    out.psi[0] = psi;
    for (int k = 0; k < steps; ++k) {
        log_scale += map.step(k, phi, psi);
        out.phi[k + 1] = phi;
        out.psi[k + 1] = psi;
        // e^{mu1 t} times the evolved (unscaled) solution
        log_weight[k + 1] = log_scale + eigen.mu1 * (k + 1) * dt;
    }
    double top = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= steps; ++k) top = std::max(top, log_weight[k] + std::log(joint_sup(out.phi[k], out.psi[k])));
    for (int k = 0; k <= steps; ++k) {
        const double w = std::exp(log_weight[k] - top);
        for (double& v : out.phi[k]) v *= w;
        for (double& v : out.psi[k]) v *= w;
    }
    return out;
}

RiskIndex::RiskIndex(ModelParams params, SpectralConfig config, double h_rel_tol)
    : params_(std::move(params)), config_(config), tol_(h_rel_tol) {}

double RiskIndex::operator()(double h) {
    auto it = cache_.lower_bound(h * (1.0 - tol_));
    if (it != cache_.end() && it->first <= h * (1.0 + tol_)) return it->second;
    const double value = r0_domain(h, params_, config_).value;
    ++evaluations_;
    cache_.emplace(h, value);
    return value;
}

std::vector<RiskSample> risk_index(const std::vector<FrontPoint>& front, const ModelParams& params,
                                   const SpectralConfig& config) {
    RiskIndex index(params, config);
    std::vector<RiskSample> out;
    out.reserve(front.size());
    for (const auto& p : front) {
        require_positive_length(p.h, "front position");
        out.push_back({p.t, p.h, index(p.h)});
    }
    return out;
}

} // namespace wnv
