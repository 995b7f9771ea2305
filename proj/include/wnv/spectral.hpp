#pragma once

#include "wnv/model.hpp"

#include <map>
#include <vector>

namespace wnv {

struct SpectralConfig {
    int n_cells = 256;
    int steps_per_period = 512;
    double power_tol = 1e-9;      // relative change of rho and sup change of the iterate
    int max_power_iterations = 10000;
    double root_tol = 1e-8;       // |mu1| at the R0 root
    int max_bracket_steps = 12;   // factor-4 expansions from R = 1
    double critical_tol = 1e-6;   // |R0 - 1| at the critical length
    double b_max_factor = 64.0;   // half-line proxy: b_max = factor * h0
};

/// Principal eigenpair of the periodic-parabolic problem on [0,b) obtained
/// from the one-period solution map of the mu-free system.
struct EigenResult {
    double R = 0.0;
    double b = 0.0;
    double mu1 = 0.0;
    double rho = 0.0;     // exp(-mu1 T); may over/underflow, log_rho does not
    double log_rho = 0.0;
    std::vector<double> phi; // t = 0 slice, joint sup-norm 1
    std::vector<double> psi;
    int iterations = 0;
    double residual = 0.0;
};

struct R0Result {
    double value = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    int iterations = 0;      // bisection iterations
    double mu1_residual = 0.0; // mu1 at the returned root
    EigenResult eigen;       // eigenpair at the root
};

struct CriticalLengthResult {
    double L0 = 0.0;
    double r0_at_L0 = 0.0;
    double lambda0_at_L0 = 0.0;
    double b_max = 0.0;
    int iterations = 0;
};

/// Time-dependent principal eigenfunction over one period, sampled at
/// t_k = k T / S for k = 0..S; slices[k] holds (phi, psi) at node i.
struct PeriodicEigenfunction {
    double mu1 = 0.0;
    std::vector<std::vector<double>> phi;
    std::vector<std::vector<double>> psi;
};

/// Optional warm start for the power iteration (same node count).
struct EigenGuess {
    std::vector<double> phi;
    std::vector<double> psi;
};

EigenResult principal_eigenvalue(double R, double b, const ModelParams& params, const SpectralConfig& config,
                                 const EigenGuess* guess = nullptr);

R0Result r0_domain(double b, const ModelParams& params, const SpectralConfig& config);

/// Closed form for constant beta/gamma; throws NotConstantCoefficients.
double r0_closed_form(double b, const ModelParams& params);

/// b -> infinity limit of the closed form (spatially independent R0).
double r0_spatially_independent(const ModelParams& params);

/// mu1(1, [0,b)); its sign is the sign of 1 - R0([0,b)).
double lambda0(double b, const ModelParams& params, const SpectralConfig& config);

/// Domain length where R0([0,L0)) = 1; throws NoCriticalLength when
/// R0([0,b_max)) <= 1. b_max <= 0 selects b_max_factor * h0.
CriticalLengthResult critical_length(const ModelParams& params, const SpectralConfig& config, double b_max = 0.0);

PeriodicEigenfunction periodic_eigenfunction(const EigenResult& eigen, const ModelParams& params,
                                             const SpectralConfig& config);

struct RiskSample {
    double t = 0.0;
    double h = 0.0;
    double R0F = 0.0;
};

/// Caches R0([0,h)) by front position (relative tolerance on h).
class RiskIndex {
public:
    RiskIndex(ModelParams params, SpectralConfig config, double h_rel_tol = 1e-12);

    double operator()(double h);
    [[nodiscard]] std::size_t evaluations() const noexcept { return evaluations_; }

private:
    ModelParams params_;
    SpectralConfig config_;
    double tol_;
    std::map<double, double> cache_;
    std::size_t evaluations_ = 0;
};

struct FrontPoint {
    double t = 0.0;
    double h = 0.0;
};

std::vector<RiskSample> risk_index(const std::vector<FrontPoint>& front, const ModelParams& params,
                                   const SpectralConfig& config);

} // namespace wnv
