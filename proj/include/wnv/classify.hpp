#pragma once

#include "wnv/fbm_solver.hpp"
#include "wnv/model.hpp"
#include "wnv/periodic.hpp"
#include "wnv/spectral.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace wnv {

enum class Verdict { Vanishing, Spreading, Undetermined };

std::string_view to_string(Verdict verdict) noexcept;

// Tags recorded in Evidence::criteria.
inline constexpr std::string_view kInitialRiskAboveOne = "initial_risk_index_ge_1";
inline constexpr std::string_view kSubcriticalR0 = "spatially_independent_r0_le_1";
inline constexpr std::string_view kRiskIndexCrossed = "risk_index_crossed_1";
inline constexpr std::string_view kFrontReachedHmax = "front_reached_H_max";
inline constexpr std::string_view kStalledAndExtinct = "front_stalled_and_extinct";
inline constexpr std::string_view kHorizonDoubled = "horizon_doubled";

struct ClassifyConfig {
    SolverConfig solver{128, 1.0 / 256.0};
    SpectralConfig spectral;
    double t_max_periods = 400.0; // first horizon, in periods; doubled once before Undetermined
    double h_max_factor = 16.0;   // H_max = factor * max(h0, L0)
    double eps_front_rel = 1e-8;  // eps_front = eps_front_rel * h0 / T
    double eps_ext = 1e-6;
    double r0_tol = 1e-6;
};

struct Evidence {
    double h_final = 0.0;
    double hprime_final = 0.0;
    double max_Ib_final = 0.0;
    double max_Im_final = 0.0;
    double t_final = 0.0;
    double R0F0 = 0.0;
    double R0F_end = 0.0;
    double L0 = 0.0;      // 0 when no critical length exists
    double H_max = 0.0;
    double eps_front = 0.0;
    double eps_ext = 0.0;
    double t_max = 0.0;   // last horizon used (0 when no simulation ran)
    std::string stop;     // solver stop reason, or "none"
    std::vector<std::string> criteria;
};

struct Classification {
    Verdict verdict = Verdict::Undetermined;
    Evidence evidence;
};

Classification classify_dynamics(const ModelParams& params, const InitialData& init, const ClassifyConfig& config);

struct EnergyReport {
    double k = 0.0;
    double r0 = 0.0;
    std::vector<double> t;
    std::vector<double> residual; // max(0, lhs - rhs) / |rhs(0)| per history sample
    double max_residual = 0.0;
    double h_bound = 0.0;         // implied bound on h_inf; infinity when r0 > 1
    double h_final = 0.0;
};

/// Integrated energy inequality along the stored history (trapezoid in x
/// and t). Throws NotConstantCoefficients.
EnergyReport energy_residual(const Trajectory& trajectory, const ModelParams& params);

struct CriticalMuConfig {
    double mu_lo = 1e-3;
    double mu_hi = 1e2;
    double rel_width = 0.01;    // stop once hi - lo < rel_width * hi
    double recheck_factor = 0.1;
    ClassifyConfig classify;
};

struct MuTrial {
    double mu = 0.0;
    Verdict verdict = Verdict::Undetermined;
};

struct CriticalMuResult {
    double mu_star = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    Verdict verdict_below = Verdict::Undetermined; // at mu_star * (1 - recheck_factor)
    Verdict verdict_above = Verdict::Undetermined; // at mu_star * (1 + recheck_factor)
    std::vector<MuTrial> trace;
};

/// Geometric bisection on mu with the classifier as oracle.
CriticalMuResult critical_mu(const ModelParams& params, const InitialData& init, const CriticalMuConfig& config);

struct SandwichConfig {
    double window = 3.141592653589793; // M
    int n_periods = 40;
    int compare_periods = 3;            // last periods compared
    double tol = 1e-2;
    // The minimal solution on [0,l] bounds the run from below only once the
    // front has covered l; h0 >= l makes that hold from the start.
    double envelope_l = 2.0 * 3.141592653589793;
    int n_cells = 512;
    PeriodicConfig periodic;
};

struct SandwichReport {
    double lower_margin = 0.0; // min over samples of I - (Minimal - tol); >= 0 means inside
    double upper_margin = 0.0; // min of (Maximal + tol) - I
    double worst_lower = 0.0;  // min of I - Minimal
    double worst_upper = 0.0;  // min of Maximal - I
    double max_dev_endemic = -1.0; // sup |I - endemic| on [0, M/2]; -1 without constant coefficients
    double h_final = 0.0;
    int samples = 0;
    bool holds = false;
};

SandwichReport attractor_sandwich_check(const ModelParams& params, const InitialData& init,
                                        const SandwichConfig& config);

} // namespace wnv
