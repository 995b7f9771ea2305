#pragma once

#include "wnv/model.hpp"
#include "wnv/spectral.hpp"

#include <string_view>
#include <utility>
#include <vector>

namespace wnv {

struct PeriodicConfig {
    double nodes_per_unit = 64.0; // spatial resolution independent of l
    int steps_per_period = 512;
    double tol = 1e-8;            // sup change between consecutive iterates
    int max_outer = 1000;
    double monotone_tol = 1e-10;  // allowed reversal, relative to max(N_b, A_m)
};

enum class PeriodicKind { Minimal, Maximal };

std::string_view to_string(PeriodicKind kind) noexcept;

/// T-periodic solution on [0,l] x [0,T], stored as (S+1) time slices of
/// N+1 nodes. Minimal solutions carry zero Dirichlet data at x = l,
/// maximal ones carry (N_b, A_m).
struct PeriodicSolution {
    double l = 0.0;
    PeriodicKind kind = PeriodicKind::Minimal;
    int n_cells = 0;
    int steps = 0;
    double period = 1.0;
    std::vector<double> U; // slice-major: U[k * (N+1) + i]
    std::vector<double> V;
    int outer_iterations = 0;
    double residual = 0.0;            // sup distance of the last two iterates
    double periodicity_residual = 0.0; // sup |(U,V)(.,0) - (U,V)(.,T)|
    double K1 = 0.0;
    double K2 = 0.0;
    double delta = 0.0;    // scale of the eigenfunction start (Minimal only)
    bool positive = true;  // false: l <= L0, the zero solution is returned
    double mu1 = 0.0;      // mu1(1,[0,l)) used to decide positivity (Minimal only)

    [[nodiscard]] double dx() const noexcept { return l / n_cells; }
    [[nodiscard]] double x(int i) const noexcept { return i * dx(); }
    [[nodiscard]] double t(int k) const noexcept { return period * k / steps; }
    [[nodiscard]] double u(int k, int i) const { return U[static_cast<std::size_t>(k) * (n_cells + 1) + i]; }
    [[nodiscard]] double v(int k, int i) const { return V[static_cast<std::size_t>(k) * (n_cells + 1) + i]; }
    /// Linear interpolation in x within slice k.
    [[nodiscard]] double u_at(int k, double x) const;
    [[nodiscard]] double v_at(int k, double x) const;
    [[nodiscard]] double sup_U() const;
    [[nodiscard]] double sup_V() const;
};

struct ShiftConstants {
    double K1 = 0.0;
    double K2 = 0.0;
};

/// Shifts making the reaction pair nondecreasing in (U, V) on
/// [0,N_b] x [0,A_m]:
///   K1 = gamma_max + alpha_b beta_max (A_m/N_b + 1)
///   K2 = d_m + alpha_m beta_max (A_m/N_b + 1)
ShiftConstants shift_constants(const ModelParams& params);

/// Spatially homogeneous positive equilibrium (U*, V*) of the constant-
/// coefficient kinetics; (0, 0) when none exists. Throws
/// NotConstantCoefficients.
std::pair<double, double> endemic_equilibrium(const ModelParams& params);

int periodic_cells(double l, const PeriodicConfig& config);

PeriodicSolution iterate_minimal(double l, const ModelParams& params, const PeriodicConfig& config);
PeriodicSolution iterate_maximal(double l, const ModelParams& params, const PeriodicConfig& config);

/// One more shifted linear iteration from `current` (fixed-point check).
PeriodicSolution outer_iteration(const PeriodicSolution& current, const ModelParams& params);

struct EnvelopePair {
    std::vector<double> l_values;
    std::vector<PeriodicSolution> minimal;
    std::vector<PeriodicSolution> maximal;
    double window = 0.0;
    double L0 = 0.0;
    std::vector<double> gap; // sup over [0,M] x [0,T] of |Max - Min| per l
    // Largest violation of the trends along l on [0,M] (<= 0 means none).
    double minimal_decrease = 0.0;
    double maximal_increase = 0.0;
    double gap_increase = 0.0;
};

/// Minimal and maximal solutions for every l, compared on the window
/// [0, window]. Solutions for distinct l run on up to `jobs` threads.
/// L0 comes from `critical_length` with `spectral`; every l must exceed it.
EnvelopePair halfline_envelope(const ModelParams& params, const std::vector<double>& l_values, double window,
                               const PeriodicConfig& config, const SpectralConfig& spectral = {}, int jobs = 1);

} // namespace wnv
