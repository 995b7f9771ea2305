#pragma once

#include "wnv/error.hpp"
#include "wnv/fbm_solver.hpp"
#include "wnv/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>

namespace wnv::testing {

inline constexpr double pi = std::numbers::pi;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random valid parameter set; every other draw carries heterogeneous,
/// time-periodic beta and gamma.
inline ModelParams random_params(std::mt19937_64& rng, int draw) {
    ModelParams p;
    p.D1 = uniform(rng, 0.3, 2.0);
    p.D2 = uniform(rng, 0.3, 2.0);
    p.alpha_b = uniform(rng, 0.2, 0.9);
    p.alpha_m = uniform(rng, 0.2, 0.9);
    p.d_m = uniform(rng, 0.1, 0.5);
    p.N_b = uniform(rng, 0.5, 2.0);
    p.A_m = uniform(rng, 0.5, 3.0);
    p.mu = uniform(rng, 0.2, 3.0);
    p.h0 = uniform(rng, 1.0, 4.0);
    p.period_T = uniform(rng, 0.5, 2.0);
    const double beta = uniform(rng, 0.3, 2.0);
    const double gamma = uniform(rng, 0.1, 0.5);
    if (draw % 2 == 0) {
        p.beta_b = CoefficientField::constant(beta, p.period_T);
        p.gamma_b = CoefficientField::constant(gamma, p.period_T);
    } else {
        SeparableField b;
        b.base = beta;
        b.profile = SpatialProfile::CosineRamp;
        b.spatial.amplitude = uniform(rng, -0.5, 0.5);
        b.spatial.length = uniform(rng, 1.0, 8.0);
        b.temporal_amplitude = uniform(rng, 0.0, 0.6);
        b.phase = uniform(rng, 0.0, 2.0 * pi);
        p.beta_b = CoefficientField(b, p.period_T);
        SeparableField g;
        g.base = gamma;
        g.profile = SpatialProfile::GaussianBump;
        g.spatial.amplitude = uniform(rng, -0.4, 0.6);
        g.spatial.center = uniform(rng, 0.0, 4.0);
        g.spatial.width = uniform(rng, 0.3, 2.0);
        g.temporal_amplitude = uniform(rng, 0.0, 0.4);
        p.gamma_b = CoefficientField(g, p.period_T);
    }
    return p;
}

/// Four-point Lagrange interpolation of a front-fixed profile at physical
/// x (0 beyond the front). Mirror-extends across y = 0.
inline double profile_at(const SimState& s, const std::vector<double>& w, double x) {
    const int n = s.n_cells();
    if (x >= s.h) return 0.0;
    const double pos = x / s.h * n;
    const int c = std::clamp(static_cast<int>(std::floor(pos)), 0, n - 1);
    auto node = [&](int i) { return i < 0 ? w[-i] : (i > n ? 0.0 : w[i]); };
    int i0 = c - 1;
    if (c + 2 > n) i0 = n - 3;
    double sum = 0.0;
    for (int a = 0; a < 4; ++a) {
        double l = 1.0;
        for (int b = 0; b < 4; ++b)
            if (a != b) l *= (pos - (i0 + b)) / static_cast<double>(a - b);
        sum += l * node(i0 + a);
    }
    return sum;
}

/// Code of the wnv::Error thrown by f, if any.
template <class F>
std::optional<ErrorCode> error_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

} // namespace wnv::testing
