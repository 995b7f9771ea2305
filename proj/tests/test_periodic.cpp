#include "support.hpp"

#include "wnv/fbm_solver.hpp"
#include "wnv/periodic.hpp"

#include <doctest.h>

using namespace wnv;
using wnv::testing::error_of;
using wnv::testing::pi;

namespace {

PeriodicConfig fast() {
    PeriodicConfig c;
    c.nodes_per_unit = 16.0;
    c.steps_per_period = 64;
    return c;
}

} // namespace

TEST_SUITE("periodic") {

TEST_CASE("shift constants and endemic equilibrium") {
    const ModelParams p = canonical_params(pi);
    const ShiftConstants k = shift_constants(p);
    CHECK(k.K1 == doctest::Approx(0.25 + 0.5 * 2.0));
    CHECK(k.K2 == doctest::Approx(0.25 + 0.5 * 2.0));
    const auto [u, v] = endemic_equilibrium(p);
    CHECK(u == doctest::Approx(0.5));
    CHECK(v == doctest::Approx(0.5));
    const auto [u0, v0] = endemic_equilibrium(canonical_params(pi, 0.25));
    CHECK(u0 == 0.0);
    CHECK(v0 == 0.0);
    std::mt19937_64 rng(2);
    CHECK(error_of([&] { endemic_equilibrium(testing::random_params(rng, 1)); }) ==
          ErrorCode::NotConstantCoefficients);
}

TEST_CASE("short domain gives the zero solution") {
    const PeriodicSolution s = iterate_minimal(pi / 2, canonical_params(pi), fast());
    CHECK_FALSE(s.positive);
    CHECK(s.mu1 > 0.0);
    CHECK(s.sup_U() == 0.0);
    CHECK(s.sup_V() == 0.0);
}

TEST_CASE("minimal and maximal solutions on a long domain") {
    const ModelParams p = canonical_params(2 * pi);
    const PeriodicConfig c = fast();
    const PeriodicSolution lo = iterate_minimal(2 * pi, p, c);
    const PeriodicSolution hi = iterate_maximal(2 * pi, p, c);
    REQUIRE(lo.positive);
    CHECK(lo.mu1 < 0.0);
    CHECK(lo.n_cells == periodic_cells(2 * pi, c));
    CHECK(lo.sup_U() > 0.0);
    CHECK(lo.sup_U() < 1.0);
    CHECK(lo.periodicity_residual <= c.tol);
    CHECK(hi.periodicity_residual <= c.tol);
    CHECK(lo.residual <= c.tol);
    const int n = lo.n_cells;
    for (int k = 0; k <= lo.steps; ++k) {
        CHECK(lo.u(k, n) == 0.0);
        CHECK(hi.u(k, n) == 1.0);
        CHECK(hi.v(k, n) == 1.0);
        for (int i = 0; i <= n; ++i) {
            CHECK(lo.u(k, i) >= 0.0);
            CHECK(lo.u(k, i) <= hi.u(k, i) + 1e-12);
            CHECK(lo.v(k, i) <= hi.v(k, i) + 1e-12);
            CHECK(hi.u(k, i) <= 1.0);
        }
    }

    // One more iteration moves nothing beyond the tolerance.
    for (const PeriodicSolution* s : {&lo, &hi}) {
        const PeriodicSolution again = outer_iteration(*s, p);
        double d = 0.0;
        for (std::size_t j = 0; j < s->U.size(); ++j) {
            d = std::max(d, std::abs(again.U[j] - s->U[j]));
            d = std::max(d, std::abs(again.V[j] - s->V[j]));
        }
        CHECK(d <= 2 * c.tol);
    }
}

TEST_CASE("heterogeneous coefficients stay ordered") {
    std::mt19937_64 rng(21);
    ModelParams p = testing::random_params(rng, 1);
    p.period_T = 1.0;
    p.beta_b = CoefficientField::constant(2.0, 1.0);
    SeparableField g;
    g.base = 0.2;
    g.profile = SpatialProfile::GaussianBump;
    g.spatial.amplitude = 0.3;
    g.spatial.center = 1.0;
    g.spatial.width = 0.5;
    g.temporal_amplitude = 0.3;
    p.gamma_b = CoefficientField(g, 1.0);
    const PeriodicConfig c = fast();
    const PeriodicSolution lo = iterate_minimal(8.0, p, c);
    const PeriodicSolution hi = iterate_maximal(8.0, p, c);
    REQUIRE(lo.positive);
    for (std::size_t j = 0; j < lo.U.size(); ++j) {
        CHECK(lo.U[j] <= hi.U[j] + 1e-12);
        CHECK(lo.V[j] <= hi.V[j] + 1e-12);
        CHECK(lo.U[j] >= 0.0);
    }
}

TEST_CASE("fixed-domain runs settle between the envelopes") {
    const double l = 2 * pi;
    const ModelParams p = canonical_params(l);
    PeriodicConfig c;
    c.nodes_per_unit = 64.0 / pi;
    c.steps_per_period = 64;
    const PeriodicSolution lo = iterate_minimal(l, p, c);
    const PeriodicSolution hi = iterate_maximal(l, p, c);
    REQUIRE(lo.n_cells == 128);

    SolverConfig sc;
    sc.n_cells = 128;
    sc.dt = 1.0 / 64;
    sc.t_max = 60.0;
    sc.fixed_front = true;
    sc.snapshot_stride = 64;
    const Trajectory traj = simulate(p, InitialData::cosine(l, 0.9, 0.9), sc);
    const SimState& end = traj.snapshots.back();
    REQUIRE(end.t == doctest::Approx(60.0));
    for (int i = 0; i <= 128; ++i) {
        CHECK(end.u[i] >= lo.u(0, i) - 1e-3);
        CHECK(end.u[i] <= hi.u(0, i) + 1e-3);
    }
}

TEST_CASE("envelope prerequisites") {
    const ModelParams p = canonical_params(pi);
    const PeriodicConfig c = fast();
    SpectralConfig sc;
    sc.n_cells = 64;
    sc.steps_per_period = 64;
    CHECK(error_of([&] { halfline_envelope(p, {2.0, 2 * pi}, 1.0, c, sc); }) == ErrorCode::PrerequisiteFailed);
    CHECK(error_of([&] { halfline_envelope(p, {2 * pi}, 8.0, c, sc); }) == ErrorCode::PrerequisiteFailed);
    CHECK(error_of([&] { halfline_envelope(canonical_params(pi, 0.25), {2 * pi}, 1.0, c, sc); }) ==
          ErrorCode::PrerequisiteFailed);
}

TEST_CASE("envelope trends along l") {
    const ModelParams p = canonical_params(pi);
    SpectralConfig sc;
    sc.n_cells = 64;
    sc.steps_per_period = 64;
    const EnvelopePair env = halfline_envelope(p, {2 * pi, 4 * pi}, pi, fast(), sc, 2);
    REQUIRE(env.gap.size() == 2);
    CHECK(env.gap[1] < env.gap[0]);
    CHECK(env.minimal_decrease <= 1e-8);
    CHECK(env.maximal_increase <= 1e-8);
    CHECK(env.L0 == doctest::Approx(pi).epsilon(1e-2));
}

}
