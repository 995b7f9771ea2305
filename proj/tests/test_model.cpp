#include "support.hpp"

#include "wnv/model.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>

using namespace wnv;
using wnv::testing::error_of;
using wnv::testing::pi;

TEST_SUITE("model") {

TEST_CASE("canonical parameters validate") {
    const ModelParams p = canonical_params(pi / 2);
    const ValidatedBundle b = validate_params(p, InitialData::cosine(p.h0, 0.5, 0.5));
    CHECK(b.warnings.empty());
    CHECK(p.constant_coefficients());
}

TEST_CASE("validation errors name the violated condition") {
    ModelParams p = canonical_params(pi / 2);
    const InitialData init = InitialData::cosine(p.h0, 0.5, 0.5);

    ModelParams neg = p;
    neg.gamma_b = CoefficientField::constant(-0.1);
    CHECK(error_of([&] { validate_params(neg, init); }) == ErrorCode::PositivityViolation);

    InitialData open = init;
    open.Ib0.back() = 0.3;
    CHECK(error_of([&] { validate_params(p, open); }) == ErrorCode::BoundaryViolation);

    InitialData big = init.scaled(3.0);
    CHECK(error_of([&] { validate_params(p, big); }) == ErrorCode::BoundViolation);

    ModelParams d = p;
    d.D1 = 0.0;
    CHECK(error_of([&] { validate_params(d, init); }) == ErrorCode::PositivityViolation);

    ModelParams a = p;
    a.alpha_b = 1.5;
    CHECK(error_of([&] { validate_params(a, init); }) == ErrorCode::BoundViolation);

    ModelParams per = p;
    per.beta_b = CoefficientField::constant(1.0, 2.0);
    CHECK(error_of([&] { validate_params(per, init); }) == ErrorCode::PeriodicityViolation);

    // Nonzero slope at x = 0.
    InitialData slope = init;
    for (std::size_t j = 0; j < slope.Ib0.size(); ++j)
        slope.Ib0[j] = 0.5 * (1.0 - static_cast<double>(j) / (slope.Ib0.size() - 1));
    CHECK(error_of([&] { validate_params(p, slope); }) == ErrorCode::BoundaryViolation);
}

TEST_CASE("zero transmission is a warning") {
    ModelParams p = canonical_params(1.0);
    p.alpha_m = 0.0;
    const ValidatedBundle b = validate_params(p, InitialData::cosine(p.h0, 0.5, 0.5));
    CHECK(b.warnings.size() == 1);
}

TEST_CASE("coefficient evaluation") {
    CHECK(eval_coefficient(CoefficientField::constant(0.25), 3.0, 7.5) == 0.25);
    const FieldBounds cb = field_bounds(CoefficientField::constant(0.25));
    CHECK(cb.min == 0.25);
    CHECK(cb.max == 0.25);

    SeparableField s;
    s.base = 1.0;
    s.temporal_amplitude = 0.5;
    const CoefficientField f(s, 1.0);
    CHECK(f(0.0, 0.0) == doctest::Approx(1.5));
    CHECK(f(0.0, 0.5) == doctest::Approx(0.5));
    const FieldBounds fb = field_bounds(f);
    CHECK(fb.min == doctest::Approx(0.5));
    CHECK(fb.max == doctest::Approx(1.5));
    CHECK_THROWS_AS((void)f.constant_value(), Error);
}

TEST_CASE("fields stay inside their bounds and are periodic") {
    std::mt19937_64 rng(11);
    for (int draw = 0; draw < 20; ++draw) {
        const ModelParams p = testing::random_params(rng, 2 * draw + 1);
        for (const CoefficientField* f : {&p.beta_b, &p.gamma_b}) {
            const FieldBounds b = field_bounds(*f);
            for (int k = 0; k < 200; ++k) {
                const double x = testing::uniform(rng, 0.0, 30.0);
                const double t = testing::uniform(rng, 0.0, 5.0);
                const double v = (*f)(x, t);
                CHECK(v >= b.min * (1 - 1e-12));
                CHECK(v <= b.max * (1 + 1e-12));
                CHECK(std::abs((*f)(x, t + p.period_T) - v) <= 1e-12 * v);
            }
        }
    }
}

TEST_CASE("profile catalog") {
    SeparableField s;
    s.base = 2.0;
    s.profile = SpatialProfile::ClampedLinear;
    s.spatial.intercept = 1.0;
    s.spatial.slope = 0.5;
    s.spatial.lower = 0.5;
    s.spatial.upper = 2.0;
    const CoefficientField f(s, 1.0);
    CHECK(f(0.0, 0.0) == doctest::Approx(2.0));
    CHECK(f(10.0, 0.0) == doctest::Approx(4.0)); // clamped at upper
    const FieldBounds b = field_bounds(f);
    CHECK(b.min == doctest::Approx(2.0));
    CHECK(b.max == doctest::Approx(4.0));

    s.profile = SpatialProfile::GaussianBump;
    s.spatial.amplitude = 0.5;
    s.spatial.center = 1.0;
    s.spatial.width = 0.5;
    const CoefficientField g(s, 1.0);
    CHECK(g(1.0, 0.0) == doctest::Approx(3.0));
    CHECK(g(50.0, 0.0) == doctest::Approx(2.0));
}

TEST_CASE("sampled table: bilinear, periodic wrap, x extrapolation") {
    const std::string path = "wnv_test_table.csv";
    {
        std::ofstream out(path);
        out << "x,t,value\n";
        out << "0,0,0.2\n0,0.5,0.9\n0,1,0.2\n";
        out << "1,0,0.4\n1,0.5,0.4\n1,1,0.4\n";
    }
    const SampledTable table = read_coefficient_table(path);
    std::remove(path.c_str());
    const CoefficientField f(table, 1.0);
    CHECK(f(0.0, 0.25) == doctest::Approx(0.55));
    CHECK(f(0.5, 0.0) == doctest::Approx(0.3));
    CHECK(f(5.0, 0.3) == doctest::Approx(0.4));
    CHECK(f(0.0, 1.25) == doctest::Approx(f(0.0, 0.25)));
    const FieldBounds b = field_bounds(f);
    CHECK(b.min == doctest::Approx(0.2));
    CHECK(b.max == doctest::Approx(0.9));
}

TEST_CASE("table that breaks periodicity is rejected") {
    SampledTable t;
    t.x_nodes = {0.0, 1.0};
    t.t_nodes = {0.0, 1.0};
    t.values = {{1.0, 2.0}, {1.0, 1.0}};
    ModelParams p = canonical_params(1.0);
    p.beta_b = CoefficientField(t, 1.0);
    CHECK(error_of([&] { validate_params(p, InitialData::cosine(1.0, 0.5, 0.5)); }) ==
          ErrorCode::PeriodicityViolation);
}

TEST_CASE("grid") {
    const Grid1D g(32, 0.0, 2.0);
    CHECK(g.spacing() == doctest::Approx(1.0 / 16));
    CHECK(g.n_nodes() == 33);
    CHECK_THROWS_AS(Grid1D(8, 0.0, 1.0), Error);
}

}
