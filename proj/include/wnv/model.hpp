#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace wnv {

// ---------------------------------------------------------------------------
// Coefficient fields
// ---------------------------------------------------------------------------

enum class SpatialProfile {
    Flat,          // p(x) = 1
    CosineRamp,    // p(x) = 1 + a cos(pi min(x/L, 1)), |a| < 1
    GaussianBump,  // p(x) = 1 + a exp(-(x-c)^2 / (2 w^2)), a > -1
    ClampedLinear, // p(x) = clamp(p0 + s x, lo, hi), 0 < lo <= hi
};

/// Parameters of the spatial profile. Only the entries relevant to the
/// selected profile are read.
struct ProfileParams {
    double amplitude = 0.0; // a  (CosineRamp, GaussianBump)
    double length = 1.0;    // L  (CosineRamp)
    double center = 0.0;    // c  (GaussianBump)
    double width = 1.0;     // w  (GaussianBump)
    double intercept = 1.0; // p0 (ClampedLinear)
    double slope = 0.0;     // s  (ClampedLinear)
    double lower = 0.5;     // lo (ClampedLinear)
    double upper = 2.0;     // hi (ClampedLinear)
};

struct ConstantField {
    double value = 1.0;
};

/// base * p(x) * (1 + a_t cos(2 pi t / T + phase))
struct SeparableField {
    double base = 1.0;
    SpatialProfile profile = SpatialProfile::Flat;
    ProfileParams spatial;
    double temporal_amplitude = 0.0; // a_t in [0, 1)
    double phase = 0.0;
};

/// Values on a tensor grid; rows follow x_nodes, columns follow t_nodes.
/// t_nodes run from 0 to T inclusive and the first and last columns agree.
struct SampledTable {
    std::vector<double> x_nodes;
    std::vector<double> t_nodes;
    std::vector<std::vector<double>> values;
};

/// Positive, bounded, time-periodic coefficient c(x, t).
class CoefficientField {
public:
    using Variant = std::variant<ConstantField, SeparableField, SampledTable>;

    CoefficientField() = default;
    CoefficientField(Variant variant, double period);

    static CoefficientField constant(double value, double period = 1.0);

    [[nodiscard]] const Variant& variant() const noexcept { return variant_; }
    [[nodiscard]] double period() const noexcept { return period_; }
    [[nodiscard]] bool is_constant() const noexcept;
    /// Value of a Constant field; throws NotConstantCoefficients otherwise.
    [[nodiscard]] double constant_value() const;

    [[nodiscard]] double operator()(double x, double t) const;

private:
    Variant variant_ = ConstantField{};
    double period_ = 1.0;
};

double eval_coefficient(const CoefficientField& field, double x, double t);

struct FieldBounds {
    double min = 0.0;
    double max = 0.0;
};

/// Tight for Constant and Separable fields (infimum/supremum over x >= 0);
/// min/max of node values for tables.
FieldBounds field_bounds(const CoefficientField& field);

/// Loads a table from CSV with header `x,t,value` (rows in any order, but
/// covering the full tensor grid).
SampledTable read_coefficient_table(const std::string& path);

// ---------------------------------------------------------------------------
// Parameters, initial data, grids
// ---------------------------------------------------------------------------

struct ModelParams {
    double D1 = 1.0;
    double D2 = 1.0;
    double alpha_b = 0.5;
    double alpha_m = 0.5;
    double d_m = 0.25;
    double N_b = 1.0;
    double A_m = 1.0;
    double mu = 1.0;
    double h0 = 1.0;
    double period_T = 1.0;
    CoefficientField beta_b;
    CoefficientField gamma_b;

    [[nodiscard]] bool constant_coefficients() const noexcept {
        return beta_b.is_constant() && gamma_b.is_constant();
    }
};

/// Uniform samples x_j = j h0 / (n - 1), j = 0..n-1, of the initial
/// infected-bird and infected-mosquito densities.
struct InitialData {
    std::vector<double> Ib0;
    std::vector<double> Im0;

    /// Samples A cos(pi x / (2 h0)) for both densities.
    static InitialData cosine(double h0, double amp_b, double amp_m, int samples = 201);
    static InitialData zero(int samples = 201);
    [[nodiscard]] InitialData scaled(double factor) const;
};

struct Grid1D {
    int n_cells = 256;
    double a = 0.0;
    double b = 1.0;

    Grid1D() = default;
    Grid1D(int n_cells, double a, double b);

    [[nodiscard]] double spacing() const noexcept { return (b - a) / n_cells; }
    [[nodiscard]] int n_nodes() const noexcept { return n_cells + 1; }
    [[nodiscard]] double node(int i) const noexcept { return a + i * spacing(); }
};

struct ValidatedBundle {
    ModelParams params;
    InitialData init;
    std::vector<std::string> warnings;
};

/// Checks every standing assumption on parameters and initial data.
/// Throws wnv::Error naming the violated condition. Zero transmission
/// probabilities are accepted with a warning.
ValidatedBundle validate_params(const ModelParams& params, const InitialData& init);

/// The canonical constant-coefficient configuration used throughout the
/// test-suite: D1=D2=1, alpha=0.5, beta=1, gamma=0.25, d_m=0.25, N_b=A_m=1,
/// mu=1, T=1.
ModelParams canonical_params(double h0, double beta = 1.0);

} // namespace wnv
