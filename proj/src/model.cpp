#include "wnv/model.hpp"

#include "wnv/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace wnv {

namespace {

double reduce_time(double t, double period) {
    double r = std::fmod(t, period);
    if (r < 0.0) r += period;
    return r;
}

double profile_value(SpatialProfile profile, const ProfileParams& p, double x) {
    switch (profile) {
    case SpatialProfile::Flat:
        return 1.0;
    case SpatialProfile::CosineRamp:
        return 1.0 + p.amplitude * std::cos(std::numbers::pi * std::min(x / p.length, 1.0));
    case SpatialProfile::GaussianBump: {
        const double z = (x - p.center) / p.width;
        return 1.0 + p.amplitude * std::exp(-0.5 * z * z);
    }
    case SpatialProfile::ClampedLinear:
        return std::clamp(p.intercept + p.slope * x, p.lower, p.upper);
    }
    return 1.0;
}

FieldBounds profile_bounds(SpatialProfile profile, const ProfileParams& p) {
    switch (profile) {
    case SpatialProfile::Flat:
        return {1.0, 1.0};
    case SpatialProfile::CosineRamp:
        return {1.0 - std::abs(p.amplitude), 1.0 + std::abs(p.amplitude)};
    case SpatialProfile::GaussianBump: {
        // exp term ranges over (0, peak] on x >= 0; peak < 1 when the centre
        // lies left of the origin.
        const double z0 = p.center / p.width;
        const double peak = p.center >= 0.0 ? 1.0 : std::exp(-0.5 * z0 * z0);
        const double lo = 1.0 + std::min(0.0, p.amplitude * peak);
        const double hi = 1.0 + std::max(0.0, p.amplitude * peak);
        return {lo, hi};
    }
    case SpatialProfile::ClampedLinear: {
        const double at0 = std::clamp(p.intercept, p.lower, p.upper);
        if (p.slope > 0.0) return {at0, p.upper};
        if (p.slope < 0.0) return {p.lower, at0};
        return {at0, at0};
    }
    }
    return {1.0, 1.0};
}

std::size_t bracket_index(const std::vector<double>& nodes, double v) {
    // index i with nodes[i] <= v < nodes[i+1], clamped to valid intervals
    auto it = std::upper_bound(nodes.begin(), nodes.end(), v);
    std::size_t i = it == nodes.begin() ? 0 : static_cast<std::size_t>(it - nodes.begin()) - 1;
    return std::min(i, nodes.size() - 2);
}

double eval_table(const SampledTable& table, double x, double t) {
    const auto& xs = table.x_nodes;
    const auto& ts = table.t_nodes;

    const std::size_t j = bracket_index(ts, t);
    const double wt = std::clamp((t - ts[j]) / (ts[j + 1] - ts[j]), 0.0, 1.0);

    auto at_row = [&](std::size_t i) {
        return (1.0 - wt) * table.values[i][j] + wt * table.values[i][j + 1];
    };

    if (xs.size() == 1 || x <= xs.front()) return at_row(0);
    if (x >= xs.back()) return at_row(xs.size() - 1);
    const std::size_t i = bracket_index(xs, x);
    const double wx = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return (1.0 - wx) * at_row(i) + wx * at_row(i + 1);
}

void check_table_shape(const SampledTable& table, double period) {
    if (table.x_nodes.empty() || table.t_nodes.size() < 2)
        throw Error(ErrorCode::ConfigError, "coefficient table needs >= 1 x node and >= 2 t nodes");
    if (table.values.size() != table.x_nodes.size())
        throw Error(ErrorCode::ConfigError, "coefficient table row count does not match x_nodes");
    for (const auto& row : table.values)
        if (row.size() != table.t_nodes.size())
            throw Error(ErrorCode::ConfigError, "coefficient table column count does not match t_nodes");
    if (!std::is_sorted(table.x_nodes.begin(), table.x_nodes.end(), std::less_equal<>{}) && table.x_nodes.size() > 1)
        throw Error(ErrorCode::ConfigError, "coefficient table x_nodes must be strictly increasing");
    if (!std::is_sorted(table.t_nodes.begin(), table.t_nodes.end(), std::less_equal<>{}))
        throw Error(ErrorCode::ConfigError, "coefficient table t_nodes must be strictly increasing");
    const double scale = std::max(1.0, period);
    if (std::abs(table.t_nodes.front()) > 1e-12 * scale ||
        std::abs(table.t_nodes.back() - period) > 1e-12 * scale)
        throw Error(ErrorCode::PeriodicityViolation, "coefficient table t_nodes must span [0, T]");
    for (const auto& row : table.values) {
        const double a = row.front();
        const double b = row.back();
        if (std::abs(a - b) > 1e-12 * std::max(std::abs(a), std::abs(b)))
            throw Error(ErrorCode::PeriodicityViolation, "coefficient table values at t=0 and t=T differ");
    }
}

void check_field(const CoefficientField& field, const std::string& name, double period) {
    const double scale = std::max(1.0, period);
    if (std::abs(field.period() - period) > 1e-12 * scale)
        throw Error(ErrorCode::PeriodicityViolation, name + " period differs from period_T");

    if (const auto* sep = std::get_if<SeparableField>(&field.variant())) {
        if (!(sep->temporal_amplitude >= 0.0 && sep->temporal_amplitude < 1.0))
            throw Error(ErrorCode::PositivityViolation, name + " temporal amplitude must lie in [0, 1)");
        const auto& p = sep->spatial;
        if (sep->profile == SpatialProfile::CosineRamp && !(p.length > 0.0))
            throw Error(ErrorCode::PositivityViolation, name + " cosine ramp length must be > 0");
        if (sep->profile == SpatialProfile::GaussianBump && !(p.width > 0.0))
            throw Error(ErrorCode::PositivityViolation, name + " gaussian width must be > 0");
        if (sep->profile == SpatialProfile::ClampedLinear && !(p.lower <= p.upper))
            throw Error(ErrorCode::BoundViolation, name + " clamped linear needs lower <= upper");
    } else if (const auto* table = std::get_if<SampledTable>(&field.variant())) {
        check_table_shape(*table, period);
    }

    const FieldBounds bounds = field_bounds(field);
    if (!(bounds.min > 0.0))
        throw Error(ErrorCode::PositivityViolation, name + " lower bound is not positive");
    if (!std::isfinite(bounds.max))
        throw Error(ErrorCode::BoundViolation, name + " upper bound is not finite");
}

void check_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw Error(ErrorCode::PositivityViolation, std::string(name) + " must be positive");
}

void check_initial_component(const std::vector<double>& s, double cap, const char* name) {
    const std::size_t n = s.size();
    if (n < 3) throw Error(ErrorCode::BoundaryViolation, std::string(name) + " needs at least 3 samples");
    for (double v : s)
        if (!std::isfinite(v)) throw Error(ErrorCode::BoundViolation, std::string(name) + " has a non-finite sample");
    if (s.back() != 0.0)
        throw Error(ErrorCode::BoundaryViolation, std::string(name) + "(h0) must be 0");
    if (s.front() < 0.0)
        throw Error(ErrorCode::PositivityViolation, std::string(name) + "(0) must be nonnegative");
    if (s.front() > cap)
        throw Error(ErrorCode::BoundViolation, std::string(name) + "(0) exceeds its population cap");
    for (std::size_t j = 1; j + 1 < n; ++j) {
        if (!(s[j] > 0.0))
            throw Error(ErrorCode::PositivityViolation, std::string(name) + " must be positive inside (0, h0)");
        if (s[j] > cap)
            throw Error(ErrorCode::BoundViolation, std::string(name) + " exceeds its population cap");
    }
    // Zero slope at x = 0: the first difference may not exceed the local
    // curvature scale (a smooth profile with f'(0)=0 has s1-s0 ~ half the
    // second difference; a nonzero slope makes it O(dx) instead).
    const double first = std::abs(s[1] - s[0]);
    const double second = std::abs(s[2] - 2.0 * s[1] + s[0]);
    if (first > second + 1e-12 * std::max(cap, 1.0))
        throw Error(ErrorCode::BoundaryViolation, std::string(name) + " must have zero derivative at x=0");
}

} // namespace

CoefficientField::CoefficientField(Variant variant, double period)
    : variant_(std::move(variant)), period_(period) {}

CoefficientField CoefficientField::constant(double value, double period) {
    return CoefficientField(ConstantField{value}, period);
}

bool CoefficientField::is_constant() const noexcept {
    return std::holds_alternative<ConstantField>(variant_);
}

double CoefficientField::constant_value() const {
    if (const auto* c = std::get_if<ConstantField>(&variant_)) return c->value;
    throw Error(ErrorCode::NotConstantCoefficients, "coefficient field is not constant");
}

double CoefficientField::operator()(double x, double t) const {
    return std::visit(
        [&](const auto& f) -> double {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, ConstantField>) {
                return f.value;
            } else if constexpr (std::is_same_v<F, SeparableField>) {
                const double tau = reduce_time(t, period_);
                const double temporal =
                    1.0 + f.temporal_amplitude * std::cos(2.0 * std::numbers::pi * tau / period_ + f.phase);
                return f.base * profile_value(f.profile, f.spatial, x) * temporal;
            } else {
                return eval_table(f, x, reduce_time(t, period_));
            }
        },
        variant_);
}

double eval_coefficient(const CoefficientField& field, double x, double t) { return field(x, t); }

FieldBounds field_bounds(const CoefficientField& field) {
    return std::visit(
        [](const auto& f) -> FieldBounds {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, ConstantField>) {
                return {f.value, f.value};
            } else if constexpr (std::is_same_v<F, SeparableField>) {
                const FieldBounds p = profile_bounds(f.profile, f.spatial);
                const double lo_t = 1.0 - f.temporal_amplitude;
                const double hi_t = 1.0 + f.temporal_amplitude;
                const double a = f.base * p.min * lo_t;
                const double b = f.base * p.max * hi_t;
                return {std::min(a, b), std::max(a, b)};
            } else {
                FieldBounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
                for (const auto& row : f.values)
                    for (double v : row) {
                        b.min = std::min(b.min, v);
                        b.max = std::max(b.max, v);
                    }
                return b;
            }
        },
        field.variant());
}

SampledTable read_coefficient_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open coefficient table " + path);

    std::string line;
    std::getline(in, line);
    line.erase(std::remove_if(line.begin(), line.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }),
               line.end());
    if (line != "x,t,value") throw Error(ErrorCode::ConfigError, path + ": header must be x,t,value");

    std::map<std::pair<double, double>, double> entries;
    std::vector<double> xs;
    std::vector<double> ts;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double x = 0.0, t = 0.0, v = 0.0;
        if (!(row >> x >> t >> v))
            throw Error(ErrorCode::ConfigError, path + ": malformed row " + std::to_string(lineno));
        entries[{x, t}] = v;
        xs.push_back(x);
        ts.push_back(t);
    }
    auto unique_sorted = [](std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    unique_sorted(xs);
    unique_sorted(ts);

    SampledTable table;
    table.x_nodes = xs;
    table.t_nodes = ts;
    table.values.assign(xs.size(), std::vector<double>(ts.size(), 0.0));
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < ts.size(); ++j) {
            auto it = entries.find({xs[i], ts[j]});
            if (it == entries.end())
                throw Error(ErrorCode::ConfigError, path + ": table is missing a grid point");
            table.values[i][j] = it->second;
        }
    return table;
}

InitialData InitialData::cosine(double h0, double amp_b, double amp_m, int samples) {
    InitialData init;
    init.Ib0.resize(samples);
    init.Im0.resize(samples);
    for (int j = 0; j < samples; ++j) {
        const double x = h0 * j / (samples - 1);
        const double c = j == samples - 1 ? 0.0 : std::cos(std::numbers::pi * x / (2.0 * h0));
        init.Ib0[j] = amp_b * c;
        init.Im0[j] = amp_m * c;
    }
    return init;
}

InitialData InitialData::zero(int samples) {
    return InitialData{std::vector<double>(samples, 0.0), std::vector<double>(samples, 0.0)};
}

InitialData InitialData::scaled(double factor) const {
    InitialData out = *this;
    for (double& v : out.Ib0) v *= factor;
    for (double& v : out.Im0) v *= factor;
    return out;
}

Grid1D::Grid1D(int n, double lo, double hi) : n_cells(n), a(lo), b(hi) {
    if (n < 16) throw Error(ErrorCode::ConfigError, "grid needs at least 16 cells");
    if (!(hi > lo)) throw Error(ErrorCode::ConfigError, "grid endpoints must satisfy a < b");
}

ValidatedBundle validate_params(const ModelParams& params, const InitialData& init) {
    ValidatedBundle bundle{params, init, {}};

    check_positive(params.D1, "D1");
    check_positive(params.D2, "D2");
    check_positive(params.d_m, "d_m");
    check_positive(params.N_b, "N_b");
    check_positive(params.A_m, "A_m");
    check_positive(params.mu, "mu");
    check_positive(params.h0, "h0");
    check_positive(params.period_T, "period_T");

    auto check_probability = [&](double a, const char* name) {
        if (a == 0.0) {
            bundle.warnings.push_back(std::string(name) + " = 0 decouples the system (test-only configuration)");
            return;
        }
        if (!(a > 0.0)) throw Error(ErrorCode::PositivityViolation, std::string(name) + " must be positive");
        if (a > 1.0) throw Error(ErrorCode::BoundViolation, std::string(name) + " must not exceed 1");
    };
    check_probability(params.alpha_b, "alpha_b");
    check_probability(params.alpha_m, "alpha_m");

    check_field(params.beta_b, "beta_b", params.period_T);
    check_field(params.gamma_b, "gamma_b", params.period_T);

    if (init.Ib0.size() != init.Im0.size())
        throw Error(ErrorCode::BoundaryViolation, "Ib0 and Im0 must have the same number of samples");
    check_initial_component(init.Ib0, params.N_b, "Ib0");
    check_initial_component(init.Im0, params.A_m, "Im0");
    return bundle;
}

ModelParams canonical_params(double h0, double beta) {
    ModelParams p;
    p.D1 = 1.0;
    p.D2 = 1.0;
    p.alpha_b = 0.5;
    p.alpha_m = 0.5;
    p.d_m = 0.25;
    p.N_b = 1.0;
    p.A_m = 1.0;
    p.mu = 1.0;
    p.h0 = h0;
    p.period_T = 1.0;
    p.beta_b = CoefficientField::constant(beta, p.period_T);
    p.gamma_b = CoefficientField::constant(0.25, p.period_T);
    return p;
}

} // namespace wnv
