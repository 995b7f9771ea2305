#include "wnv/io.hpp"

#include "wnv/error.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

namespace wnv {

namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
    throw Error(ErrorCode::ConfigError, path + ": " + what);
}

// Read access to one JSON object that remembers which keys were used, so
// typos surface as errors instead of silently falling back to defaults.
class Block {
public:
    Block(const json* node, std::string path) : node_(node), path_(std::move(path)) {
        if (node_ && !node_->is_object()) config_error(path_, "expected an object");
    }

    [[nodiscard]] bool has(const std::string& key) const { return node_ && node_->contains(key); }
    [[nodiscard]] std::string key_path(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    const json* get(const std::string& key) {
        if (!has(key)) return nullptr;
        used_.insert(key);
        return &node_->at(key);
    }

    double number(const std::string& key, double fallback) {
        const json* v = get(key);
        return v ? as_number(*v, key_path(key)) : fallback;
    }
    double required_number(const std::string& key) {
        const json* v = get(key);
        if (!v) config_error(key_path(key), "missing required key");
        return as_number(*v, key_path(key));
    }
    int integer(const std::string& key, int fallback) {
        const json* v = get(key);
        if (!v) return fallback;
        if (!v->is_number_integer()) config_error(key_path(key), "expected an integer");
        return v->get<int>();
    }
    bool boolean(const std::string& key, bool fallback) {
        const json* v = get(key);
        if (!v) return fallback;
        if (!v->is_boolean()) config_error(key_path(key), "expected true or false");
        return v->get<bool>();
    }
    std::string string(const std::string& key, const std::string& fallback) {
        const json* v = get(key);
        if (!v) return fallback;
        if (!v->is_string()) config_error(key_path(key), "expected a string");
        return v->get<std::string>();
    }
    std::vector<double> numbers(const std::string& key) {
        const json* v = get(key);
        if (!v) return {};
        if (v->is_number()) return {as_number(*v, key_path(key))};
        if (!v->is_array()) config_error(key_path(key), "expected a number or a list of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v->size(); ++i)
            out.push_back(as_number((*v)[i], key_path(key) + "[" + std::to_string(i) + "]"));
        return out;
    }
    Block child(const std::string& key) { return Block(get(key), key_path(key)); }

    void finish() const {
        if (!node_) return;
        for (const auto& item : node_->items())
            if (!used_.count(item.key())) config_error(key_path(item.key()), "unknown key");
    }

private:
    static double as_number(const json& v, const std::string& path) {
        if (!v.is_number()) config_error(path, "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) config_error(path, "expected a finite number");
        return x;
    }

    const json* node_;
    std::string path_;
    std::set<std::string> used_;
};

const std::array<std::pair<SpatialProfile, const char*>, 4> kProfiles = {{
    {SpatialProfile::Flat, "flat"},
    {SpatialProfile::CosineRamp, "cosine_ramp"},
    {SpatialProfile::GaussianBump, "gaussian_bump"},
    {SpatialProfile::ClampedLinear, "clamped_linear"},
}};

// Table fields remember their source path for the resolved config.
struct FieldSource {
    std::string table_path;
};

CoefficientField parse_field(Block& parent, const std::string& key, double period,
                             const std::filesystem::path& base_dir, FieldSource& source) {
    const json* v = parent.get(key);
    const std::string path = parent.key_path(key);
    if (!v) config_error(path, "missing required key");
    if (v->is_number()) {
        const double x = v->get<double>();
        return CoefficientField::constant(x, period);
    }
    Block b(v, path);
    const std::string type = b.string("type", "");
    CoefficientField field;
    if (type == "constant") {
        field = CoefficientField::constant(b.required_number("value"), period);
    } else if (type == "separable") {
        SeparableField f;
        f.base = b.required_number("base");
        const std::string profile = b.string("profile", "flat");
        const auto it = std::find_if(kProfiles.begin(), kProfiles.end(),
                                     [&](const auto& p) { return profile == p.second; });
        if (it == kProfiles.end())
            config_error(b.key_path("profile"), "expected flat, cosine_ramp, gaussian_bump or clamped_linear");
        f.profile = it->first;
        f.spatial.amplitude = b.number("amplitude", f.spatial.amplitude);
        f.spatial.length = b.number("length", f.spatial.length);
        f.spatial.center = b.number("center", f.spatial.center);
        f.spatial.width = b.number("width", f.spatial.width);
        f.spatial.intercept = b.number("intercept", f.spatial.intercept);
        f.spatial.slope = b.number("slope", f.spatial.slope);
        f.spatial.lower = b.number("lower", f.spatial.lower);
        f.spatial.upper = b.number("upper", f.spatial.upper);
        f.temporal_amplitude = b.number("temporal_amplitude", f.temporal_amplitude);
        f.phase = b.number("phase", f.phase);
        field = CoefficientField(f, period);
    } else if (type == "table") {
        std::filesystem::path file = b.string("path", "");
        if (file.empty()) config_error(b.key_path("path"), "missing required key");
        if (file.is_relative()) file = base_dir / file;
        if (!std::filesystem::exists(file)) config_error(b.key_path("path"), "file not found: " + file.string());
        source.table_path = file.string();
        field = CoefficientField(read_coefficient_table(file.string()), period);
    } else {
        config_error(b.key_path("type"), "expected constant, separable or table");
    }
    b.finish();
    return field;
}

json field_json(const CoefficientField& field, const FieldSource& source) {
    if (const auto* c = std::get_if<ConstantField>(&field.variant()))
        return {{"type", "constant"}, {"value", c->value}};
    if (const auto* f = std::get_if<SeparableField>(&field.variant())) {
        const auto it = std::find_if(kProfiles.begin(), kProfiles.end(),
                                     [&](const auto& p) { return f->profile == p.first; });
        return {{"type", "separable"},
                {"base", f->base},
                {"profile", it->second},
                {"amplitude", f->spatial.amplitude},
                {"length", f->spatial.length},
                {"center", f->spatial.center},
                {"width", f->spatial.width},
                {"intercept", f->spatial.intercept},
                {"slope", f->spatial.slope},
                {"lower", f->spatial.lower},
                {"upper", f->spatial.upper},
                {"temporal_amplitude", f->temporal_amplitude},
                {"phase", f->phase}};
    }
    return {{"type", "table"}, {"path", source.table_path}};
}

template <class P>
auto& scalar_ref(P& p, const std::string& name) {
    if (name == "D1") return p.D1;
    if (name == "D2") return p.D2;
    if (name == "alpha_b") return p.alpha_b;
    if (name == "alpha_m") return p.alpha_m;
    if (name == "d_m") return p.d_m;
    if (name == "N_b") return p.N_b;
    if (name == "A_m") return p.A_m;
    if (name == "mu") return p.mu;
    if (name == "h0") return p.h0;
    if (name == "period_T") return p.period_T;
    throw Error(ErrorCode::ConfigError, "unknown parameter " + name);
}

const std::vector<std::string> kScalars = {"D1", "D2", "alpha_b", "alpha_m", "d_m",
                                           "N_b", "A_m", "mu", "h0", "period_T"};

void parse_solver(Block b, SolverConfig& s) {
    s.n_cells = b.integer("n_cells", s.n_cells);
    s.dt = b.number("dt", s.dt);
    s.t_max = b.number("t_max", s.t_max);
    s.snapshot_stride = b.integer("snapshot_stride", s.snapshot_stride);
    s.H_max = b.number("H_max", s.H_max);
    s.eps_ext = b.number("eps_ext", s.eps_ext);
    s.eps_front = b.number("eps_front", s.eps_front);
    s.fixed_front = b.boolean("fixed_front", s.fixed_front);
    b.finish();
    if (s.n_cells < 16) config_error(b.key_path("n_cells"), "must be >= 16");
    if (!(s.dt > 0.0)) config_error(b.key_path("dt"), "must be positive");
    if (!(s.t_max > 0.0)) config_error(b.key_path("t_max"), "must be positive");
    if (s.snapshot_stride < 1) config_error(b.key_path("snapshot_stride"), "must be >= 1");
}

json solver_json(const SolverConfig& s) {
    return {{"n_cells", s.n_cells},       {"dt", s.dt},           {"t_max", s.t_max},
            {"snapshot_stride", s.snapshot_stride}, {"H_max", s.H_max}, {"eps_ext", s.eps_ext},
            {"eps_front", s.eps_front},   {"fixed_front", s.fixed_front}};
}

void parse_spectral(Block b, SpectralConfig& s) {
    s.n_cells = b.integer("n_cells", s.n_cells);
    s.steps_per_period = b.integer("steps_per_period", s.steps_per_period);
    s.power_tol = b.number("power_tol", s.power_tol);
    s.max_power_iterations = b.integer("max_power_iterations", s.max_power_iterations);
    s.root_tol = b.number("root_tol", s.root_tol);
    s.max_bracket_steps = b.integer("max_bracket_steps", s.max_bracket_steps);
    s.critical_tol = b.number("critical_tol", s.critical_tol);
    s.b_max_factor = b.number("b_max_factor", s.b_max_factor);
    b.finish();
    if (s.n_cells < 16) config_error(b.key_path("n_cells"), "must be >= 16");
    if (s.steps_per_period < 1) config_error(b.key_path("steps_per_period"), "must be >= 1");
    if (!(s.power_tol > 0.0)) config_error(b.key_path("power_tol"), "must be positive");
    if (!(s.root_tol > 0.0)) config_error(b.key_path("root_tol"), "must be positive");
}

json spectral_json(const SpectralConfig& s) {
    return {{"n_cells", s.n_cells},
            {"steps_per_period", s.steps_per_period},
            {"power_tol", s.power_tol},
            {"max_power_iterations", s.max_power_iterations},
            {"root_tol", s.root_tol},
            {"max_bracket_steps", s.max_bracket_steps},
            {"critical_tol", s.critical_tol},
            {"b_max_factor", s.b_max_factor}};
}

} // namespace

InitialData make_initial_data(const InitSpec& spec, double h0) {
    InitialData init;
    if (spec.type == "samples") {
        init.Ib0 = spec.Ib0;
        init.Im0 = spec.Im0;
    } else {
        init = InitialData::cosine(h0, spec.amp_b, spec.amp_m, spec.samples);
    }
    return spec.scale == 1.0 ? init : init.scaled(spec.scale);
}

bool is_sweepable(const std::string& name) {
    return name == "beta_b" || name == "gamma_b" ||
           std::find(kScalars.begin(), kScalars.end(), name) != kScalars.end();
}

void set_parameter(ModelParams& params, const std::string& name, double value) {
    if (name == "beta_b" || name == "gamma_b") {
        CoefficientField& field = name == "beta_b" ? params.beta_b : params.gamma_b;
        if (auto* sep = std::get_if<SeparableField>(&field.variant())) {
            SeparableField f = *sep;
            f.base = value;
            field = CoefficientField(f, params.period_T);
        } else if (field.is_constant()) {
            field = CoefficientField::constant(value, params.period_T);
        } else {
            throw Error(ErrorCode::ConfigError, "sweep.parameter: " + name + " is a table and cannot be swept");
        }
        return;
    }
    scalar_ref(params, name) = value;
}

RunConfig parse_run_config(const json& doc, const std::string& command, const std::filesystem::path& base_dir) {
    if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end())
        config_error("command", "unknown command " + command);
    RunConfig rc;
    rc.command = command;
    Block root(&doc, "");

    Block p = root.child("params");
    if (!root.has("params")) config_error("params", "missing required key");
    for (const auto& name : kScalars) scalar_ref(rc.params, name) = p.required_number(name);
    FieldSource beta_source;
    FieldSource gamma_source;
    rc.params.beta_b = parse_field(p, "beta_b", rc.params.period_T, base_dir, beta_source);
    rc.params.gamma_b = parse_field(p, "gamma_b", rc.params.period_T, base_dir, gamma_source);
    rc.beta_table = beta_source.table_path;
    rc.gamma_table = gamma_source.table_path;
    p.finish();

    Block init = root.child("init");
    rc.init.type = init.string("type", rc.init.type);
    if (rc.init.type == "cosine") {
        rc.init.amp_b = init.number("amp_b", rc.init.amp_b);
        rc.init.amp_m = init.number("amp_m", rc.init.amp_m);
        rc.init.samples = init.integer("samples", rc.init.samples);
        if (rc.init.samples < 2) config_error(init.key_path("samples"), "must be >= 2");
    } else if (rc.init.type == "samples") {
        rc.init.Ib0 = init.numbers("Ib0");
        rc.init.Im0 = init.numbers("Im0");
        if (rc.init.Ib0.size() < 2) config_error(init.key_path("Ib0"), "needs at least 2 samples");
        if (rc.init.Im0.size() != rc.init.Ib0.size()) config_error(init.key_path("Im0"), "length differs from Ib0");
    } else {
        config_error(init.key_path("type"), "expected cosine or samples");
    }
    rc.init.scale = init.number("scale", rc.init.scale);
    init.finish();

    rc.solver.dt = std::min(rc.solver.dt, stable_dt(rc.params));
    parse_solver(root.child("solver"), rc.solver);
    parse_spectral(root.child("spectral"), rc.spectral);

    Block per = root.child("periodic");
    rc.periodic.nodes_per_unit = per.number("nodes_per_unit", rc.periodic.nodes_per_unit);
    rc.periodic.steps_per_period = per.integer("steps_per_period", rc.periodic.steps_per_period);
    rc.periodic.tol = per.number("tol", rc.periodic.tol);
    rc.periodic.max_outer = per.integer("max_outer", rc.periodic.max_outer);
    rc.periodic.monotone_tol = per.number("monotone_tol", rc.periodic.monotone_tol);
    rc.periodic_l = per.numbers("l");
    rc.periodic_window = per.number("window", rc.periodic_window);
    per.finish();
    if (!(rc.periodic.nodes_per_unit > 0.0)) config_error(per.key_path("nodes_per_unit"), "must be positive");
    for (double l : rc.periodic_l)
        if (!(l > 0.0)) config_error(per.key_path("l"), "lengths must be positive");

    Block cls = root.child("classify");
    rc.classify.solver.dt = std::min(rc.classify.solver.dt, stable_dt(rc.params));
    parse_solver(cls.child("solver"), rc.classify.solver);
    rc.classify.spectral = rc.spectral;
    rc.classify.t_max_periods = cls.number("t_max_periods", rc.classify.t_max_periods);
    rc.classify.h_max_factor = cls.number("h_max_factor", rc.classify.h_max_factor);
    rc.classify.eps_front_rel = cls.number("eps_front_rel", rc.classify.eps_front_rel);
    rc.classify.eps_ext = cls.number("eps_ext", rc.classify.eps_ext);
    rc.classify.r0_tol = cls.number("r0_tol", rc.classify.r0_tol);
    cls.finish();

    Block cm = root.child("critical_mu");
    rc.critical_mu.mu_lo = cm.number("mu_lo", rc.critical_mu.mu_lo);
    rc.critical_mu.mu_hi = cm.number("mu_hi", rc.critical_mu.mu_hi);
    rc.critical_mu.rel_width = cm.number("rel_width", rc.critical_mu.rel_width);
    rc.critical_mu.recheck_factor = cm.number("recheck_factor", rc.critical_mu.recheck_factor);
    rc.critical_mu.classify = rc.classify;
    cm.finish();
    if (!(rc.critical_mu.mu_lo > 0.0 && rc.critical_mu.mu_hi > rc.critical_mu.mu_lo))
        config_error("critical_mu", "need 0 < mu_lo < mu_hi");

    Block r0 = root.child("r0");
    rc.r0_list = r0.has("b") && r0.get("b")->is_array();
    rc.r0_b = r0.numbers("b");
    r0.finish();
    for (double b : rc.r0_b)
        if (!(b > 0.0)) config_error("r0.b", "domain lengths must be positive");

    Block risk = root.child("risk");
    rc.risk_sample_every = risk.number("sample_every", rc.risk_sample_every);
    risk.finish();
    if (!(rc.risk_sample_every > 0.0)) config_error("risk.sample_every", "must be positive");

    Block cl = root.child("critical_length");
    rc.critical_b_max = cl.number("b_max", rc.critical_b_max);
    cl.finish();

    Block sw = root.child("sweep");
    rc.sweep.parameter = sw.string("parameter", "");
    rc.sweep.values = sw.numbers("values");
    rc.sweep.engine = sw.string("engine", rc.sweep.engine);
    sw.finish();
    if (command == "sweep") {
        if (!is_sweepable(rc.sweep.parameter))
            config_error("sweep.parameter", "expected a ModelParams scalar or beta_b/gamma_b");
        if (rc.sweep.values.empty()) config_error("sweep.values", "needs at least one value");
        if (rc.sweep.engine != "classify" && rc.sweep.engine != "r0")
            config_error("sweep.engine", "expected classify or r0");
    }
    if (command == "periodic" && rc.periodic_l.empty()) config_error("periodic.l", "missing required key");

    rc.out_dir = root.string("out", rc.out_dir);
    rc.jobs = root.integer("jobs", 0);
    root.finish();
    return rc;
}

RunConfig load_run_config(const std::filesystem::path& path, const std::string& command) {
    std::ifstream in(path);
    if (!in) config_error("--config", "cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        config_error("--config", std::string("invalid JSON: ") + e.what());
    }
    return parse_run_config(doc, command, path.parent_path());
}

json resolved_json(const RunConfig& rc) {
    json params;
    for (const auto& name : kScalars) params[name] = scalar_ref(rc.params, name);
    params["beta_b"] = field_json(rc.params.beta_b, {rc.beta_table});
    params["gamma_b"] = field_json(rc.params.gamma_b, {rc.gamma_table});

    json init = {{"type", rc.init.type}};
    if (rc.init.type == "samples") {
        init["Ib0"] = rc.init.Ib0;
        init["Im0"] = rc.init.Im0;
    } else {
        init["amp_b"] = rc.init.amp_b;
        init["amp_m"] = rc.init.amp_m;
        init["samples"] = rc.init.samples;
    }
    init["scale"] = rc.init.scale;

    json classify = {{"solver", solver_json(rc.classify.solver)},
                     {"t_max_periods", rc.classify.t_max_periods},
                     {"h_max_factor", rc.classify.h_max_factor},
                     {"eps_front_rel", rc.classify.eps_front_rel},
                     {"eps_ext", rc.classify.eps_ext},
                     {"r0_tol", rc.classify.r0_tol}};

    return {{"command", rc.command},
            {"params", params},
            {"init", init},
            {"solver", solver_json(rc.solver)},
            {"spectral", spectral_json(rc.spectral)},
            {"periodic",
             {{"nodes_per_unit", rc.periodic.nodes_per_unit},
              {"steps_per_period", rc.periodic.steps_per_period},
              {"tol", rc.periodic.tol},
              {"max_outer", rc.periodic.max_outer},
              {"monotone_tol", rc.periodic.monotone_tol},
              {"l", rc.periodic_l},
              {"window", rc.periodic_window}}},
            {"classify", classify},
            {"critical_mu",
             {{"mu_lo", rc.critical_mu.mu_lo},
              {"mu_hi", rc.critical_mu.mu_hi},
              {"rel_width", rc.critical_mu.rel_width},
              {"recheck_factor", rc.critical_mu.recheck_factor}}},
            {"r0", {{"b", rc.r0_b}}},
            {"risk", {{"sample_every", rc.risk_sample_every}}},
            {"critical_length", {{"b_max", rc.critical_b_max}}},
            {"sweep", {{"parameter", rc.sweep.parameter}, {"values", rc.sweep.values}, {"engine", rc.sweep.engine}}},
            {"out", rc.out_dir},
            {"jobs", rc.jobs}};
}

json to_json(const EigenResult& e) {
    return {{"b", e.b},           {"R", e.R},
            {"mu1", e.mu1},       {"rho", e.rho},
            {"log_rho", e.log_rho}, {"iterations", e.iterations},
            {"residual", e.residual}};
}

json to_json(const R0Result& r, double b, const ModelParams& params) {
    json out = {{"b", b},
                {"value", r.value},
                {"bracket", {r.bracket_lo, r.bracket_hi}},
                {"iterations", r.iterations},
                {"mu1_residual", r.mu1_residual},
                {"eigen", to_json(r.eigen)}};
    if (params.constant_coefficients()) out["closed_form"] = r0_closed_form(b, params);
    return out;
}

json to_json(const CriticalLengthResult& r) {
    return {{"L0", r.L0},
            {"r0_at_L0", r.r0_at_L0},
            {"lambda0_at_L0", r.lambda0_at_L0},
            {"b_max", r.b_max},
            {"iterations", r.iterations}};
}

json to_json(const Classification& c) {
    const Evidence& e = c.evidence;
    return {{"verdict", to_string(c.verdict)},
            {"criteria", e.criteria},
            {"R0F0", e.R0F0},
            {"R0F_end", e.R0F_end},
            {"h_final", e.h_final},
            {"hprime_final", e.hprime_final},
            {"t_final", e.t_final},
            {"stop", e.stop},
            {"norms", {{"max_Ib", e.max_Ib_final}, {"max_Im", e.max_Im_final}}},
            {"L0", e.L0},
            {"thresholds",
             {{"H_max", e.H_max}, {"eps_front", e.eps_front}, {"eps_ext", e.eps_ext}, {"t_max", e.t_max}}}};
}

json to_json(const CriticalMuResult& r) {
    json trace = json::array();
    for (const auto& t : r.trace) trace.push_back({{"mu", t.mu}, {"verdict", to_string(t.verdict)}});
    return {{"mu_star", r.mu_star},
            {"bracket", {r.lo, r.hi}},
            {"verdict_below", to_string(r.verdict_below)},
            {"verdict_above", to_string(r.verdict_above)},
            {"trace", trace}};
}

json to_json(const EnergyReport& r) {
    return {{"k", r.k},
            {"r0", r.r0},
            {"max_residual", r.max_residual},
            {"h_bound", std::isfinite(r.h_bound) ? json(r.h_bound) : json(nullptr)},
            {"h_final", r.h_final}};
}

json summary_json(const PeriodicSolution& s) {
    return {{"l", s.l},
            {"kind", to_string(s.kind)},
            {"iterations", s.outer_iterations},
            {"residual", s.residual},
            {"periodicity_residual", s.periodicity_residual},
            {"sup_U", s.sup_U()},
            {"sup_V", s.sup_V()},
            {"positive", s.positive},
            {"K1", s.K1},
            {"K2", s.K2},
            {"delta", s.delta},
            {"n_cells", s.n_cells},
            {"steps_per_period", s.steps}};
}

json summary_json(const EnvelopePair& e) {
    json gaps = json::array();
    for (std::size_t j = 0; j < e.l_values.size(); ++j) gaps.push_back({{"l", e.l_values[j]}, {"gap", e.gap[j]}});
    bool unique = true;
    for (double g : e.gap) unique = unique && g < 1e-6;
    return {{"window", e.window},
            {"L0", e.L0},
            {"gap", gaps},
            {"minimal_decrease", e.minimal_decrease},
            {"maximal_increase", e.maximal_increase},
            {"gap_increase", e.gap_increase},
            {"numerically_unique", unique}};
}

json summary_json(const Trajectory& t) {
    const FrontSample& last = t.history.back();
    return {{"stop", to_string(t.stop)},
            {"t_final", last.t},
            {"h_final", last.h},
            {"hprime_final", last.hprime},
            {"max_hprime", t.max_hprime},
            {"max_Ib", last.max_Ib},
            {"max_Im", last.max_Im},
            {"steps", t.history.size() - 1},
            {"snapshots", t.snapshots.size()}};
}

void write_periodic_csv(std::ostream& out, const PeriodicSolution& s) {
    out << "x,t,U,V\n" << std::setprecision(17);
    for (int k = 0; k <= s.steps; ++k)
        for (int i = 0; i <= s.n_cells; ++i)
            out << s.x(i) << ',' << s.t(k) << ',' << s.u(k, i) << ',' << s.v(k, i) << '\n';
}

void write_risk_csv(std::ostream& out, const std::vector<RiskSample>& samples) {
    out << "t,h,R0F\n" << std::setprecision(17);
    for (const auto& r : samples) out << r.t << ',' << r.h << ',' << r.R0F << '\n';
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    std::array<char, 1 << 16> buf{};
    while (in.read(buf.data(), buf.size()) || in.gcount() > 0)
        EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md.data(), &len);
    EVP_MD_CTX_free(ctx);
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return hex.str();
}

} // namespace wnv
