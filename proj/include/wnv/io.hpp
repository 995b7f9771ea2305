#pragma once

#include "wnv/classify.hpp"
#include "wnv/fbm_solver.hpp"
#include "wnv/model.hpp"
#include "wnv/periodic.hpp"
#include "wnv/spectral.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace wnv {

using json = nlohmann::ordered_json;

/// How initial data are built; kept symbolic so sweeps over h0 rebuild it.
struct InitSpec {
    std::string type = "cosine"; // cosine | samples
    double amp_b = 0.5;
    double amp_m = 0.5;
    int samples = 201;
    double scale = 1.0;
    std::vector<double> Ib0; // type = samples
    std::vector<double> Im0;
};

InitialData make_initial_data(const InitSpec& spec, double h0);

struct SweepSpec {
    std::string parameter;
    std::vector<double> values;
    std::string engine = "classify"; // classify | r0
};

inline const std::vector<std::string> kCommands = {"simulate", "r0",       "risk-index", "critical-length",
                                                   "periodic", "classify", "critical-mu", "sweep"};

/// Everything a run consumes, with every default filled in.
struct RunConfig {
    std::string command;
    ModelParams params;
    std::string beta_table; // source paths of table-valued fields
    std::string gamma_table;
    InitSpec init;
    SolverConfig solver;
    SpectralConfig spectral;
    PeriodicConfig periodic;
    ClassifyConfig classify;
    CriticalMuConfig critical_mu; // its classify block mirrors `classify`
    std::vector<double> r0_b;     // r0: domain lengths (empty: h0)
    bool r0_list = false;         // r0.b given as a list
    double critical_b_max = 0.0;  // critical-length: 0 selects b_max_factor * h0
    double risk_sample_every = 1.0; // risk-index: spacing of evaluated front samples, in periods
    std::vector<double> periodic_l;
    double periodic_window = 0.0; // > 0: also build the envelope on [0, window]
    SweepSpec sweep;
    std::string out_dir = "out";
    int jobs = 1;
};

/// Parses a configuration document; `base_dir` resolves relative table
/// paths. Throws ConfigError naming the offending key path.
RunConfig parse_run_config(const json& doc, const std::string& command,
                           const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path, const std::string& command);

/// The fully resolved configuration (defaults included).
json resolved_json(const RunConfig& config);

/// Overrides a scalar ModelParams entry by name; beta_b/gamma_b set a
/// constant field or rescale a separable one. Throws ConfigError.
void set_parameter(ModelParams& params, const std::string& name, double value);
bool is_sweepable(const std::string& name);

json to_json(const EigenResult& eigen);
json to_json(const R0Result& r0, double b, const ModelParams& params);
json to_json(const CriticalLengthResult& result);
json to_json(const Classification& result);
json to_json(const CriticalMuResult& result);
json to_json(const EnergyReport& report);
json summary_json(const PeriodicSolution& solution);
json summary_json(const EnvelopePair& envelope);
json summary_json(const Trajectory& trajectory);

/// CSV `x,t,U,V`, 17 significant digits.
void write_periodic_csv(std::ostream& out, const PeriodicSolution& solution);
/// CSV `t,h,R0F`.
void write_risk_csv(std::ostream& out, const std::vector<RiskSample>& samples);

/// Lowercase hex SHA-256 of a file's bytes. Throws IoError.
std::string sha256_file(const std::filesystem::path& path);

} // namespace wnv
