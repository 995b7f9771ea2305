#include "wnv/cli.hpp"

#include "wnv/error.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

namespace wnv {

namespace fs = std::filesystem;

namespace {

class Emitter {
public:
    explicit Emitter(fs::path dir) : dir_(std::move(dir)) {}

    std::ofstream open(const std::string& name) {
        const fs::path p = dir_ / name;
        std::ofstream out(p);
        if (!out) throw Error(ErrorCode::IoError, "cannot write " + p.string());
        files_.push_back(p);
        return out;
    }
    void write_json(const std::string& name, const json& doc) { open(name) << doc.dump(2) << '\n'; }

    [[nodiscard]] const std::vector<fs::path>& files() const noexcept { return files_; }

private:
    fs::path dir_;
    std::vector<fs::path> files_;
};

// Runs task(i) for i in [0, n) with at most `jobs` in flight; results keep
// the index order so outputs do not depend on scheduling.
template <class T, class F>
std::vector<T> fan_out(std::size_t n, int jobs, F task) {
    std::vector<T> out(n);
    const std::size_t width = static_cast<std::size_t>(std::max(1, jobs));
    for (std::size_t start = 0; start < n; start += width) {
        std::vector<std::future<T>> running;
        for (std::size_t i = start; i < std::min(n, start + width); ++i)
            running.push_back(std::async(width == 1 ? std::launch::deferred : std::launch::async, task, i));
        for (std::size_t i = 0; i < running.size(); ++i) out[start + i] = running[i].get();
    }
    return out;
}

std::string csv_escape(const std::string& s) {
    return s.find(',') == std::string::npos ? s : "\"" + s + "\"";
}

void run_simulate(const RunConfig& rc, const InitialData& init, Emitter& emit) {
    const Trajectory traj = simulate(rc.params, init, rc.solver);
    {
        auto out = emit.open("front.csv");
        write_front_csv(out, traj);
    }
    {
        auto out = emit.open("snapshots.csv");
        write_snapshot_csv(out, traj);
    }
    json summary = summary_json(traj);
    if (rc.params.constant_coefficients()) summary["energy"] = to_json(energy_residual(traj, rc.params));
    emit.write_json("summary.json", summary);
}

void run_risk_index(const RunConfig& rc, const InitialData& init, Emitter& emit) {
    const Trajectory traj = simulate(rc.params, init, rc.solver);
    // Every R0 evaluation is a full eigen-solve, so the history is thinned.
    const double spacing = rc.risk_sample_every * rc.params.period_T;
    std::vector<FrontPoint> front;
    for (const auto& s : traj.history)
        if (front.empty() || s.t >= front.back().t + spacing - 1e-9 * spacing) front.push_back({s.t, s.h});
    if (front.back().t < traj.history.back().t) front.push_back({traj.history.back().t, traj.history.back().h});
    const std::vector<RiskSample> risk = risk_index(front, rc.params, rc.spectral);
    {
        auto out = emit.open("risk.csv");
        write_risk_csv(out, risk);
    }
    bool increasing = true;
    for (std::size_t i = 1; i < risk.size(); ++i)
        if (risk[i].h > risk[i - 1].h && !(risk[i].R0F > risk[i - 1].R0F)) increasing = false;
    json summary = summary_json(traj);
    summary["R0F_start"] = risk.front().R0F;
    summary["R0F_end"] = risk.back().R0F;
    summary["R0F_increasing_where_h_grows"] = increasing;
    emit.write_json("summary.json", summary);
}

void run_r0(const RunConfig& rc, Emitter& emit) {
    const std::vector<double> bs = rc.r0_b.empty() ? std::vector<double>{rc.params.h0} : rc.r0_b;
    const auto results = fan_out<json>(bs.size(), rc.jobs, [&](std::size_t i) {
        return to_json(r0_domain(bs[i], rc.params, rc.spectral), bs[i], rc.params);
    });
    if (!rc.r0_list && results.size() == 1) {
        emit.write_json("r0.json", results.front());
    } else {
        emit.write_json("r0.json", {{"results", results}});
    }
}

void run_periodic(const RunConfig& rc, Emitter& emit) {
    std::vector<PeriodicSolution> minimal;
    std::vector<PeriodicSolution> maximal;
    json doc;
    if (rc.periodic_window > 0.0) {
        EnvelopePair env = halfline_envelope(rc.params, rc.periodic_l, rc.periodic_window, rc.periodic,
                                             rc.spectral, rc.jobs);
        minimal = std::move(env.minimal);
        maximal = std::move(env.maximal);
        doc["envelope"] = summary_json(env);
    } else {
        const std::size_t n = rc.periodic_l.size();
        auto both = fan_out<PeriodicSolution>(2 * n, rc.jobs, [&](std::size_t i) {
            return i % 2 == 0 ? iterate_minimal(rc.periodic_l[i / 2], rc.params, rc.periodic)
                              : iterate_maximal(rc.periodic_l[i / 2], rc.params, rc.periodic);
        });
        for (std::size_t i = 0; i < n; ++i) {
            minimal.push_back(std::move(both[2 * i]));
            maximal.push_back(std::move(both[2 * i + 1]));
        }
    }
    json solutions = json::array();
    for (std::size_t j = 0; j < minimal.size(); ++j) {
        for (const PeriodicSolution* s : {&minimal[j], &maximal[j]}) {
            const std::string name = "periodic_" + std::string(to_string(s->kind)) + "_" + std::to_string(j) + ".csv";
            auto out = emit.open(name);
            write_periodic_csv(out, *s);
            json entry = summary_json(*s);
            entry["file"] = name;
            solutions.push_back(entry);
        }
    }
    doc["solutions"] = solutions;
    emit.write_json("periodic.json", doc);
}

void run_sweep(const RunConfig& rc, Emitter& emit) {
    const auto& values = rc.sweep.values;
    const auto rows = fan_out<std::string>(values.size(), rc.jobs, [&](std::size_t i) {
        ModelParams p = rc.params;
        set_parameter(p, rc.sweep.parameter, values[i]);
        const InitialData init = make_initial_data(rc.init, p.h0);
        validate_params(p, init);
        std::ostringstream row;
        row << std::setprecision(17) << rc.sweep.parameter << ',' << values[i] << ',';
        if (rc.sweep.engine == "r0") {
            row << r0_domain(p.h0, p, rc.spectral).value;
        } else {
            const Classification c = classify_dynamics(p, init, rc.classify);
            std::string criteria;
            for (const auto& tag : c.evidence.criteria) criteria += (criteria.empty() ? "" : ";") + tag;
            const Evidence& e = c.evidence;
            row << to_string(c.verdict) << ',' << csv_escape(criteria) << ',' << e.R0F0 << ',' << e.R0F_end << ','
                << e.h_final << ',' << e.max_Ib_final << ',' << e.max_Im_final << ',' << e.stop;
        }
        return row.str();
    });
    auto out = emit.open("sweep.csv");
    out << (rc.sweep.engine == "r0" ? "parameter,value,R0F0\n"
                                    : "parameter,value,verdict,criteria,R0F0,R0F_end,h_final,max_Ib,max_Im,stop\n");
    for (const auto& row : rows) out << row << '\n';
}

void dispatch(const RunConfig& rc, Emitter& emit) {
    const InitialData init = make_initial_data(rc.init, rc.params.h0);
    validate_params(rc.params, init);
    const std::string& cmd = rc.command;
    if (cmd == "simulate") {
        run_simulate(rc, init, emit);
    } else if (cmd == "risk-index") {
        run_risk_index(rc, init, emit);
    } else if (cmd == "r0") {
        run_r0(rc, emit);
    } else if (cmd == "critical-length") {
        emit.write_json("critical_length.json", to_json(critical_length(rc.params, rc.spectral, rc.critical_b_max)));
    } else if (cmd == "periodic") {
        run_periodic(rc, emit);
    } else if (cmd == "classify") {
        emit.write_json("verdict.json", to_json(classify_dynamics(rc.params, init, rc.classify)));
    } else if (cmd == "critical-mu") {
        emit.write_json("critical_mu.json", to_json(critical_mu(rc.params, init, rc.critical_mu)));
    } else if (cmd == "sweep") {
        run_sweep(rc, emit);
    } else {
        throw Error(ErrorCode::ConfigError, "command: unknown command " + cmd);
    }
}

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

} // namespace

RunOutcome run(const RunConfig& config) {
    const std::string started = utc_now();
    const auto t0 = std::chrono::steady_clock::now();
    RunOutcome outcome;
    const fs::path dir = config.out_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        outcome.exit_code = 1;
        outcome.error_tag = std::string(to_string(ErrorCode::IoError));
        outcome.error_message = "cannot create " + dir.string() + ": " + ec.message();
        return outcome;
    }

    Emitter emit(dir);
    try {
        dispatch(config, emit);
    } catch (const Error& e) {
        outcome.exit_code = e.code() == ErrorCode::ConfigError ? 2 : 1;
        outcome.error_tag = std::string(to_string(e.code()));
        outcome.error_message = e.what();
    } catch (const std::exception& e) {
        outcome.exit_code = 1;
        outcome.error_tag = "InternalError";
        outcome.error_message = e.what();
    }
    outcome.outputs = emit.files();

    json outputs = json::array();
    for (const auto& f : outcome.outputs) {
        json entry = {{"file", f.filename().string()}};
        try {
            entry["sha256"] = sha256_file(f);
        } catch (const Error& e) {
            entry["sha256"] = nullptr;
        }
        outputs.push_back(entry);
    }
    json manifest = {{"tool", "wnv-frontier"},
                     {"version", kToolVersion},
                     {"command", config.command},
                     {"status", outcome.exit_code == 0 ? "ok" : "error"},
                     {"config", resolved_json(config)},
                     {"seeds", nullptr},
                     {"thresholds",
                      {{"undershoot_clamp_rel", 1e-10},
                       {"power_tol", config.spectral.power_tol},
                       {"root_tol", config.spectral.root_tol},
                       {"critical_tol", config.spectral.critical_tol},
                       {"periodic_tol", config.periodic.tol},
                       {"eps_ext", config.classify.eps_ext},
                       {"eps_front_rel", config.classify.eps_front_rel},
                       {"h_max_factor", config.classify.h_max_factor}}},
                     {"outputs", outputs}};
    if (outcome.exit_code != 0)
        manifest["error"] = {{"tag", outcome.error_tag}, {"message", outcome.error_message}};
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    manifest["timestamp"] = {{"started", started}, {"wall_seconds", wall}};

    outcome.manifest = dir / "manifest.json";
    std::ofstream out(outcome.manifest);
    if (!out) {
        outcome.exit_code = 1;
        outcome.error_tag = std::string(to_string(ErrorCode::IoError));
        outcome.error_message = "cannot write " + outcome.manifest.string();
        return outcome;
    }
    out << manifest.dump(2) << '\n';
    return outcome;
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Free-boundary West Nile virus model: simulation, thresholds and periodic attractors",
                 "wnv-frontier"};
    std::string command;
    std::string config_path;
    std::string out_dir;
    int jobs = 0;
    app.add_option("command", command, "Engine to run")->required()->check(CLI::IsMember(kCommands));
    app.add_option("--config", config_path, "JSON configuration file")->required();
    app.add_option("--out", out_dir, "Output directory (overrides the config's `out`)");
    app.add_option("--jobs", jobs, "Concurrent engine calls (default: available cores)")->check(CLI::PositiveNumber);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    RunConfig rc;
    try {
        rc = load_run_config(config_path, command);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == ErrorCode::ConfigError ? 2 : 1;
    }
    if (!out_dir.empty()) rc.out_dir = out_dir;
    if (jobs > 0) rc.jobs = jobs;
    if (rc.jobs <= 0) rc.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    const RunOutcome outcome = run(rc);
    if (outcome.exit_code != 0) std::cerr << "error: " << outcome.error_message << '\n';
    return outcome.exit_code;
}

} // namespace wnv
