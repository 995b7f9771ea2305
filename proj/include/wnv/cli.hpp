#pragma once

#include "wnv/io.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace wnv {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunOutcome {
    int exit_code = 0;                             // 0 ok, 1 engine error, 2 config error
    std::vector<std::filesystem::path> outputs;    // emitted files, manifest excluded
    std::filesystem::path manifest;
    std::string error_tag;                         // empty on success
    std::string error_message;
};

/// Dispatches a resolved configuration and writes its outputs plus
/// `manifest.json` into config.out_dir.
RunOutcome run(const RunConfig& config);

/// `wnv-frontier <command> --config <path> [--out <dir>] [--jobs N]`.
int run_cli(int argc, const char* const* argv);

} // namespace wnv
