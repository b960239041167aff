#pragma once

// Command-line front end: parameter record, dispatch, JSON output and the
// on-disk cache for generating series.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace pearl::cli {

enum ExitCode : int {
    success = 0,
    verification_failure = 1,
    invalid_input = 2,
    resource_exceeded = 3,
};

struct RunConfig {
    std::string command;
    std::optional<int> d2;
    std::optional<int> g;
    std::optional<std::string> delta;       ///< "a,b,..."
    int max_degree = 11;
    std::optional<int> max_weight;          ///< default 4(d2+g-1)
    int guard = 5;                          ///< quasimod: coefficients checked after the solve
    std::optional<std::string> order;       ///< 1-based "Ω(1),...,Ω(n)"
    std::optional<std::string> leak;        ///< per-vertex leaking vector
    std::optional<std::string> multidegree; ///< "a_1,...,a_r"
    int chain_index = 0;                    ///< which enumerated chain
    bool normalized = true;
    bool orbits = true;
    bool refined = false;
    bool summary = false;                   ///< verify: aggregate only
    std::string input;                      ///< file, "-" for stdin
    std::string out;                        ///< file, empty for stdout
    std::string cache_dir;                  ///< empty: PEARL_CACHE_DIR or no cache
    int jobs = 0;                           ///< 0: OpenMP default
};

/// The parameters that determine the result, in a fixed layout. Paths,
/// parallelism and the cache location are excluded.
nlohmann::json canonical(const RunConfig& config);

/// Stable 64-bit FNV-1a hash of the canonical serialization, as 16 hex digits.
std::string cache_key(const RunConfig& config);

struct Outcome {
    int exit_code = success;
    std::string output;                ///< JSON document, newline terminated
    std::vector<std::string> warnings; ///< for stderr
    std::string error;                 ///< for stderr when exit_code != 0
};

/// Runs one command. Never throws; errors map to exit codes.
Outcome run(const RunConfig& config);

/// Parses argv, runs, writes the output (atomically when --out is given) and
/// returns the process exit code.
int main(int argc, char** argv);

} // namespace pearl::cli
