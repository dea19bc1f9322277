#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace orchsim {

// Exit codes shared by all subcommands.
//   0  success
//   2  invalid input (scenario or trace problems, all listed on stderr)
//   3  internal simulation failure (an invariant tripped; this is a bug)
constexpr int k_exit_ok = 0;
constexpr int k_exit_invalid_input = 2;
constexpr int k_exit_sim_failure = 3;

// Output directory precedence: explicit flag, then ORCHESTRA_SIM_OUT, then
// ./out next to the caller.
std::string resolve_out_dir(const std::string& flag_value);

struct RunOptions {
    std::string scenario_path;
    std::optional<std::uint64_t> seed;  // overrides the scenario's seed
    std::string out_dir;                // already resolved
    bool write_trace = false;
};

// Runs one scenario and writes report.json, pending.csv and workers.csv
// (plus trace.jsonl on request) into <out_dir>/<scenario-name>/.
int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err);

struct CompareOptions {
    std::vector<std::string> scenario_paths;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
};

// Runs several scenarios (concurrently; each run is independently
// deterministic) and writes the side-by-side compare.csv / compare.json
// plus the per-run artifacts, with a summary table on stdout.
int cmd_compare(const CompareOptions& opt, std::ostream& out, std::ostream& err);

struct ValidateOptions {
    std::vector<std::string> scenario_paths;
};

// Parses and cross-checks scenarios without running them; lists every
// problem found, one per line, prefixed by its JSON path.
int cmd_validate(const ValidateOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace orchsim
