#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "floqgap/floquet.hpp"
#include "floqgap/records.hpp"

namespace floqgap {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitPartial = 3 };

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    std::string command;
    std::vector<int> ns{6};
    bool n_explicit = false;  // cycles: ring size given
    std::vector<double> gammas;
    std::string pattern = "undoped";
    std::vector<int> ks;
    int realizations = 1;
    uint64_t seed = 0;
    GapMethod method = GapMethod::Auto;
    double tol = 1e-10;
    std::string out;  // empty: stdout
    bool resample_each_period = false;
    int w_max = 12;
    int64_t samples = 1000000;
    std::vector<std::string> gate_sets{"fixed"};
    int64_t max_periods = 200000;
    int window = 0;
    bool strong = false;
    int threads = 0;     // 0: hardware concurrency
    std::string report;  // cycles: optional text report path

    void validate() const;  // throws ConfigError
    std::string canonical() const;
    std::string hash() const { return hash_hex(canonical()); }
};

// "0.1,0.5,1" or "start:stop:step" (stop included up to rounding).
std::vector<double> parse_gamma_grid(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

// key=value lines, '#' comments, keys named like the long flags.
std::map<std::string, std::string> read_config_file(const std::string& path);
// Applies one key to the config; unknown keys are a ConfigError.
void apply_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

DopingPattern resolve_pattern(const RunConfig& cfg, int n);

struct CommandResult {
    std::vector<RunRecord> records;
    int failures = 0;
    std::string report;  // free text (cycle report)
    int exit_code() const { return failures ? kExitPartial : kExitOk; }
};

CommandResult cmd_gap(const RunConfig& cfg);
CommandResult cmd_orbits(const RunConfig& cfg);
CommandResult cmd_cycles(const RunConfig& cfg);
CommandResult cmd_weight_dist(const RunConfig& cfg);
CommandResult cmd_bounds(const RunConfig& cfg);
CommandResult cmd_haar_stats(const RunConfig& cfg);
CommandResult run_command(const RunConfig& cfg);

// Full command line: parse, merge config file under flags, run, write.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace floqgap
