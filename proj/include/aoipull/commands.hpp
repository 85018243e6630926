#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "aoipull/simulator.hpp"

namespace aoipull::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum class SweepAxis { Lambda, Mu, N };

const char* to_string(SweepAxis axis);

/// Parsed command-line / config-file options.  Exactly one response-time
/// family must be given: --mu (exponential), --a/--h (uniform), or
/// --r/--theta (Erlang).
struct Options {
    int n = 20;
    std::optional<int> m;  // fan-out; defaults to n
    std::optional<double> lambda;
    std::optional<double> mu;
    std::optional<double> a;
    std::optional<double> h;
    std::optional<int> r;
    std::optional<double> theta;
    std::int64_t trials = 1000;
    std::uint64_t seed = 1;
    AgeMode age_mode = AgeMode::Memoryless;
    double horizon_factor = 1e6;
    int threads = 1;
    std::optional<SweepAxis> axis;
    std::vector<double> axis_values;  // empty -> default grid for the axis
    bool empirical = false;           // sweep: also simulate per axis value
};

/// Validates the option set and assembles SystemParams (m defaulted to n,
/// scheme.k = m).  Throws std::invalid_argument on conflicts.
SystemParams make_params(const Options& options);

SimulationConfig make_simulation_config(const Options& options);

std::vector<double> default_axis_values(SweepAxis axis);

// Each command writes a complete CSV dataset: '#' comment lines carrying the
// tool version and the experiment parameters, a header row, then data rows.
// Identical options produce byte-identical output.
void run_analytic(const Options& options, std::ostream& out);
void run_optimal_k(const Options& options, std::ostream& out);
void run_simulate(const Options& options, std::ostream& out);
void run_sweep(const Options& options, std::ostream& out);

/// Shortest round-trip decimal rendering (used for every numeric CSV field).
std::string format_number(double value);

}  // namespace aoipull::cli
