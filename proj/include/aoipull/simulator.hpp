#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "aoipull/analytic.hpp"

namespace aoipull {

enum class AgeMode {
    Memoryless,  // one Exp(lambda) draw per server
    Trajectory,  // Poisson trajectory on [0, T], T = horizon_factor/lambda
};

struct SimulationConfig {
    ReplicationScheme scheme;
    UpdateProcess update;
    ResponseTimeModel response;
    std::int64_t trials = 1000;
    std::uint64_t seed = 1;
    AgeMode age_mode = AgeMode::Memoryless;
    double horizon_factor = 1e6;
};

void validate(const SimulationConfig& config);

/// One simulated pull request.  Index j holds the (j+1)-th response to
/// arrive: sorted_responses is nondecreasing, responder_ages carries the
/// corresponding servers' ages, and aoi_curve[k-1] is the AoI the user
/// would see when stopping after k responses.
struct TrialOutcome {
    std::vector<double> sorted_responses;
    std::vector<double> responder_ages;
    std::vector<double> aoi_curve;
};

struct AoiEstimate {
    int k = 0;
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t trials = 0;
    std::optional<double> analytic;  // closed form when one exists
};

struct SampleStat {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Per-k aggregates over one batch of trials.  All trials share their draws
/// across k (common random numbers), so `step` -- the paired per-trial
/// difference aoi_curve[k] - aoi_curve[k-1] -- has much lower variance than
/// the difference of independent means.
struct SimulationResult {
    std::vector<AoiEstimate> estimates;  // k = 1..m
    std::vector<SampleStat> wait;        // sorted_responses[k-1]
    std::vector<SampleStat> min_age;     // prefix-min of responder_ages
    std::vector<SampleStat> step;        // size m-1
    std::int64_t trials = 0;
};

enum class CurveShape { Increasing, Decreasing, Unimodal, Flat, Ambiguous };

const char* to_string(CurveShape shape);

/// Deterministic given (config.seed, trial_index): sub-streams use
/// stream_index = 4*trial_index + {0: subset choice, 1: ages, 2: responses}.
TrialOutcome run_trial(const SimulationConfig& config, std::int64_t trial_index);

/// Runs config.trials independent trials and aggregates.  The result depends
/// only on the config, never on num_threads or scheduling: trials are summed
/// in fixed-size chunks and chunks are reduced in index order.
SimulationResult run_simulation(const SimulationConfig& config, int num_threads = 1);

std::vector<AoiEstimate> estimate_aoi(const SimulationConfig& config, int num_threads = 1);

/// Smallest k among entries whose mean is minimal.
int empirical_optimal_k(const std::vector<AoiEstimate>& estimates);

/// Classifies the mean AoI curve using the paired step statistics at a
/// 3-sigma significance gate.
CurveShape classify_curve(const SimulationResult& result);

}  // namespace aoipull
