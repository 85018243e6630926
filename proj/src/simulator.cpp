#include "aoipull/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

namespace aoipull {

namespace {

// Trials are aggregated in fixed-size chunks and the chunk partials are
// reduced in index order, so totals are bitwise independent of the thread
// count and of scheduling.
constexpr std::int64_t kChunkTrials = 1024;

struct ChunkSums {
    std::vector<double> aoi_sum, aoi_sq;
    std::vector<double> wait_sum, wait_sq;
    std::vector<double> age_sum, age_sq;
    std::vector<double> step_sum, step_sq;

    explicit ChunkSums(int m)
        : aoi_sum(m, 0.0),
          aoi_sq(m, 0.0),
          wait_sum(m, 0.0),
          wait_sq(m, 0.0),
          age_sum(m, 0.0),
          age_sq(m, 0.0),
          step_sum(m > 0 ? m - 1 : 0, 0.0),
          step_sq(m > 0 ? m - 1 : 0, 0.0) {}
};

void accumulate(ChunkSums& sums, const TrialOutcome& outcome) {
    const int m = static_cast<int>(outcome.aoi_curve.size());
    double prefix_min = outcome.responder_ages.empty() ? 0.0 : outcome.responder_ages[0];
    for (int j = 0; j < m; ++j) {
        prefix_min = std::min(prefix_min, outcome.responder_ages[j]);
        const double aoi = outcome.aoi_curve[j];
        const double wait = outcome.sorted_responses[j];
        sums.aoi_sum[j] += aoi;
        sums.aoi_sq[j] += aoi * aoi;
        sums.wait_sum[j] += wait;
        sums.wait_sq[j] += wait * wait;
        sums.age_sum[j] += prefix_min;
        sums.age_sq[j] += prefix_min * prefix_min;
        if (j > 0) {
            const double step = aoi - outcome.aoi_curve[j - 1];
            sums.step_sum[j - 1] += step;
            sums.step_sq[j - 1] += step * step;
        }
    }
}

SampleStat finish(double sum, double sum_sq, std::int64_t count) {
    SampleStat stat;
    stat.mean = sum / double(count);
    if (count > 1) {
        const double scatter = std::max(sum_sq - sum * stat.mean, 0.0);
        stat.std_error = std::sqrt(scatter / double(count - 1) / double(count));
    }
    return stat;
}

}  // namespace

void validate(const SimulationConfig& config) {
    validate(config.scheme);
    validate(config.update);
    validate(config.response);
    if (!(config.horizon_factor > 0.0) || !std::isfinite(config.horizon_factor)) {
        throw std::invalid_argument("horizon_factor must be positive and finite, got " +
                                    std::to_string(config.horizon_factor));
    }
    if (config.trials < 1) {
        throw std::domain_error("trials must be >= 1, got " +
                                std::to_string(config.trials));
    }
}

const char* to_string(CurveShape shape) {
    switch (shape) {
        case CurveShape::Increasing: return "increasing";
        case CurveShape::Decreasing: return "decreasing";
        case CurveShape::Unimodal: return "unimodal";
        case CurveShape::Flat: return "flat";
        case CurveShape::Ambiguous: break;
    }
    return "ambiguous";
}

TrialOutcome run_trial(const SimulationConfig& config, std::int64_t trial_index) {
    const int n = config.scheme.n;
    const int m = config.scheme.m;
    const std::uint64_t base = 4 * static_cast<std::uint64_t>(trial_index);
    RandomStream subset_stream(config.seed, base + 0);
    RandomStream age_stream(config.seed, base + 1);
    RandomStream response_stream(config.seed, base + 2);

    // Choose the contacted subset by partial Fisher-Yates.  Servers are
    // exchangeable, so the identities are not recorded, but the draws keep
    // the subset stream's consumption well defined (none when m == n).
    if (m < n) {
        std::vector<int> pool(n);
        std::iota(pool.begin(), pool.end(), 0);
        for (int j = 0; j < m; ++j) {
            const std::uint64_t pick =
                j + subset_stream.next_below(static_cast<std::uint64_t>(n - j));
            std::swap(pool[j], pool[pick]);
        }
    }

    std::vector<double> ages(m);
    for (int j = 0; j < m; ++j) {
        ages[j] = config.age_mode == AgeMode::Memoryless
                      ? sample_age_memoryless(config.update, age_stream)
                      : sample_age_trajectory(config.update,
                                              config.horizon_factor / config.update.lambda,
                                              age_stream);
    }

    std::vector<std::pair<double, int>> responses(m);
    for (int j = 0; j < m; ++j) {
        responses[j] = {sample_response(config.response, response_stream), j};
    }
    std::sort(responses.begin(), responses.end());

    TrialOutcome outcome;
    outcome.sorted_responses.resize(m);
    outcome.responder_ages.resize(m);
    outcome.aoi_curve.resize(m);
    double freshest = ages[responses[0].second];
    for (int j = 0; j < m; ++j) {
        const double age = ages[responses[j].second];
        freshest = std::min(freshest, age);
        outcome.sorted_responses[j] = responses[j].first;
        outcome.responder_ages[j] = age;
        // AoI when stopping after j+1 responses: the (j+1)-th arrival time
        // plus the age of the freshest responder so far.
        outcome.aoi_curve[j] = responses[j].first + freshest;
    }
    return outcome;
}

SimulationResult run_simulation(const SimulationConfig& config, int num_threads) {
    validate(config);
    const int m = config.scheme.m;
    const std::int64_t trials = config.trials;
    const std::int64_t num_chunks = (trials + kChunkTrials - 1) / kChunkTrials;

    std::vector<ChunkSums> partials(static_cast<std::size_t>(num_chunks), ChunkSums(m));
    std::atomic<std::int64_t> next_chunk{0};
    auto worker = [&] {
        for (;;) {
            const std::int64_t chunk = next_chunk.fetch_add(1, std::memory_order_relaxed);
            if (chunk >= num_chunks) {
                return;
            }
            const std::int64_t begin = chunk * kChunkTrials;
            const std::int64_t end = std::min(begin + kChunkTrials, trials);
            ChunkSums& sums = partials[static_cast<std::size_t>(chunk)];
            for (std::int64_t trial = begin; trial < end; ++trial) {
                accumulate(sums, run_trial(config, trial));
            }
        }
    };

    const int workers = static_cast<int>(
        std::clamp<std::int64_t>(num_threads, 1, num_chunks));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(workers);
        for (int i = 0; i < workers; ++i) {
            threads.emplace_back(worker);
        }
        for (auto& thread : threads) {
            thread.join();
        }
    }

    ChunkSums total(m);
    for (const ChunkSums& part : partials) {
        for (int j = 0; j < m; ++j) {
            total.aoi_sum[j] += part.aoi_sum[j];
            total.aoi_sq[j] += part.aoi_sq[j];
            total.wait_sum[j] += part.wait_sum[j];
            total.wait_sq[j] += part.wait_sq[j];
            total.age_sum[j] += part.age_sum[j];
            total.age_sq[j] += part.age_sq[j];
        }
        for (int j = 0; j + 1 < m; ++j) {
            total.step_sum[j] += part.step_sum[j];
            total.step_sq[j] += part.step_sq[j];
        }
    }

    const SystemParams params{config.scheme, config.update, config.response};
    SimulationResult result;
    result.trials = trials;
    result.estimates.resize(m);
    result.wait.resize(m);
    result.min_age.resize(m);
    result.step.resize(m > 0 ? m - 1 : 0);
    for (int j = 0; j < m; ++j) {
        const SampleStat aoi = finish(total.aoi_sum[j], total.aoi_sq[j], trials);
        AoiEstimate& est = result.estimates[j];
        est.k = j + 1;
        est.mean = aoi.mean;
        est.std_error = aoi.std_error;
        est.trials = trials;
        est.analytic = closed_form_aoi(params, j + 1);
        result.wait[j] = finish(total.wait_sum[j], total.wait_sq[j], trials);
        result.min_age[j] = finish(total.age_sum[j], total.age_sq[j], trials);
        if (j + 1 < m) {
            result.step[j] = finish(total.step_sum[j], total.step_sq[j], trials);
        }
    }
    return result;
}

std::vector<AoiEstimate> estimate_aoi(const SimulationConfig& config, int num_threads) {
    return run_simulation(config, num_threads).estimates;
}

int empirical_optimal_k(const std::vector<AoiEstimate>& estimates) {
    if (estimates.empty()) {
        throw std::domain_error("empirical_optimal_k: no estimates given");
    }
    const AoiEstimate* best = &estimates.front();
    for (const AoiEstimate& est : estimates) {
        if (est.mean < best->mean) {
            best = &est;
        }
    }
    return best->k;
}

CurveShape classify_curve(const SimulationResult& result) {
    int first_rise = -1;
    int last_fall = -1;
    int rises = 0;
    int falls = 0;
    for (int j = 0; j < static_cast<int>(result.step.size()); ++j) {
        const SampleStat& step = result.step[j];
        if (step.mean > 3.0 * step.std_error) {
            if (first_rise < 0) {
                first_rise = j;
            }
            ++rises;
        } else if (step.mean < -3.0 * step.std_error) {
            last_fall = j;
            ++falls;
        }
    }
    if (rises == 0 && falls == 0) {
        return CurveShape::Flat;
    }
    if (falls == 0) {
        return CurveShape::Increasing;
    }
    if (rises == 0) {
        return CurveShape::Decreasing;
    }
    return last_fall < first_rise ? CurveShape::Unimodal : CurveShape::Ambiguous;
}

}  // namespace aoipull
