#include "aoipull/stochastic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace aoipull {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// splitmix64 output mix: bijective on 64-bit words.
constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_index) noexcept
    : seed_(seed),
      stream_index_(stream_index),
      state_(mix(seed ^ mix(stream_index ^ kGolden))) {}

std::uint64_t RandomStream::next_u64() noexcept {
    state_ += kGolden;
    return mix(state_);
}

double RandomStream::next_unit() noexcept {
    return double(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomStream::next_below(std::uint64_t bound) noexcept {
    // Lemire's multiply-shift reduction; the modulo bias is below 2^-64 per
    // draw and irrelevant for the bounds used here (subset sizes <= n).
    const unsigned __int128 product =
        static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(bound);
    return static_cast<std::uint64_t>(product >> 64);
}

void validate(const UpdateProcess& update) {
    if (!(update.lambda > 0.0) || !std::isfinite(update.lambda)) {
        throw std::invalid_argument("update rate lambda must be positive and finite, got " +
                                    std::to_string(update.lambda));
    }
}

void validate(const ResponseTimeModel& model) {
    std::visit(
        [](const auto& concrete) {
            using T = std::decay_t<decltype(concrete)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                if (!(concrete.mu > 0.0) || !std::isfinite(concrete.mu)) {
                    throw std::invalid_argument(
                        "exponential service rate mu must be positive and finite, got " +
                        std::to_string(concrete.mu));
                }
            } else if constexpr (std::is_same_v<T, Uniform>) {
                if (!(concrete.a >= 0.0) || !std::isfinite(concrete.a)) {
                    throw std::invalid_argument(
                        "uniform offset a must be nonnegative and finite, got " +
                        std::to_string(concrete.a));
                }
                if (!(concrete.h >= 0.0) || !std::isfinite(concrete.h)) {
                    throw std::invalid_argument(
                        "uniform width h must be nonnegative and finite, got " +
                        std::to_string(concrete.h));
                }
            } else {
                if (concrete.r < 1) {
                    throw std::invalid_argument("Erlang shape r must be at least 1, got " +
                                                std::to_string(concrete.r));
                }
                if (!(concrete.theta > 0.0) || !std::isfinite(concrete.theta)) {
                    throw std::invalid_argument(
                        "Erlang scale theta must be positive and finite, got " +
                        std::to_string(concrete.theta));
                }
            }
        },
        model);
}

double model_mean(const ResponseTimeModel& model) {
    validate(model);
    return std::visit(
        [](const auto& concrete) -> double {
            using T = std::decay_t<decltype(concrete)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                return 1.0 / concrete.mu;
            } else if constexpr (std::is_same_v<T, Uniform>) {
                return concrete.a + concrete.h / 2.0;
            } else {
                return double(concrete.r) * concrete.theta;
            }
        },
        model);
}

double sample_exponential(double rate, RandomStream& stream) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw std::invalid_argument("exponential rate must be positive and finite, got " +
                                    std::to_string(rate));
    }
    // Inverse CDF on [0, 1); log1p keeps precision for small draws and the
    // half-open unit interval keeps the result finite.
    return -std::log1p(-stream.next_unit()) / rate;
}

double sample_response(const ResponseTimeModel& model, RandomStream& stream) {
    validate(model);
    return std::visit(
        [&stream](const auto& concrete) -> double {
            using T = std::decay_t<decltype(concrete)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                return sample_exponential(concrete.mu, stream);
            } else if constexpr (std::is_same_v<T, Uniform>) {
                return concrete.a + concrete.h * stream.next_unit();
            } else {
                double total = 0.0;
                for (int stage = 0; stage < concrete.r; ++stage) {
                    total += -concrete.theta * std::log1p(-stream.next_unit());
                }
                return total;
            }
        },
        model);
}

double sample_age_memoryless(const UpdateProcess& update, RandomStream& stream) {
    validate(update);
    return sample_exponential(update.lambda, stream);
}

double sample_age_trajectory(const UpdateProcess& update, double horizon,
                             RandomStream& stream) {
    validate(update);
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw std::invalid_argument("trajectory horizon must be positive and finite, got " +
                                    std::to_string(horizon));
    }
    // Observation time uniform over the trajectory, then the gap back to the
    // most recent update.  The age is the smaller of the backward gap and the
    // elapsed time since the trajectory started.  Draw order is fixed (time
    // first, gap second) so each call consumes exactly two values.
    const double since_start = horizon * stream.next_unit();
    const double gap = sample_exponential(update.lambda, stream);
    return std::min(gap, since_start);
}

}  // namespace aoipull
