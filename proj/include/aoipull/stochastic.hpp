#pragma once

#include <cstdint>
#include <variant>

namespace aoipull {

/// Deterministic counter-based random stream (splitmix64).
///
/// A stream is identified by (seed, stream_index) and produces the same
/// sample sequence on every platform.  The initial state is derived as
///
///     state0 = mix(seed ^ mix(stream_index ^ 0x9E3779B97F4A7C15))
///
/// where mix is the splitmix64 finalizer; this rule is part of the public
/// contract so results can be reproduced by independent implementations.
/// Streams with distinct indices occupy well-separated offsets of the
/// 2^64-period splitmix64 cycle.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_index) noexcept;

    std::uint64_t next_u64() noexcept;

    /// Uniform double in [0, 1) with 53-bit resolution.
    double next_unit() noexcept;

    /// Uniform integer in [0, bound); bound must be nonzero.
    std::uint64_t next_below(std::uint64_t bound) noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_index() const noexcept { return stream_index_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_index_;
    std::uint64_t state_;
};

/// Poisson update model: each server receives fresh data at rate lambda > 0.
struct UpdateProcess {
    double lambda;
};

struct Exponential {
    double mu;  // rate; mean response time is 1/mu
};

struct Uniform {
    double a;  // offset >= 0
    double h;  // width >= 0; support [a, a+h], h = 0 is a point mass
};

struct Erlang {
    int r;         // shape, positive integer
    double theta;  // scale; mean is r*theta
};

/// Per-server response time distribution.
using ResponseTimeModel = std::variant<Exponential, Uniform, Erlang>;

/// Throw std::invalid_argument if the parameters are out of range.
void validate(const UpdateProcess& process);
void validate(const ResponseTimeModel& model);

/// Analytic mean of the model: 1/mu, a + h/2, or r*theta.
double model_mean(const ResponseTimeModel& model);

/// One exponential draw with the given rate (inverse CDF; always >= 0).
double sample_exponential(double rate, RandomStream& stream);

/// One i.i.d. response-time draw from the model.
double sample_response(const ResponseTimeModel& model, RandomStream& stream);

/// Age of a server's data at a stationary random epoch: Exp(lambda) by the
/// memoryless property of the Poisson update process.
double sample_age_memoryless(const UpdateProcess& process, RandomStream& stream);

/// Age of a server's data at a request epoch s drawn uniformly from [0, horizon],
/// for a Poisson(lambda) update trajectory started at time 0.  Returns the
/// distance from s back to the latest update, or s itself when no update
/// precedes s.  Consumes exactly two draws: s, then the backward gap.
double sample_age_trajectory(const UpdateProcess& process, double horizon,
                             RandomStream& stream);

}  // namespace aoipull
