#pragma once

#include <optional>
#include <stdexcept>

#include "aoipull/stochastic.hpp"

namespace aoipull {

/// Fan-out and stopping rule: send requests to m of the n servers, use the
/// first k responses.  The plain (n,k) scheme is the special case m = n.
struct ReplicationScheme {
    int n;  // total servers
    int m;  // fan-out, 1 <= m <= n
    int k;  // responses awaited, 1 <= k <= m
};

void validate(const ReplicationScheme& scheme);

struct SystemParams {
    ReplicationScheme scheme;
    UpdateProcess update;
    ResponseTimeModel response;
};

void validate(const SystemParams& params);

/// Result of the closed-form optimal-k computation.  k_prime is the real
/// root of D(k') = 0; k_star = min(ceil(k_prime), n).  When k_prime lands on
/// an integer both k_prime and k_prime + 1 minimize the expected AoI; tie is
/// set and the smaller of the two is reported.
struct OptimalK {
    double k_prime;
    int k_star;
    bool tie;
};

struct CorollaryThresholds {
    double lambda_high;  // k* = 1 optimal  iff  lambda >= lambda_high
    double lambda_low;   // k* = n optimal  iff  lambda <= lambda_low
};

/// H(n) = sum_{l=1..n} 1/l, with H(0) = 0.  Direct summation, smallest
/// terms first.
double harmonic(int n);

/// Mean of the k-th order statistic of n i.i.d. Exp(mu) response times:
/// (H(n) - H(n-k)) / mu.
double expected_wait(int n, int k, double mu);

/// Mean of the minimum of k i.i.d. Exp(lambda) ages: 1/(k*lambda).
double expected_min_age(int k, double lambda);

/// Expected AoI at the user for the (n,k) scheme with exponential response:
/// expected_wait + expected_min_age.
double expected_aoi(int n, int k, double lambda, double mu);

/// (n,m,k) scheme: identical to expected_aoi with n replaced by m.
double expected_aoi_subset(int n, int m, int k, double lambda, double mu);

/// Uniform response on [a, a+h]: k*h/(n+1) + a + 1/(k*lambda).
double expected_aoi_uniform(int n, int k, double lambda, double a, double h);

/// D(k) = E[AoI(k+1)] - E[AoI(k)] = 1/((n-k)*mu) - 1/(k*(k+1)*lambda),
/// defined for 1 <= k <= n-1; strictly increasing in k.
double aoi_difference(int n, int k, double lambda, double mu);

/// Uniform-response counterpart: h/(n+1) - 1/(k*(k+1)*lambda).
double aoi_difference_uniform(int n, int k, double lambda, double h);

OptimalK optimal_k_exponential(int n, double lambda, double mu);

/// h = 0 degenerates to a point mass at a; every k waits a and the age term
/// is strictly decreasing, so k_star = n there.
OptimalK optimal_k_uniform(int n, double lambda, double h);

/// Exhaustive argmin of evaluator(k) over k = 1..k_max, smallest k on ties.
template <typename Evaluator>
int optimal_k_bruteforce(Evaluator&& evaluator, int k_max) {
    if (k_max < 1) {
        throw std::domain_error("optimal_k_bruteforce: k_max must be >= 1");
    }
    int best_k = 1;
    double best = evaluator(1);
    for (int k = 2; k <= k_max; ++k) {
        const double value = evaluator(k);
        if (value < best) {
            best = value;
            best_k = k;
        }
    }
    return best_k;
}

/// Boundary rates at which waiting for one response (resp. all n) is
/// optimal; requires n >= 2.
CorollaryThresholds corollary_thresholds(int n, double mu);

/// E[AoI(1)] / E[AoI(k*)] for the (n,n) scheme with exponential response.
double improvement_ratio(int n, double lambda, double mu);

/// Closed-form wait / AoI for the configured scheme and response model,
/// using the fan-out m as the order-statistic pool.  Empty for Erlang
/// (no closed form).
std::optional<double> closed_form_wait(const SystemParams& params, int k);
std::optional<double> closed_form_aoi(const SystemParams& params, int k);

}  // namespace aoipull
