#include "aoipull/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace aoipull {

namespace {

void require_rate(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument(std::string(name) + " must be positive and finite, got " +
                                    std::to_string(value));
    }
}

void require_k_in(int k, int upper, const char* where) {
    if (k < 1 || k > upper) {
        throw std::domain_error(std::string(where) + ": k must be in [1, " +
                                std::to_string(upper) + "], got " + std::to_string(k));
    }
}

void require_servers(int n, const char* where) {
    if (n < 1) {
        throw std::domain_error(std::string(where) + ": need at least one server, got n = " +
                                std::to_string(n));
    }
}

// Relative tie tolerance on D(k'): wide enough to absorb last-ulp noise in
// the rate products, far below any genuinely nonzero difference.
constexpr double kTieEpsilon = 1e-12;

OptimalK resolve_k_star(double k_prime, int n, double difference_at,
                        double tie_scale) {
    const long long rounded = std::llround(k_prime);
    if (rounded >= 1 && rounded <= n - 1 &&
        std::abs(difference_at) <= kTieEpsilon * tie_scale) {
        return {k_prime, static_cast<int>(rounded), true};
    }
    const int k_star = std::min(static_cast<int>(std::ceil(k_prime)), n);
    return {k_prime, std::max(k_star, 1), false};
}

}  // namespace

void validate(const ReplicationScheme& scheme) {
    if (scheme.n < 1) {
        throw std::invalid_argument("scheme: n must be >= 1, got " + std::to_string(scheme.n));
    }
    if (scheme.m < 1 || scheme.m > scheme.n) {
        throw std::invalid_argument("scheme: m must satisfy 1 <= m <= n, got m = " +
                                    std::to_string(scheme.m) + " with n = " +
                                    std::to_string(scheme.n));
    }
    if (scheme.k < 1 || scheme.k > scheme.m) {
        throw std::invalid_argument("scheme: k must satisfy 1 <= k <= m, got k = " +
                                    std::to_string(scheme.k) + " with m = " +
                                    std::to_string(scheme.m));
    }
}

void validate(const SystemParams& params) {
    validate(params.scheme);
    validate(params.update);
    validate(params.response);
}

double harmonic(int n) {
    if (n < 0) {
        throw std::domain_error("harmonic: n must be nonnegative, got " + std::to_string(n));
    }
    double sum = 0.0;
    for (int l = n; l >= 1; --l) {
        sum += 1.0 / l;
    }
    return sum;
}

double expected_wait(int n, int k, double mu) {
    require_servers(n, "expected_wait");
    require_k_in(k, n, "expected_wait");
    require_rate(mu, "mu");
    return (harmonic(n) - harmonic(n - k)) / mu;
}

double expected_min_age(int k, double lambda) {
    if (k < 1) {
        throw std::domain_error("expected_min_age: k must be >= 1, got " + std::to_string(k));
    }
    require_rate(lambda, "lambda");
    return 1.0 / (k * lambda);
}

double expected_aoi(int n, int k, double lambda, double mu) {
    return expected_wait(n, k, mu) + expected_min_age(k, lambda);
}

double expected_aoi_subset(int n, int m, int k, double lambda, double mu) {
    require_servers(n, "expected_aoi_subset");
    if (m < 1 || m > n) {
        throw std::domain_error("expected_aoi_subset: m must be in [1, n], got m = " +
                                std::to_string(m) + " with n = " + std::to_string(n));
    }
    // Only the contacted pool matters: the k-th response is the k-th order
    // statistic of m draws, so the closed form is the (m, k) one.
    return expected_aoi(m, k, lambda, mu);
}

double expected_aoi_uniform(int n, int k, double lambda, double a, double h) {
    require_servers(n, "expected_aoi_uniform");
    require_k_in(k, n, "expected_aoi_uniform");
    require_rate(lambda, "lambda");
    if (!(a >= 0.0) || !std::isfinite(a)) {
        throw std::invalid_argument("uniform offset a must be nonnegative and finite, got " +
                                    std::to_string(a));
    }
    if (!(h >= 0.0) || !std::isfinite(h)) {
        throw std::invalid_argument("uniform width h must be nonnegative and finite, got " +
                                    std::to_string(h));
    }
    return k * h / (n + 1) + a + 1.0 / (k * lambda);
}

double aoi_difference(int n, int k, double lambda, double mu) {
    if (k < 1 || k > n - 1) {
        throw std::domain_error("aoi_difference: k must be in [1, n-1], got k = " +
                                std::to_string(k) + " with n = " + std::to_string(n));
    }
    require_rate(lambda, "lambda");
    require_rate(mu, "mu");
    return 1.0 / (double(n - k) * mu) - 1.0 / (double(k) * double(k + 1) * lambda);
}

double aoi_difference_uniform(int n, int k, double lambda, double h) {
    if (k < 1 || k > n - 1) {
        throw std::domain_error("aoi_difference_uniform: k must be in [1, n-1], got k = " +
                                std::to_string(k) + " with n = " + std::to_string(n));
    }
    require_rate(lambda, "lambda");
    if (!(h >= 0.0) || !std::isfinite(h)) {
        throw std::invalid_argument("uniform width h must be nonnegative and finite, got " +
                                    std::to_string(h));
    }
    return h / (n + 1) - 1.0 / (double(k) * double(k + 1) * lambda);
}

OptimalK optimal_k_exponential(int n, double lambda, double mu) {
    require_servers(n, "optimal_k_exponential");
    require_rate(lambda, "lambda");
    require_rate(mu, "mu");
    const double k_prime =
        2.0 * mu * n /
        (std::sqrt((lambda + mu) * (lambda + mu) + 4.0 * lambda * mu * n) + lambda + mu);
    const long long rounded = std::llround(k_prime);
    const double difference_at =
        (rounded >= 1 && rounded <= n - 1)
            ? aoi_difference(n, static_cast<int>(rounded), lambda, mu)
            : 1.0;
    return resolve_k_star(k_prime, n, difference_at,
                          std::max(1.0 / mu, 1.0 / lambda));
}

OptimalK optimal_k_uniform(int n, double lambda, double h) {
    require_servers(n, "optimal_k_uniform");
    require_rate(lambda, "lambda");
    if (!(h >= 0.0) || !std::isfinite(h)) {
        throw std::invalid_argument("uniform width h must be nonnegative and finite, got " +
                                    std::to_string(h));
    }
    if (h == 0.0) {
        // Point-mass responses: the wait term is flat in k, the age term
        // strictly decreases, so waiting for everyone is optimal.
        return {double(n), n, false};
    }
    const double k_prime =
        2.0 * (n + 1) /
        (std::sqrt(h * h * lambda * lambda + 4.0 * h * lambda * (n + 1)) + h * lambda);
    const long long rounded = std::llround(k_prime);
    const double difference_at =
        (rounded >= 1 && rounded <= n - 1)
            ? aoi_difference_uniform(n, static_cast<int>(rounded), lambda, h)
            : 1.0;
    return resolve_k_star(k_prime, n, difference_at, std::max(h, 1.0 / lambda));
}

CorollaryThresholds corollary_thresholds(int n, double mu) {
    if (n < 2) {
        throw std::domain_error("corollary_thresholds: n must be >= 2, got " +
                                std::to_string(n));
    }
    require_rate(mu, "mu");
    return {mu * (n - 1) / 2.0, mu / (double(n) * (n - 1))};
}

double improvement_ratio(int n, double lambda, double mu) {
    const OptimalK opt = optimal_k_exponential(n, lambda, mu);
    return expected_aoi(n, 1, lambda, mu) / expected_aoi(n, opt.k_star, lambda, mu);
}

std::optional<double> closed_form_wait(const SystemParams& params, int k) {
    validate(params);
    require_k_in(k, params.scheme.m, "closed_form_wait");
    const int m = params.scheme.m;
    if (const auto* exp = std::get_if<Exponential>(&params.response)) {
        return expected_wait(m, k, exp->mu);
    }
    if (const auto* uni = std::get_if<Uniform>(&params.response)) {
        // k-th order statistic of m uniform draws on [a, a+h]
        return uni->a + k * uni->h / (m + 1);
    }
    return std::nullopt;
}

std::optional<double> closed_form_aoi(const SystemParams& params, int k) {
    validate(params);
    require_k_in(k, params.scheme.m, "closed_form_aoi");
    const int m = params.scheme.m;
    if (const auto* exp = std::get_if<Exponential>(&params.response)) {
        return expected_aoi(m, k, params.update.lambda, exp->mu);
    }
    if (const auto* uni = std::get_if<Uniform>(&params.response)) {
        return expected_aoi_uniform(m, k, params.update.lambda, uni->a, uni->h);
    }
    return std::nullopt;
}

}  // namespace aoipull
