#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "aoipull/analytic.hpp"

using namespace aoipull;

namespace {

// Independent oracle: Kahan-compensated harmonic sum, largest terms first
// (the library sums smallest first, uncompensated).
double oracle_harmonic(int n) {
    double sum = 0.0;
    double c = 0.0;
    for (int l = 1; l <= n; ++l) {
        const double y = 1.0 / l - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double oracle_aoi(int n, int k, double lambda, double mu) {
    return (oracle_harmonic(n) - oracle_harmonic(n - k)) / mu + 1.0 / (k * lambda);
}

double oracle_aoi_uniform(int n, int k, double lambda, double a, double h) {
    return k * h / (n + 1) + a + 1.0 / (k * lambda);
}

}  // namespace

TEST_CASE("harmonic: base cases and summation oracle") {
    CHECK(harmonic(0) == 0.0);
    CHECK(harmonic(1) == 1.0);
    CHECK(harmonic(20) == doctest::Approx(3.5977396571436819).epsilon(1e-9));
    CHECK(harmonic(20) == doctest::Approx(3.597740).epsilon(1e-6));
    for (int n : {2, 7, 50, 313, 1000}) {
        CHECK(harmonic(n) == doctest::Approx(oracle_harmonic(n)).epsilon(1e-13));
    }
    CHECK_THROWS_AS(harmonic(-1), std::domain_error);
}

TEST_CASE("expected_wait: exponential order statistic means") {
    CHECK(expected_wait(1, 1, 1.0) == doctest::Approx(1.0));
    CHECK(expected_wait(20, 1, 5.0) == doctest::Approx(0.01));
    CHECK(expected_wait(20, 20, 5.0) == doctest::Approx(0.7195479314287364).epsilon(1e-10));
    CHECK_THROWS_AS(expected_wait(20, 21, 5.0), std::domain_error);
    CHECK_THROWS_AS(expected_wait(20, 0, 5.0), std::domain_error);
    CHECK_THROWS_AS(expected_wait(20, 5, 0.0), std::invalid_argument);
}

TEST_CASE("expected_wait strictly increases in k") {
    for (int k = 1; k < 30; ++k) {
        CHECK(expected_wait(30, k + 1, 2.5) > expected_wait(30, k, 2.5));
    }
}

TEST_CASE("expected_min_age") {
    CHECK(expected_min_age(1, 1.0) == doctest::Approx(1.0));
    CHECK(expected_min_age(4, 2.0) == doctest::Approx(0.125));
    CHECK(expected_min_age(20, 100.0) == doctest::Approx(0.0005));
    CHECK_THROWS_AS(expected_min_age(0, 1.0), std::domain_error);
    for (int k = 1; k < 40; ++k) {
        CHECK(expected_min_age(k + 1, 0.7) < expected_min_age(k, 0.7));
    }
}

TEST_CASE("expected_aoi against the summation oracle") {
    CHECK(expected_aoi(20, 1, 1.0, 5.0) == doctest::Approx(1.01).epsilon(1e-12));
    CHECK(expected_aoi(20, 8, 1.0, 5.0) == doctest::Approx(0.22390579578660075).epsilon(1e-10));
    CHECK(expected_aoi(20, 8, 1.0, 5.0) == doctest::Approx(0.22391).epsilon(5e-4));
    CHECK(expected_aoi(20, 20, 1.0, 5.0) == doctest::Approx(0.7695479314287363).epsilon(1e-10));
    for (int n : {1, 3, 17, 44}) {
        for (int k = 1; k <= n; ++k) {
            CHECK(expected_aoi(n, k, 0.3, 7.0) ==
                  doctest::Approx(oracle_aoi(n, k, 0.3, 7.0)).epsilon(1e-12));
        }
    }
}

TEST_CASE("decomposition identity holds exactly") {
    for (int n : {1, 2, 9, 20, 50}) {
        for (int k = 1; k <= n; ++k) {
            CHECK(expected_aoi(n, k, 0.01, 100.0) ==
                  expected_wait(n, k, 100.0) + expected_min_age(k, 0.01));
        }
    }
}

TEST_CASE("expected_aoi_subset reduces to expected_aoi on m") {
    CHECK(expected_aoi_subset(50, 20, 8, 1.0, 5.0) ==
          doctest::Approx(0.22390579578660075).epsilon(1e-10));
    CHECK(expected_aoi_subset(1, 1, 1, 1.0, 1.0) == doctest::Approx(2.0));
    for (int k = 1; k <= 20; ++k) {
        CHECK(expected_aoi_subset(20, 20, k, 1.0, 5.0) == expected_aoi(20, k, 1.0, 5.0));
        // independent of n given m
        CHECK(expected_aoi_subset(37, 20, k, 1.0, 5.0) == expected_aoi(20, k, 1.0, 5.0));
    }
    CHECK_THROWS_AS(expected_aoi_subset(10, 11, 1, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(expected_aoi_subset(10, 5, 6, 1.0, 1.0), std::domain_error);
}

TEST_CASE("expected_aoi_uniform") {
    CHECK(expected_aoi_uniform(20, 1, 1.0, 0.1, 0.2) ==
          doctest::Approx(1.1095238095238096).epsilon(1e-10));
    CHECK(expected_aoi_uniform(20, 1, 1.0, 0.1, 0.0) == doctest::Approx(1.1));
    CHECK(expected_aoi_uniform(20, 10, 1.0, 0.1, 0.2) ==
          doctest::Approx(0.29523809523809524).epsilon(1e-10));
    CHECK_THROWS_AS(expected_aoi_uniform(20, 0, 1.0, 0.1, 0.2), std::domain_error);
    CHECK_THROWS_AS(expected_aoi_uniform(20, 1, 1.0, -0.1, 0.2), std::invalid_argument);
}

TEST_CASE("aoi_difference: values, domain, and consistency with the curve") {
    CHECK(aoi_difference(20, 1, 1.0, 5.0) ==
          doctest::Approx(-0.48947368421052634).epsilon(1e-12));
    CHECK(aoi_difference(20, 19, 1.0, 200.0) ==
          doctest::Approx(0.002368421052631579).epsilon(1e-12));
    CHECK_THROWS_AS(aoi_difference(20, 20, 1.0, 5.0), std::domain_error);
    CHECK_THROWS_AS(aoi_difference(20, 0, 1.0, 5.0), std::domain_error);

    for (int k = 1; k < 20; ++k) {
        const double curve_diff =
            expected_aoi(20, k + 1, 1.0, 5.0) - expected_aoi(20, k, 1.0, 5.0);
        CHECK(aoi_difference(20, k, 1.0, 5.0) == doctest::Approx(curve_diff).epsilon(1e-9));
        if (k < 19) {
            CHECK(aoi_difference(20, k + 1, 1.0, 5.0) > aoi_difference(20, k, 1.0, 5.0));
        }
    }
}

TEST_CASE("optimal_k_exponential: the three regimes") {
    auto fast = optimal_k_exponential(20, 100.0, 2.0);
    CHECK(fast.k_star == 1);
    CHECK(fast.k_prime == doctest::Approx(0.30246538387798405).epsilon(1e-9));
    CHECK_FALSE(fast.tie);

    auto mid = optimal_k_exponential(20, 1.0, 5.0);
    CHECK(mid.k_star == 8);
    CHECK(mid.k_prime == doctest::Approx(7.44030650891055).epsilon(1e-9));
    CHECK_FALSE(mid.tie);

    auto slow = optimal_k_exponential(20, 1.0, 200.0);
    CHECK(slow.k_star == 19);
    CHECK(slow.k_prime == doctest::Approx(18.244473555614366).epsilon(1e-9));
    CHECK_FALSE(slow.tie);

    CHECK(optimal_k_exponential(1, 1.0, 1.0).k_star == 1);
    CHECK_THROWS_AS(optimal_k_exponential(0, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(optimal_k_exponential(20, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("optimal_k_exponential flags exact ties") {
    // lambda = mu, n = 8: k' = 2 exactly, D(2) = 0, both 2 and 3 optimal
    auto tied = optimal_k_exponential(8, 1.0, 1.0);
    CHECK(tied.tie);
    CHECK(tied.k_star == 2);
    CHECK(tied.k_prime == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(expected_aoi(8, 2, 1.0, 1.0) ==
          doctest::Approx(expected_aoi(8, 3, 1.0, 1.0)).epsilon(1e-12));
}

TEST_CASE("optimal_k_uniform") {
    auto mid = optimal_k_uniform(20, 1.0, 0.2);
    CHECK(mid.k_star == 10);
    CHECK(mid.k_prime == doctest::Approx(9.759142264341595).epsilon(1e-9));

    CHECK(optimal_k_uniform(20, 10.0, 1.0).k_star == 2);

    // h = 0: every response arrives at a, age term strictly decreasing
    CHECK(optimal_k_uniform(20, 1.0, 0.0).k_star == 20);
    CHECK(optimal_k_uniform(7, 3.0, 0.0).k_star == 7);

    // tie: n = 19, h*lambda = 1 gives k' = 4 exactly
    auto tied = optimal_k_uniform(19, 1.0, 1.0);
    CHECK(tied.tie);
    CHECK(tied.k_star == 4);

    CHECK_THROWS_AS(optimal_k_uniform(0, 1.0, 0.2), std::domain_error);
    CHECK_THROWS_AS(optimal_k_uniform(20, 0.0, 0.2), std::invalid_argument);
}

TEST_CASE("optimal_k_uniform does not depend on the offset a") {
    for (double a : {0.0, 0.05, 5.0}) {
        const int bf = optimal_k_bruteforce(
            [a](int k) { return oracle_aoi_uniform(20, k, 1.0, a, 0.2); }, 20);
        CHECK(bf == optimal_k_uniform(20, 1.0, 0.2).k_star);
    }
}

TEST_CASE("optimal_k_bruteforce basics") {
    CHECK(optimal_k_bruteforce([](int k) { return oracle_aoi(20, k, 1.0, 5.0); }, 20) == 8);
    CHECK(optimal_k_bruteforce([](int) { return 1.5; }, 17) == 1);
    CHECK_THROWS_AS(optimal_k_bruteforce([](int) { return 0.0; }, 0), std::domain_error);
}

TEST_CASE("closed form matches brute force over a parameter grid") {
    const std::vector<double> rates = {0.01, 0.1, 1.0, 10.0, 100.0};
    for (double lambda : rates) {
        for (double mu : rates) {
            for (int n = 1; n <= 50; ++n) {
                auto opt = optimal_k_exponential(n, lambda, mu);
                const int bf = optimal_k_bruteforce(
                    [&](int k) { return oracle_aoi(n, k, lambda, mu); }, n);
                if (opt.tie) {
                    CHECK(std::abs(opt.k_star - bf) <= 1);
                } else {
                    CHECK(opt.k_star == bf);
                }
            }
        }
    }
}

TEST_CASE("uniform closed form matches brute force over a parameter grid") {
    for (double lambda : {0.1, 1.0, 10.0}) {
        for (double h : {0.01, 0.2, 1.0, 10.0}) {
            for (int n = 2; n <= 50; ++n) {
                auto opt = optimal_k_uniform(n, lambda, h);
                const int bf = optimal_k_bruteforce(
                    [&](int k) { return oracle_aoi_uniform(n, k, lambda, 0.0, h); }, n);
                if (opt.tie) {
                    CHECK(std::abs(opt.k_star - bf) <= 1);
                } else {
                    CHECK(opt.k_star == bf);
                }
            }
        }
    }
}

TEST_CASE("corollary_thresholds") {
    auto t20 = corollary_thresholds(20, 2.0);
    CHECK(t20.lambda_high == doctest::Approx(19.0));
    CHECK(t20.lambda_low == doctest::Approx(0.005263157894736842).epsilon(1e-9));

    auto t2 = corollary_thresholds(2, 1.0);
    CHECK(t2.lambda_high == doctest::Approx(0.5));
    CHECK(t2.lambda_low == doctest::Approx(0.5));

    CHECK_THROWS_AS(corollary_thresholds(1, 1.0), std::domain_error);

    // boundary: at lambda = mu(n-1)/2, D(1) = 0 and k=1, k=2 are both optimal
    for (int n : {2, 5, 20}) {
        for (double mu : {1.0, 10.0}) {
            const double lambda = corollary_thresholds(n, mu).lambda_high;
            CHECK(std::abs(aoi_difference(n, 1, lambda, mu)) < 1e-12);
            CHECK(expected_aoi(n, 1, lambda, mu) ==
                  doctest::Approx(expected_aoi(n, 2, lambda, mu)).epsilon(1e-12));
        }
    }
}

TEST_CASE("corollary membership matches the closed-form optimum on a grid") {
    const std::vector<double> rates = {0.01, 0.1, 1.0, 10.0, 100.0};
    for (double lambda : rates) {
        for (double mu : rates) {
            for (int n = 2; n <= 50; ++n) {
                auto thresholds = corollary_thresholds(n, mu);
                auto opt = optimal_k_exponential(n, lambda, mu);
                const bool one_optimal = opt.k_star == 1 || (opt.tie && opt.k_star == 1);
                CHECK(one_optimal == (lambda >= thresholds.lambda_high));
                const bool n_optimal =
                    opt.k_star == n || (opt.tie && opt.k_star == n - 1);
                CHECK(n_optimal == (lambda <= thresholds.lambda_low));
            }
        }
    }
}

TEST_CASE("improvement_ratio") {
    CHECK(improvement_ratio(20, 100.0, 2.0) == doctest::Approx(1.0));
    CHECK(improvement_ratio(20, 1.0, 5.0) == doctest::Approx(4.5108256195503165).epsilon(1e-9));
    CHECK(improvement_ratio(20, 1.0, 5.0) == doctest::Approx(4.511).epsilon(3e-3));
    const double slow = improvement_ratio(20, 1.0, 200.0);
    CHECK(slow >= 1.0);
    CHECK(slow > improvement_ratio(20, 1.0, 5.0));
    for (int n = 1; n <= 30; ++n) {
        CHECK(improvement_ratio(n, 0.7, 13.0) >= 1.0);
    }
}

TEST_CASE("closed_form dispatch by response model") {
    SystemParams exp_params{{20, 20, 20}, {1.0}, Exponential{5.0}};
    CHECK(closed_form_aoi(exp_params, 8).value() ==
          doctest::Approx(0.22390579578660075).epsilon(1e-10));
    CHECK(closed_form_wait(exp_params, 1).value() == doctest::Approx(0.01));

    SystemParams subset_params{{50, 20, 20}, {1.0}, Exponential{5.0}};
    CHECK(closed_form_aoi(subset_params, 8).value() ==
          doctest::Approx(0.22390579578660075).epsilon(1e-10));

    SystemParams uni_params{{20, 20, 20}, {1.0}, Uniform{0.1, 0.2}};
    CHECK(closed_form_aoi(uni_params, 10).value() ==
          doctest::Approx(0.29523809523809524).epsilon(1e-10));

    SystemParams erl_params{{20, 20, 20}, {1.0}, Erlang{5, 0.04}};
    CHECK_FALSE(closed_form_aoi(erl_params, 8).has_value());
    CHECK_FALSE(closed_form_wait(erl_params, 8).has_value());
}

TEST_CASE("scheme and params validation") {
    CHECK_NOTHROW(validate(ReplicationScheme{20, 20, 8}));
    CHECK_THROWS_AS(validate(ReplicationScheme{20, 21, 8}), std::invalid_argument);
    CHECK_THROWS_AS(validate(ReplicationScheme{20, 10, 11}), std::invalid_argument);
    CHECK_THROWS_AS(validate(ReplicationScheme{0, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(ReplicationScheme{20, 20, 0}), std::invalid_argument);

    SystemParams bad{{20, 20, 8}, {0.0}, Exponential{5.0}};
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}
