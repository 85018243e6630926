#include "aoipull/commands.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

namespace aoipull::cli {

namespace {

void append_model(std::ostream& out, const ResponseTimeModel& model) {
    if (const auto* exp = std::get_if<Exponential>(&model)) {
        out << " mu=" << format_number(exp->mu);
    } else if (const auto* uni = std::get_if<Uniform>(&model)) {
        out << " a=" << format_number(uni->a) << " h=" << format_number(uni->h);
    } else {
        const auto& erl = std::get<Erlang>(model);
        out << " r=" << erl.r << " theta=" << format_number(erl.theta);
    }
}

void write_preamble(std::ostream& out, const char* command) {
    out << "# aoipull " << kToolVersion << "\n";
    out << "# command: " << command << "\n";
}

void write_params_line(std::ostream& out, const SystemParams& params) {
    out << "# params: n=" << params.scheme.n << " m=" << params.scheme.m
        << " lambda=" << format_number(params.update.lambda);
    append_model(out, params.response);
    out << "\n";
}

// Deliberately excludes the thread count: output bytes must not depend on
// the parallelism degree.
void write_run_line(std::ostream& out, const Options& options) {
    out << "# run: trials=" << options.trials << " seed=" << options.seed
        << " age-mode="
        << (options.age_mode == AgeMode::Memoryless ? "memoryless" : "trajectory")
        << " horizon-factor=" << format_number(options.horizon_factor) << "\n";
}

void require_closed_form(const SystemParams& params) {
    if (std::holds_alternative<Erlang>(params.response)) {
        throw std::invalid_argument(
            "the Erlang response model has no closed form; use the simulate command");
    }
}

}  // namespace

const char* to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::Lambda: return "lambda";
        case SweepAxis::Mu: return "mu";
        case SweepAxis::N: break;
    }
    return "n";
}

std::string format_number(double value) {
    std::array<char, 32> buffer;
    const auto result =
        std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    return std::string(buffer.data(), result.ptr);
}

SystemParams make_params(const Options& options) {
    const bool wants_exponential = options.mu.has_value();
    const bool wants_uniform = options.a.has_value() || options.h.has_value();
    const bool wants_erlang = options.r.has_value() || options.theta.has_value();
    if (int(wants_exponential) + int(wants_uniform) + int(wants_erlang) != 1) {
        throw std::invalid_argument(
            "choose exactly one response model: --mu (exponential), --a/--h (uniform), "
            "or --r/--theta (Erlang)");
    }
    if (!options.lambda) {
        throw std::invalid_argument("--lambda is required");
    }

    ResponseTimeModel model = Exponential{0.0};
    if (wants_exponential) {
        model = Exponential{*options.mu};
    } else if (wants_uniform) {
        if (!options.a || !options.h) {
            throw std::invalid_argument("the uniform model needs both --a and --h");
        }
        model = Uniform{*options.a, *options.h};
    } else {
        if (!options.r || !options.theta) {
            throw std::invalid_argument("the Erlang model needs both --r and --theta");
        }
        model = Erlang{*options.r, *options.theta};
    }

    const int m = options.m.value_or(options.n);
    SystemParams params{{options.n, m, m}, {*options.lambda}, model};
    validate(params);
    return params;
}

SimulationConfig make_simulation_config(const Options& options) {
    const SystemParams params = make_params(options);
    SimulationConfig config;
    config.scheme = params.scheme;
    config.update = params.update;
    config.response = params.response;
    config.trials = options.trials;
    config.seed = options.seed;
    config.age_mode = options.age_mode;
    config.horizon_factor = options.horizon_factor;
    validate(config);
    return config;
}

std::vector<double> default_axis_values(SweepAxis axis) {
    std::vector<double> values;
    switch (axis) {
        case SweepAxis::Lambda:
            for (int i = 1; i <= 40; ++i) {
                values.push_back(i / 20.0);
            }
            break;
        case SweepAxis::Mu:
            values.push_back(1.0);
            for (int i = 1; i <= 40; ++i) {
                values.push_back(5.0 * i);
            }
            break;
        case SweepAxis::N:
            for (int n = 2; n <= 50; ++n) {
                values.push_back(n);
            }
            break;
    }
    return values;
}

void run_analytic(const Options& options, std::ostream& out) {
    const SystemParams params = make_params(options);
    require_closed_form(params);
    write_preamble(out, "analytic");
    write_params_line(out, params);
    out << "k,expected_wait,expected_min_age,expected_aoi\n";
    for (int k = 1; k <= params.scheme.m; ++k) {
        out << k << ',' << format_number(*closed_form_wait(params, k)) << ','
            << format_number(expected_min_age(k, params.update.lambda)) << ','
            << format_number(*closed_form_aoi(params, k)) << "\n";
    }
}

void run_optimal_k(const Options& options, std::ostream& out) {
    const SystemParams params = make_params(options);
    require_closed_form(params);
    const int pool = params.scheme.m;
    const double lambda = params.update.lambda;

    OptimalK opt{};
    std::string lambda_high;
    std::string lambda_low;
    if (const auto* exp = std::get_if<Exponential>(&params.response)) {
        opt = optimal_k_exponential(pool, lambda, exp->mu);
        if (pool >= 2) {
            const CorollaryThresholds thresholds = corollary_thresholds(pool, exp->mu);
            lambda_high = format_number(thresholds.lambda_high);
            lambda_low = format_number(thresholds.lambda_low);
        }
    } else {
        const auto& uni = std::get<Uniform>(params.response);
        opt = optimal_k_uniform(pool, lambda, uni.h);
    }
    const double ratio =
        *closed_form_aoi(params, 1) / *closed_form_aoi(params, opt.k_star);

    write_preamble(out, "optimal-k");
    write_params_line(out, params);
    out << "k_prime,k_star,tie,aoi_at_kstar,improvement_ratio,lambda_high,lambda_low\n";
    out << format_number(opt.k_prime) << ',' << opt.k_star << ',' << (opt.tie ? 1 : 0)
        << ',' << format_number(*closed_form_aoi(params, opt.k_star)) << ','
        << format_number(ratio) << ',' << lambda_high << ',' << lambda_low << "\n";
}

void run_simulate(const Options& options, std::ostream& out) {
    const SimulationConfig config = make_simulation_config(options);
    const std::vector<AoiEstimate> estimates = estimate_aoi(config, options.threads);

    write_preamble(out, "simulate");
    write_params_line(out, {config.scheme, config.update, config.response});
    write_run_line(out, options);
    out << "k,mean_aoi,std_error,trials,analytic_aoi\n";
    for (const AoiEstimate& est : estimates) {
        out << est.k << ',' << format_number(est.mean) << ','
            << format_number(est.std_error) << ',' << est.trials << ',';
        if (est.analytic) {
            out << format_number(*est.analytic);
        }
        out << "\n";
    }
}

void run_sweep(const Options& options, std::ostream& out) {
    if (!options.axis) {
        throw std::invalid_argument("sweep needs --axis (lambda, mu, or n)");
    }
    const SweepAxis axis = *options.axis;
    if (options.a || options.h || options.r || options.theta) {
        throw std::invalid_argument(
            "sweep supports only the exponential response model (--mu)");
    }
    if (axis != SweepAxis::Lambda && !options.lambda) {
        throw std::invalid_argument("--lambda is required");
    }
    if (axis != SweepAxis::Mu && !options.mu) {
        throw std::invalid_argument("--mu is required (sweep uses the exponential model)");
    }
    if (axis == SweepAxis::N && options.m) {
        throw std::invalid_argument("--m cannot be fixed while sweeping n; the fan-out follows n");
    }
    if (axis != SweepAxis::N) {
        validate(ReplicationScheme{options.n, options.m.value_or(options.n),
                                   options.m.value_or(options.n)});
    }

    const std::vector<double> values =
        options.axis_values.empty() ? default_axis_values(axis) : options.axis_values;
    if (values.empty()) {
        throw std::domain_error("sweep: the value list is empty");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double value = values[i];
        if (!std::isfinite(value)) {
            throw std::domain_error("sweep: axis values must be finite");
        }
        if (i > 0 && !(values[i - 1] < value)) {
            throw std::domain_error("sweep: axis values must be strictly increasing");
        }
        if (axis == SweepAxis::N) {
            if (value < 1.0 || value > 1e6 || value != std::floor(value)) {
                throw std::domain_error("sweep: n values must be integers >= 1");
            }
        } else if (!(value > 0.0)) {
            throw std::domain_error("sweep: rate values must be positive");
        }
    }

    write_preamble(out, "sweep");
    out << "# params:";
    if (axis != SweepAxis::N) {
        out << " n=" << options.n << " m=" << options.m.value_or(options.n);
    }
    if (axis != SweepAxis::Lambda) {
        out << " lambda=" << format_number(*options.lambda);
    }
    if (axis != SweepAxis::Mu) {
        out << " mu=" << format_number(*options.mu);
    }
    out << " axis=" << to_string(axis) << " empirical=" << (options.empirical ? 1 : 0)
        << "\n";
    out << "# values: ";
    for (std::size_t i = 0; i < values.size(); ++i) {
        out << (i == 0 ? "" : ",") << format_number(values[i]);
    }
    out << "\n";
    if (options.empirical) {
        write_run_line(out, options);
    }

    out << "axis_name,axis_value,k_star_analytic,k_star_empirical,improvement_ratio\n";
    for (const double value : values) {
        const double lambda = axis == SweepAxis::Lambda ? value : *options.lambda;
        const double mu = axis == SweepAxis::Mu ? value : *options.mu;
        const int n = axis == SweepAxis::N ? static_cast<int>(value) : options.n;
        const int pool =
            axis == SweepAxis::N ? n : options.m.value_or(options.n);

        const OptimalK opt = optimal_k_exponential(pool, lambda, mu);
        const double ratio = improvement_ratio(pool, lambda, mu);

        std::string empirical_cell;
        if (options.empirical) {
            SimulationConfig config;
            config.scheme = {n, pool, pool};
            config.update = {lambda};
            config.response = Exponential{mu};
            config.trials = options.trials;
            config.seed = options.seed;
            config.age_mode = options.age_mode;
            config.horizon_factor = options.horizon_factor;
            empirical_cell =
                std::to_string(empirical_optimal_k(estimate_aoi(config, options.threads)));
        }

        out << to_string(axis) << ',' << format_number(value) << ',' << opt.k_star << ','
            << empirical_cell << ',' << format_number(ratio) << "\n";
    }
}

}  // namespace aoipull::cli
