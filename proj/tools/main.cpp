#include <cerrno>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "aoipull/commands.hpp"

namespace {

// 0 = success, 2 = parameter/domain error, 3 = output I/O error
constexpr int kExitParameterError = 2;
constexpr int kExitIoError = 3;

}  // namespace

int main(int argc, char** argv) {
    using aoipull::AgeMode;
    using aoipull::cli::Options;
    using aoipull::cli::SweepAxis;

    CLI::App app{"Age-of-information analysis for replicated pull systems"};
    // Long-form help only: the short -h would collide with the --h model flag.
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_version_flag("--version", aoipull::cli::kToolVersion);
    app.set_config("--config", "", "Read options from a key=value file");
    app.require_subcommand(1);

    Options options;
    int m = 0;
    double lambda = 0.0;
    double mu = 0.0;
    double a = 0.0;
    double h = 0.0;
    int r = 0;
    double theta = 0.0;
    SweepAxis axis = SweepAxis::Lambda;
    std::string out_path;

    app.add_option("--n", options.n, "Total number of servers")->capture_default_str();
    auto* m_opt = app.add_option("--m", m, "Fan-out: servers contacted per request (default: n)");
    auto* lambda_opt = app.add_option("--lambda", lambda, "Update rate at each server");
    auto* mu_opt = app.add_option("--mu", mu, "Exponential response model: service rate");
    auto* a_opt = app.add_option("--a", a, "Uniform response model: offset of [a, a+h]");
    auto* h_opt = app.add_option("--h", h, "Uniform response model: width of [a, a+h]");
    auto* r_opt = app.add_option("--r", r, "Erlang response model: shape (stages)");
    auto* theta_opt = app.add_option("--theta", theta, "Erlang response model: per-stage scale");
    app.add_option("--trials", options.trials, "Monte Carlo trials")->capture_default_str();
    app.add_option("--seed", options.seed, "Random seed")->capture_default_str();
    app.add_option("--age-mode", options.age_mode,
                   "Age sampling: memoryless (stationary draw) or trajectory "
                   "(uniform request epoch on a simulated update history)")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, AgeMode>{{"memoryless", AgeMode::Memoryless},
                                           {"trajectory", AgeMode::Trajectory}},
            CLI::ignore_case))
        ->default_str("memoryless");
    app.add_option("--horizon-factor", options.horizon_factor,
                   "Trajectory mode: horizon is this many mean update intervals")
        ->capture_default_str();
    app.add_option("--threads", options.threads,
                   "Worker threads for simulation (never changes the results)")
        ->capture_default_str();
    auto* out_opt = app.add_option("--out", out_path, "Write the CSV here instead of stdout");

    auto* analytic = app.add_subcommand("analytic", "Closed-form AoI for every k");
    auto* optimal_k = app.add_subcommand("optimal-k", "Closed-form optimal stopping count");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo AoI estimate for every k");
    auto* sweep = app.add_subcommand("sweep", "Optimal k and improvement ratio along an axis");
    for (auto* sub : {analytic, optimal_k, simulate, sweep}) {
        sub->fallthrough();
    }

    auto* axis_opt =
        sweep->add_option("--axis", axis, "Swept parameter: lambda, mu, or n")
            ->transform(CLI::CheckedTransformer(
                std::map<std::string, SweepAxis>{{"lambda", SweepAxis::Lambda},
                                                 {"mu", SweepAxis::Mu},
                                                 {"n", SweepAxis::N}},
                CLI::ignore_case));
    sweep->add_option("--values", options.axis_values,
                      "Comma-separated axis values (default: a built-in grid)")
        ->delimiter(',');
    sweep->add_flag("--empirical", options.empirical,
                    "Also simulate each axis value and report the empirical optimum");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitParameterError;
    }

    if (m_opt->count() > 0) options.m = m;
    if (lambda_opt->count() > 0) options.lambda = lambda;
    if (mu_opt->count() > 0) options.mu = mu;
    if (a_opt->count() > 0) options.a = a;
    if (h_opt->count() > 0) options.h = h;
    if (r_opt->count() > 0) options.r = r;
    if (theta_opt->count() > 0) options.theta = theta;
    if (axis_opt->count() > 0) options.axis = axis;

    std::ostringstream buffer;
    try {
        if (analytic->parsed()) {
            aoipull::cli::run_analytic(options, buffer);
        } else if (optimal_k->parsed()) {
            aoipull::cli::run_optimal_k(options, buffer);
        } else if (simulate->parsed()) {
            aoipull::cli::run_simulate(options, buffer);
        } else {
            aoipull::cli::run_sweep(options, buffer);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParameterError;
    }

    if (out_opt->count() > 0) {
        std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
        if (!file) {
            std::cerr << "error: cannot open '" << out_path
                      << "' for writing: " << std::strerror(errno) << "\n";
            return kExitIoError;
        }
        file << buffer.str();
        file.flush();
        if (!file) {
            std::cerr << "error: failed while writing '" << out_path
                      << "': " << std::strerror(errno) << "\n";
            return kExitIoError;
        }
    } else {
        std::cout << buffer.str();
    }
    return 0;
}
