// nnlms-lab: steady-state EMSE theory vs Monte Carlo for the NNLMS family.
//
//   nnlms-lab run <manifest.json> [--out DIR] [--tolerance-db X] [--seed S]
//   nnlms-lab predict <manifest.json>
//   nnlms-lab nnls --weights w1,w2,... --pole P --var V

#include "nnlms/lab/manifest.hpp"
#include "nnlms/lab/runner.hpp"
#include "nnlms/theory.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

int run_command(const std::string& manifest_path, const nnlms::lab::RunOptions& options) {
    const auto manifest = nnlms::lab::parse_config(manifest_path);
    const auto summary = nnlms::lab::run_manifest(manifest, options);
    for (const auto& e : summary.entries) {
        std::cout << e.name << ": ";
        if (e.comparison) {
            const auto& c = *e.comparison;
            std::cout << "simulated " << nnlms::lab::format_double(c.simulated) << " ("
                      << nnlms::lab::format_double(nnlms::to_db(c.simulated)) << " dB), predicted "
                      << nnlms::lab::format_double(c.predicted) << " ("
                      << nnlms::lab::format_double(nnlms::to_db(c.predicted)) << " dB), diff "
                      << nnlms::lab::format_double(c.difference_db) << " dB";
            if (c.flagged) {
                std::cout << ", " << c.diverged_runs << " diverged runs excluded";
            }
        }
        if (e.prediction_error) {
            std::cout << "prediction error: " << e.prediction_error->message;
        }
        if (e.ensemble_error) {
            std::cout << (e.prediction_error ? "; " : "")
                      << "ensemble error: " << e.ensemble_error->message;
        }
        std::cout << (e.passed() ? "  [pass]" : "  [FAIL]") << "\n";
    }
    for (const auto& p : summary.written) {
        std::cout << "wrote " << p.string() << "\n";
    }
    return summary.exit_status == 0 ? 0 : kExitFailure;
}

int predict_command(const std::string& manifest_path) {
    const auto manifest = nnlms::lab::parse_config(manifest_path);
    const auto outcomes = nnlms::lab::predict_manifest(manifest);
    std::cout << nnlms::lab::render_predictions_json(manifest.name, outcomes);
    for (const auto& o : outcomes) {
        if (o.prediction_error) {
            return kExitFailure;
        }
    }
    return 0;
}

int nnls_command(const std::vector<double>& weights, double pole, double innovation_variance) {
    nnlms::SystemModel model{weights, 0.0};
    const auto corr = nnlms::build_correlation(nnlms::Ar1Process{pole, innovation_variance, 0},
                                               weights.size());
    const auto optimum = nnlms::solve_constrained_wiener(model, corr);
    const auto kkt = nnlms::kkt_residuals(optimum, model, corr);
    const auto support =
        nnlms::classify_support(optimum, nnlms::default_support_threshold(optimum));

    std::vector<double> bias(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        bias[i] = optimum[i] - weights[i];
    }

    std::cout << "constrained optimum:";
    for (double w : optimum) {
        std::cout << ' ' << nnlms::lab::format_double(w);
    }
    std::cout << "\nzero set (1-based):";
    for (auto i : support.zero) {
        std::cout << ' ' << i + 1;
    }
    std::cout << "\nbias emse: " << nnlms::lab::format_double(nnlms::emse_bias_term(bias, corr))
              << "\nkkt residuals: primal " << nnlms::lab::format_double(kkt.primal)
              << ", stationarity " << nnlms::lab::format_double(kkt.stationarity) << ", dual "
              << nnlms::lab::format_double(kkt.dual) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Non-negative LMS steady-state laboratory"};
    app.require_subcommand(1);

    std::string manifest_path;
    nnlms::lab::RunOptions run_options;
    std::string out_dir;
    double tolerance_db = 0.0;
    std::uint64_t seed = 0;

    auto* run = app.add_subcommand("run", "Simulate every manifest entry and compare with theory");
    run->add_option("manifest", manifest_path, "Manifest JSON file")->required();
    auto* out_opt = run->add_option("--out", out_dir, "Output directory (overrides manifest)");
    auto* tol_opt = run->add_option("--tolerance-db", tolerance_db, "Pass band in dB")
                        ->check(CLI::NonNegativeNumber);
    auto* seed_opt = run->add_option("--seed", seed, "Base seed (overrides manifest)");

    auto* predict = app.add_subcommand("predict", "Theory only: steady-state predictions");
    predict->add_option("manifest", manifest_path, "Manifest JSON file")->required();

    std::vector<double> weights;
    double pole = 0.0;
    double variance = 1.0;
    auto* nnls = app.add_subcommand("nnls", "Non-negative Wiener solution for an AR(1) input");
    nnls->add_option("--weights", weights, "True weights, comma separated")
        ->required()
        ->delimiter(',');
    nnls->add_option("--pole", pole, "AR(1) pole")->required();
    nnls->add_option("--var", variance, "AR(1) innovation variance")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            if (*out_opt) {
                run_options.out_dir = out_dir;
            }
            if (*tol_opt) {
                run_options.tolerance_db = tolerance_db;
            }
            if (*seed_opt) {
                run_options.seed = seed;
            }
            run_options.threads = nnlms::lab::threads_from_environment();
            return run_command(manifest_path, run_options);
        }
        if (*predict) {
            return predict_command(manifest_path);
        }
        return nnls_command(weights, pole, variance);
    } catch (const nnlms::lab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nnlms::lab::OutputError& e) {
        std::cerr << "output error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}
