#include "nnlms/lab/runner.hpp"

#include "nnlms/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <system_error>
#include <thread>

namespace nnlms::lab {

namespace {

using nlohmann::json;

json error_json(const StageError& e) {
    return {{"type", e.type}, {"message", e.message}};
}

json algorithm_json(const AlgorithmConfig& a) {
    json j{{"kind", std::string(to_string(a.kind))}, {"step_size", a.step_size}};
    if (a.kind == AlgorithmKind::NormalizedNNLMS) {
        j["epsilon"] = a.epsilon;
    }
    if (a.kind == AlgorithmKind::ExponentialNNLMS) {
        j["gamma"] = a.gamma;
    }
    return j;
}

json config_json(const ExperimentConfig& c) {
    return {
        {"system", {{"true_weights", c.system.true_weights},
                    {"noise_variance", c.system.noise_variance}}},
        {"input", {{"pole", c.process.pole},
                   {"innovation_variance", c.process.innovation_variance},
                   {"input_variance", c.process.stationary_variance()}}},
        {"algorithm", algorithm_json(c.algorithm)},
        {"initial_weights", c.initial_weights},
        {"iterations", c.iterations},
        {"runs", c.runs},
        {"base_seed", c.base_seed},
        {"steady_window_fraction", c.steady_window_fraction},
    };
}

// 1-based tap indices, matching how systems are usually written down.
std::vector<std::size_t> one_based(const std::vector<std::size_t>& idx) {
    std::vector<std::size_t> out;
    out.reserve(idx.size());
    for (auto i : idx) {
        out.push_back(i + 1);
    }
    return out;
}

json prediction_json(const SteadyStatePrediction& p) {
    return {
        {"algorithm", std::string(to_string(p.algorithm))},
        {"step_size", p.step_size},
        {"trace_term", p.trace_term},
        {"mean_weights", p.mean_weights},
        {"positive_set", one_based(p.positive_set)},
        {"zero_set", one_based(p.zero_set)},
        {"bias_vector", p.bias_vector},
        {"emse_bias", p.emse_bias},
        {"emse_fluctuation", p.emse_fluctuation},
        {"emse_total", p.emse_total},
        {"emse_total_db", to_db(p.emse_total)},
    };
}

json ensemble_json(const EnsembleResult& e) {
    return {
        {"steady_state_emse", e.steady_state_emse},
        {"steady_state_emse_db", to_db(e.steady_state_emse)},
        {"steady_state_stderr", e.steady_state_stderr},
        {"runs", e.runs},
        {"diverged_runs", e.diverged_runs},
        {"window_length", e.window_length},
        {"final_mean_weights", e.final_mean_weights},
    };
}

json comparison_json(const ComparisonReport& c) {
    return {
        {"simulated", c.simulated},
        {"predicted", c.predicted},
        {"difference", c.difference},
        {"difference_db", c.difference_db},
        {"standard_error", c.standard_error},
        {"stderr_distance", c.stderr_distance},
        {"tolerance_db", c.tolerance_db},
        {"diverged_runs", c.diverged_runs},
        {"within_tolerance", c.within_tolerance},
        {"flagged", c.flagged},
    };
}

json outcome_json(const EntryOutcome& o, bool include_simulation) {
    json j{
        {"name", o.name},
        {"mean_weights_source", std::string(to_string(o.mean_weights))},
        {"constrained_optimum", o.constrained_optimum},
    };
    if (o.prediction) {
        j["prediction"] = prediction_json(*o.prediction);
    } else if (o.prediction_error) {
        j["prediction"] = {{"error", error_json(*o.prediction_error)}};
    }
    if (include_simulation) {
        j["config"] = config_json(o.config);
        if (o.ensemble) {
            j["ensemble"] = ensemble_json(*o.ensemble);
        } else if (o.ensemble_error) {
            j["ensemble"] = {{"error", error_json(*o.ensemble_error)}};
        }
        j["comparison"] = o.comparison ? comparison_json(*o.comparison) : json(nullptr);
        j["status"] = o.passed() ? "pass" : "fail";
    } else {
        j["algorithm"] = algorithm_json(o.config.algorithm);
    }
    return j;
}

// Theory half shared by run and predict. `mean_weights` is E{w(inf)}.
void predict_into(EntryOutcome& o, const CorrelationModel& corr,
                  std::span<const double> mean_weights,
                  std::optional<double> support_threshold) {
    try {
        o.prediction = predict_steady_state(o.config.algorithm, o.config.system, corr,
                                            mean_weights, support_threshold);
    } catch (const PredictedInstabilityError& e) {
        o.prediction_error = StageError{"predicted-instability", e.what()};
    } catch (const NoConvergenceError& e) {
        o.prediction_error = StageError{"no-convergence", e.what()};
    }
}

EntryOutcome start_entry(const ManifestEntry& entry, MeanWeightsSource source) {
    EntryOutcome o;
    o.name = entry.name;
    o.config = entry.config;
    o.mean_weights = source;
    return o;
}

} // namespace

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string render_trajectory_csv(const EnsembleResult& result) {
    std::string out = "iteration,emse,emse_db\n";
    out.reserve(result.emse_trajectory.size() * 48);
    for (std::size_t n = 0; n < result.emse_trajectory.size(); ++n) {
        const double v = result.emse_trajectory[n];
        out += std::to_string(n);
        out += ',';
        out += format_double(v);
        out += ',';
        out += format_double(to_db(v));
        out += '\n';
    }
    return out;
}

std::string render_report_json(const EntryOutcome& outcome) {
    return outcome_json(outcome, true).dump(2) + "\n";
}

std::string render_predictions_json(const std::string& manifest_name,
                                    const std::vector<EntryOutcome>& outcomes) {
    json entries = json::array();
    for (const auto& o : outcomes) {
        entries.push_back(outcome_json(o, false));
    }
    return json{{"manifest", manifest_name}, {"entries", entries}}.dump(2) + "\n";
}

void write_file_atomically(const std::filesystem::path& path, const std::string& contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw OutputError("cannot open " + tmp.string() + " for writing");
        }
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) {
            throw OutputError("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw OutputError("cannot rename " + tmp.string() + " to " + path.string());
    }
}

unsigned threads_from_environment() {
    const char* raw = std::getenv("NNLMS_LAB_THREADS");
    unsigned n = 0;
    if (raw != nullptr) {
        const std::string_view s(raw);
        const auto res = std::from_chars(s.data(), s.data() + s.size(), n);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
            n = 0;
        }
    }
    return n == 0 ? std::max(1u, std::thread::hardware_concurrency()) : n;
}

std::vector<EntryOutcome> predict_manifest(const RunManifest& manifest) {
    std::vector<EntryOutcome> out;
    for (const auto& entry : manifest.entries) {
        EntryOutcome o = start_entry(entry, MeanWeightsSource::Nnls);
        const auto corr = build_correlation(entry.config.process, entry.config.system.order());
        o.constrained_optimum = solve_constrained_wiener(entry.config.system, corr);
        predict_into(o, corr, o.constrained_optimum, manifest.support_threshold);
        out.push_back(std::move(o));
    }
    return out;
}

RunSummary run_manifest(const RunManifest& manifest, const RunOptions& options) {
    const auto out_dir = options.out_dir.value_or(manifest.outputs);
    const double tolerance = options.tolerance_db.value_or(manifest.tolerance_db);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw OutputError("cannot create output directory " + out_dir.string() + ": " +
                          ec.message());
    }

    RunSummary summary;
    for (const auto& entry : manifest.entries) {
        EntryOutcome o = start_entry(entry, manifest.mean_weights);
        if (options.seed) {
            o.config.base_seed = *options.seed;
        }
        const auto corr = build_correlation(o.config.process, o.config.system.order());
        try {
            o.constrained_optimum = solve_constrained_wiener(o.config.system, corr);
        } catch (const NoConvergenceError& e) {
            o.prediction_error = StageError{"no-convergence", e.what()};
        }

        try {
            o.ensemble = run_ensemble(o.config, options.threads);
        } catch (const EnsembleFailure& e) {
            o.ensemble_error = StageError{"ensemble-failure", e.what()};
        }

        if (!o.prediction_error) {
            if (manifest.mean_weights == MeanWeightsSource::Empirical) {
                if (o.ensemble) {
                    predict_into(o, corr, o.ensemble->final_mean_weights,
                                 manifest.support_threshold);
                } else {
                    o.prediction_error = StageError{
                        "no-empirical-mean", "empirical mean weights need a converged ensemble"};
                }
            } else {
                predict_into(o, corr, o.constrained_optimum, manifest.support_threshold);
            }
        }

        if (o.prediction && o.ensemble) {
            o.comparison = compare(*o.ensemble, *o.prediction, tolerance);
        }

        if (manifest.emit_trajectory_csv && o.ensemble) {
            const auto path = out_dir / (o.name + "-trajectory.csv");
            write_file_atomically(path, render_trajectory_csv(*o.ensemble));
            summary.written.push_back(path);
        }
        if (manifest.emit_report_json) {
            const auto path = out_dir / (o.name + "-report.json");
            write_file_atomically(path, render_report_json(o));
            summary.written.push_back(path);
        }
        if (!o.passed()) {
            summary.exit_status = 1;
        }
        summary.entries.push_back(std::move(o));
    }
    return summary;
}

} // namespace nnlms::lab
