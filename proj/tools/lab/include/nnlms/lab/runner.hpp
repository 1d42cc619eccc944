#ifndef NNLMS_LAB_RUNNER_HPP
#define NNLMS_LAB_RUNNER_HPP

#include "nnlms/lab/manifest.hpp"
#include "nnlms/monte_carlo.hpp"
#include "nnlms/theory.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nnlms::lab {

/// Output file could not be written.
class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunOptions {
    std::optional<std::filesystem::path> out_dir;
    std::optional<double> tolerance_db;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
};

struct StageError {
    std::string type; // "predicted-instability", "ensemble-failure", ...
    std::string message;
};

struct EntryOutcome {
    std::string name;
    ExperimentConfig config;
    MeanWeightsSource mean_weights = MeanWeightsSource::Nnls;
    std::vector<double> constrained_optimum;
    std::optional<SteadyStatePrediction> prediction;
    std::optional<StageError> prediction_error;
    std::optional<EnsembleResult> ensemble;
    std::optional<StageError> ensemble_error;
    std::optional<ComparisonReport> comparison;

    bool passed() const noexcept {
        return comparison && comparison->passed() && !prediction_error && !ensemble_error;
    }
};

struct RunSummary {
    std::vector<EntryOutcome> entries;
    std::vector<std::filesystem::path> written;
    int exit_status = 0; // 0 iff every entry passed
};

/// Theory plus simulation for every entry; writes <name>-trajectory.csv and
/// <name>-report.json into the output directory. Throws OutputError on I/O
/// failure.
RunSummary run_manifest(const RunManifest& manifest, const RunOptions& options = {});

/// Theory only, always with the non-negative Wiener solution as E{w(inf)}.
std::vector<EntryOutcome> predict_manifest(const RunManifest& manifest);

/// Header "iteration,emse,emse_db", one row per iteration, shortest
/// round-trip decimals, '\n' line endings.
std::string render_trajectory_csv(const EnsembleResult& result);

/// Full report with sorted keys, two-space indent and a trailing newline.
std::string render_report_json(const EntryOutcome& outcome);

/// Prediction-only document emitted by `nnlms-lab predict`.
std::string render_predictions_json(const std::string& manifest_name,
                                    const std::vector<EntryOutcome>& outcomes);

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomically(const std::filesystem::path& path, const std::string& contents);

/// Shortest decimal that round-trips to `value`.
std::string format_double(double value);

/// NNLMS_LAB_THREADS: unset or 0 means hardware concurrency.
unsigned threads_from_environment();

} // namespace nnlms::lab

#endif // NNLMS_LAB_RUNNER_HPP
