#ifndef NNLMS_LAB_MANIFEST_HPP
#define NNLMS_LAB_MANIFEST_HPP

#include "nnlms/monte_carlo.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nnlms::lab {

/// Manifest problem, located by key path and 1-based line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string source, std::string key, int line, const std::string& message);

    const std::string& source() const noexcept { return source_; }
    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; }

private:
    std::string source_;
    std::string key_;
    int line_;
};

enum class MeanWeightsSource { Nnls, Empirical };

std::string_view to_string(MeanWeightsSource source) noexcept;

struct ManifestEntry {
    std::string name;
    ExperimentConfig config;
};

struct RunManifest {
    std::string name;
    std::vector<ManifestEntry> entries;
    std::filesystem::path outputs = "out";
    bool emit_trajectory_csv = true;
    bool emit_report_json = true;
    double tolerance_db = 1.0;
    MeanWeightsSource mean_weights = MeanWeightsSource::Nnls;
    std::optional<double> support_threshold;
};

/// Reads and validates a JSON manifest. Unknown keys are rejected.
RunManifest parse_config(const std::filesystem::path& path);

/// As parse_config() on in-memory text; `source` names it in errors.
RunManifest parse_config_text(std::string_view text, std::string_view source);

} // namespace nnlms::lab

#endif // NNLMS_LAB_MANIFEST_HPP
