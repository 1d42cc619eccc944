#include "nnlms/lab/manifest.hpp"

#include "nnlms/lab/json_lines.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace nnlms::lab {

namespace {

using nlohmann::json;

// Pointer "/algorithms/2/gamma" rendered as "algorithms[2].gamma".
std::string display_key(std::string_view pointer) {
    std::string out;
    std::size_t pos = 1;
    while (pos <= pointer.size() && !pointer.empty()) {
        const std::size_t next = pointer.find('/', pos);
        const std::string_view part =
            pointer.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
        const bool index = !part.empty() && std::all_of(part.begin(), part.end(),
                                                        [](char c) { return c >= '0' && c <= '9'; });
        if (index) {
            out += "[" + std::string(part) + "]";
        } else {
            if (!out.empty()) {
                out += ".";
            }
            out += part;
        }
        if (next == std::string_view::npos) {
            break;
        }
        pos = next + 1;
    }
    return out.empty() ? "<root>" : out;
}

class Reader {
public:
    Reader(std::string_view text, std::string source, json doc)
        : lines_(text), source_(std::move(source)), doc_(std::move(doc)) {}

    [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
        throw ConfigError(source_, display_key(pointer), lines_.line_of(pointer), message);
    }

    const json& root() const { return doc_; }

    void check_object(const json& node, const std::string& pointer,
                      std::initializer_list<std::string_view> allowed) const {
        if (!node.is_object()) {
            fail(pointer, "expected an object");
        }
        for (const auto& [key, _] : node.items()) {
            if (key == "comment") {
                continue;
            }
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
                fail(pointer + "/" + key, "unknown key '" + key + "'");
            }
        }
    }

    const json& require(const json& node, const std::string& pointer, const std::string& key) const {
        auto it = node.find(key);
        if (it == node.end()) {
            throw ConfigError(source_, display_key(pointer + "/" + key), lines_.line_of(pointer),
                              "missing required key '" + key + "'");
        }
        return *it;
    }

    double number(const json& node, const std::string& pointer) const {
        if (!node.is_number()) {
            fail(pointer, "expected a number");
        }
        const double v = node.get<double>();
        if (!std::isfinite(v)) {
            fail(pointer, "expected a finite number");
        }
        return v;
    }

    std::uint64_t unsigned_integer(const json& node, const std::string& pointer) const {
        if (!node.is_number_unsigned()) {
            fail(pointer, "expected a non-negative integer");
        }
        return node.get<std::uint64_t>();
    }

    std::string string(const json& node, const std::string& pointer) const {
        if (!node.is_string()) {
            fail(pointer, "expected a string");
        }
        return node.get<std::string>();
    }

    std::vector<double> vector(const json& node, const std::string& pointer) const {
        if (!node.is_array() || node.empty()) {
            fail(pointer, "expected a non-empty array of numbers");
        }
        std::vector<double> out;
        for (std::size_t i = 0; i < node.size(); ++i) {
            out.push_back(number(node[i], pointer + "/" + std::to_string(i)));
        }
        return out;
    }

    // Scalar broadcasts to every tap.
    std::vector<double> weights(const json& node, const std::string& pointer, std::size_t taps) const {
        if (node.is_number()) {
            return std::vector<double>(taps, number(node, pointer));
        }
        auto w = vector(node, pointer);
        if (w.size() != taps) {
            fail(pointer, "expected " + std::to_string(taps) + " entries, got " +
                              std::to_string(w.size()));
        }
        return w;
    }

private:
    JsonLineIndex lines_;
    std::string source_;
    json doc_;
};

bool valid_entry_name(const std::string& name) {
    return !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
               c == '-' || c == '_' || c == '.';
    }) && name.front() != '.';
}

} // namespace

ConfigError::ConfigError(std::string source, std::string key, int line, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + key + ": " + message),
      source_(std::move(source)), key_(std::move(key)), line_(line) {}

std::string_view to_string(MeanWeightsSource source) noexcept {
    return source == MeanWeightsSource::Nnls ? "nnls" : "empirical";
}

RunManifest parse_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(path.string(), "<file>", 0, "cannot open manifest");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw ConfigError(path.string(), "<file>", 0, "read error");
    }
    RunManifest m = parse_config_text(buf.str(), path.string());
    if (m.name.empty()) {
        m.name = path.stem().string();
    }
    return m;
}

RunManifest parse_config_text(std::string_view text, std::string_view source) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string(source), "<document>",
                          line_at_offset(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
    }
    const Reader r(text, std::string(source), std::move(doc));
    const json& root = r.root();

    r.check_object(root, "",
                   {"name", "system", "input", "initial_weights", "iterations", "runs",
                    "base_seed", "steady_window_fraction", "tolerance_db", "mean_weights",
                    "support_threshold", "outputs", "emit", "algorithms"});

    RunManifest m;
    if (root.contains("name")) {
        m.name = r.string(root["name"], "/name");
    }

    const json& sys = r.require(root, "", "system");
    r.check_object(sys, "/system", {"true_weights", "noise_variance"});
    SystemModel system;
    system.true_weights = r.vector(r.require(sys, "/system", "true_weights"), "/system/true_weights");
    system.noise_variance =
        r.number(r.require(sys, "/system", "noise_variance"), "/system/noise_variance");
    if (system.noise_variance < 0.0) {
        r.fail("/system/noise_variance", "must be >= 0");
    }

    const json& input = r.require(root, "", "input");
    r.check_object(input, "/input", {"pole", "innovation_variance"});
    Ar1Process process;
    process.pole = r.number(r.require(input, "/input", "pole"), "/input/pole");
    process.innovation_variance = r.number(r.require(input, "/input", "innovation_variance"),
                                           "/input/innovation_variance");
    if (std::abs(process.pole) >= 1.0) {
        r.fail("/input/pole", "AR(1) pole must satisfy |pole| < 1");
    }
    if (process.innovation_variance <= 0.0) {
        r.fail("/input/innovation_variance", "must be > 0");
    }

    const std::size_t taps = system.order();
    const auto initial = r.weights(r.require(root, "", "initial_weights"), "/initial_weights", taps);
    const auto iterations = r.unsigned_integer(r.require(root, "", "iterations"), "/iterations");
    const auto runs = r.unsigned_integer(r.require(root, "", "runs"), "/runs");
    const auto base_seed = r.unsigned_integer(r.require(root, "", "base_seed"), "/base_seed");
    if (iterations < 100) {
        r.fail("/iterations", "must be >= 100");
    }
    if (runs < 1) {
        r.fail("/runs", "must be >= 1");
    }
    double window = 0.2;
    if (root.contains("steady_window_fraction")) {
        window = r.number(root["steady_window_fraction"], "/steady_window_fraction");
        if (!(window > 0.0 && window <= 0.5)) {
            r.fail("/steady_window_fraction", "must lie in (0, 0.5]");
        }
    }
    if (root.contains("tolerance_db")) {
        m.tolerance_db = r.number(root["tolerance_db"], "/tolerance_db");
        if (m.tolerance_db < 0.0) {
            r.fail("/tolerance_db", "must be >= 0");
        }
    }
    if (root.contains("mean_weights")) {
        const auto s = r.string(root["mean_weights"], "/mean_weights");
        if (s == "nnls") {
            m.mean_weights = MeanWeightsSource::Nnls;
        } else if (s == "empirical") {
            m.mean_weights = MeanWeightsSource::Empirical;
        } else {
            r.fail("/mean_weights", "expected \"nnls\" or \"empirical\"");
        }
    }
    if (root.contains("support_threshold")) {
        const double t = r.number(root["support_threshold"], "/support_threshold");
        if (!(t > 0.0)) {
            r.fail("/support_threshold", "must be > 0");
        }
        m.support_threshold = t;
    }
    if (root.contains("outputs")) {
        m.outputs = r.string(root["outputs"], "/outputs");
    }
    if (root.contains("emit")) {
        const json& emit = root["emit"];
        if (!emit.is_array() || emit.empty()) {
            r.fail("/emit", "expected a non-empty array");
        }
        m.emit_trajectory_csv = false;
        m.emit_report_json = false;
        for (std::size_t i = 0; i < emit.size(); ++i) {
            const auto p = "/emit/" + std::to_string(i);
            const auto s = r.string(emit[i], p);
            if (s == "trajectory-csv") {
                m.emit_trajectory_csv = true;
            } else if (s == "report-json") {
                m.emit_report_json = true;
            } else {
                r.fail(p, "expected \"trajectory-csv\" or \"report-json\"");
            }
        }
    }

    const json& algos = r.require(root, "", "algorithms");
    if (!algos.is_array() || algos.empty()) {
        r.fail("/algorithms", "expected a non-empty array of algorithm entries");
    }
    std::set<std::string> names;
    for (std::size_t i = 0; i < algos.size(); ++i) {
        const std::string p = "/algorithms/" + std::to_string(i);
        const json& a = algos[i];
        r.check_object(a, p,
                       {"name", "kind", "step_size", "epsilon", "gamma", "iterations", "runs",
                        "initial_weights"});
        ManifestEntry entry;
        entry.name = r.string(r.require(a, p, "name"), p + "/name");
        if (!valid_entry_name(entry.name)) {
            r.fail(p + "/name", "names may use letters, digits, '-', '_' and '.' only");
        }
        if (!names.insert(entry.name).second) {
            r.fail(p + "/name", "duplicate entry name '" + entry.name + "'");
        }

        const auto kind_name = r.string(r.require(a, p, "kind"), p + "/kind");
        const auto kind = parse_algorithm_kind(kind_name);
        if (!kind) {
            r.fail(p + "/kind", "unknown algorithm kind '" + kind_name +
                                    "' (expected NNLMS, NormalizedNNLMS, ExponentialNNLMS, "
                                    "SignSignNNLMS or PlainLMS)");
        }
        AlgorithmConfig algo;
        algo.kind = *kind;
        algo.step_size = r.number(r.require(a, p, "step_size"), p + "/step_size");
        if (!(algo.step_size > 0.0)) {
            r.fail(p + "/step_size", "must be > 0");
        }
        if (a.contains("epsilon")) {
            if (algo.kind != AlgorithmKind::NormalizedNNLMS) {
                r.fail(p + "/epsilon", "epsilon only applies to NormalizedNNLMS");
            }
            algo.epsilon = r.number(a["epsilon"], p + "/epsilon");
            if (algo.epsilon < 0.0) {
                r.fail(p + "/epsilon", "must be >= 0");
            }
        }
        if (algo.kind == AlgorithmKind::ExponentialNNLMS) {
            algo.gamma = r.number(r.require(a, p, "gamma"), p + "/gamma");
            if (!(algo.gamma > 0.0 && algo.gamma <= 1.0)) {
                r.fail(p + "/gamma", "must lie in (0, 1]");
            }
        } else if (a.contains("gamma")) {
            r.fail(p + "/gamma", "gamma only applies to ExponentialNNLMS");
        }

        ExperimentConfig& c = entry.config;
        c.system = system;
        c.process = process;
        c.algorithm = algo;
        c.initial_weights = a.contains("initial_weights")
                                ? r.weights(a["initial_weights"], p + "/initial_weights", taps)
                                : initial;
        c.iterations = a.contains("iterations")
                           ? r.unsigned_integer(a["iterations"], p + "/iterations")
                           : iterations;
        c.runs = a.contains("runs") ? r.unsigned_integer(a["runs"], p + "/runs") : runs;
        if (c.iterations < 100) {
            r.fail(p + "/iterations", "must be >= 100");
        }
        if (c.runs < 1) {
            r.fail(p + "/runs", "must be >= 1");
        }
        c.base_seed = base_seed;
        c.steady_window_fraction = window;
        m.entries.push_back(std::move(entry));
    }
    return m;
}

} // namespace nnlms::lab
