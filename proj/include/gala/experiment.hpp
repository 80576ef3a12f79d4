#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "gala/data.hpp"
#include "gala/evaluation.hpp"
#include "gala/trainer.hpp"

namespace gala {

struct SyntheticSource {
    LongTailProfile profile;
    SynthOptions options;
};

struct CsvSource {
    std::filesystem::path train;
    std::filesystem::path test;
};

struct ExperimentConfig {
    std::variant<SyntheticSource, CsvSource> data;
    TrainConfig train;
    std::size_t head_threshold = 100;
    std::size_t tail_threshold = 20;
    std::string output_dir = "gala_out";
    bool emit_csv = true;  // figure-data and per-class CSV tables
};

/// Strict parse: unknown keys, wrong types and missing data source are
/// ConfigErrors.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Fully resolved config, without output_dir. Feeding it back to
/// parse_experiment_config reproduces the run.
nlohmann::json to_json(const ExperimentConfig& config);

/// Named presets; "paper-analysis" is the seeded K=10, IF=100 benchmark.
ExperimentConfig preset(const std::string& name);

/// Relative file path -> contents, in write order.
using OutputSet = std::map<std::string, std::string>;

/// Writes every file under dir, creating directories as needed.
void write_outputs(const std::filesystem::path& dir, const OutputSet& files);

struct LoadedData {
    SplitDataset split;
    GroupAssignment groups;
};

LoadedData load_data(const ExperimentConfig& config);

/// Everything one training run reports, kept in memory for callers that
/// need more than the files.
struct RunArtifacts {
    TrainResult result;
    Matrix test_probs;
    EvalReport raw;
    EvalReport rebalanced;
};

RunArtifacts run_single(const ExperimentConfig& config, const LoadedData& data);

/// Files of one training run (checkpoint, history, accumulators, reports,
/// test probabilities, figure CSVs) plus manifest.json.
OutputSet train_outputs(const ExperimentConfig& config);

/// CE and GALA with identical seeds and batch order: ce/*, gala/*,
/// comparison.json, manifest.json.
OutputSet compare_outputs(const ExperimentConfig& config);

struct RebalanceRequest {
    std::filesystem::path probs;
    double tau = 1.0;
    std::optional<std::filesystem::path> truth;
    std::optional<std::filesystem::path> class_counts;
    std::size_t head_threshold = 100;
    std::size_t tail_threshold = 20;
};

/// rebalanced_probs.csv, predictions.csv and, with truth labels,
/// eval.json holding reports for tau = 0 and the requested tau.
OutputSet rebalance_outputs(const RebalanceRequest& request);

/// train.csv, test.csv and class_counts.csv for a synthetic profile.
OutputSet synth_outputs(const SyntheticSource& source);

/// Output directory precedence: explicit flag, then $GALA_OUT, then fallback.
std::filesystem::path resolve_output_dir(const std::optional<std::string>& flag, const std::string& fallback);

}  // namespace gala
