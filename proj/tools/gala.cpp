// gala: train / compare / rebalance / synth entry point.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gala/errors.hpp"
#include "gala/experiment.hpp"

namespace {

gala::ExperimentConfig config_from(const std::string& config_path, const std::string& preset_name) {
    if (!config_path.empty() && !preset_name.empty()) throw gala::ConfigError("use either --config or --preset");
    if (!preset_name.empty()) return gala::preset(preset_name);
    if (config_path.empty()) throw gala::ConfigError("--config or --preset is required");
    return gala::load_experiment_config(config_path);
}

std::optional<std::string> opt(const std::string& s) {
    return s.empty() ? std::nullopt : std::optional<std::string>(s);
}

void finish(const std::filesystem::path& dir, const gala::OutputSet& files) {
    gala::write_outputs(dir, files);
    std::cout << "wrote " << files.size() << " files to " << dir.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gradient-aware logit adjustment experiments for long-tailed classification"};
    app.require_subcommand(1);

    std::string config_path, preset_name, out;

    auto* train = app.add_subcommand("train", "train one model and write checkpoint, history and reports");
    train->add_option("--config", config_path, "experiment config (JSON)");
    train->add_option("--preset", preset_name, "built-in config (paper-analysis)");
    train->add_option("--out", out, "output directory (overrides $GALA_OUT and the config)");

    auto* compare = app.add_subcommand("compare", "train cross-entropy and GALA on identical batches");
    compare->add_option("--config", config_path, "experiment config (JSON)");
    compare->add_option("--preset", preset_name, "built-in config (paper-analysis)");
    compare->add_option("--out", out, "output directory");

    gala::RebalanceRequest rb;
    std::string probs_path, truth_path, counts_path;
    auto* rebalance = app.add_subcommand("rebalance", "post-hoc re-balancing of a probability matrix");
    rebalance->add_option("--probs", probs_path, "probability CSV (B rows, K columns)")->required();
    rebalance->add_option("--tau", rb.tau, "temperature, >= 0")->required();
    rebalance->add_option("--truth", truth_path, "label CSV for evaluation");
    rebalance->add_option("--class-counts", counts_path, "training counts per class, for head/medium/tail groups");
    rebalance->add_option("--head-threshold", rb.head_threshold, "count above which a class is head")
        ->default_val(rb.head_threshold);
    rebalance->add_option("--tail-threshold", rb.tail_threshold, "count below which a class is tail")
        ->default_val(rb.tail_threshold);
    rebalance->add_option("--out", out, "output directory");

    gala::SyntheticSource synth_src;
    auto* synth = app.add_subcommand("synth", "write a synthetic long-tailed dataset as CSV");
    synth->add_option("--k", synth_src.profile.num_classes, "number of classes")->required();
    synth->add_option("--if", synth_src.profile.imbalance_factor, "imbalance factor")->required();
    synth->add_option("--nmax", synth_src.profile.max_count, "samples in the largest class")->required();
    synth->add_option("--dim", synth_src.options.dim, "feature dimension")->required();
    synth->add_option("--seed", synth_src.options.seed, "random seed")->required();
    synth->add_option("--separation", synth_src.options.separation, "radius of the class-mean sphere")
        ->default_val(synth_src.options.separation);
    synth->add_option("--test-per-class", synth_src.options.test_per_class, "balanced test samples per class")
        ->default_val(synth_src.options.test_per_class);
    synth->add_option("--out", out, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) {
            const auto cfg = config_from(config_path, preset_name);
            const auto files = gala::train_outputs(cfg);
            finish(gala::resolve_output_dir(opt(out), cfg.output_dir), files);
        } else if (compare->parsed()) {
            const auto cfg = config_from(config_path, preset_name);
            const auto files = gala::compare_outputs(cfg);
            finish(gala::resolve_output_dir(opt(out), cfg.output_dir), files);
        } else if (rebalance->parsed()) {
            rb.probs = probs_path;
            if (!truth_path.empty()) rb.truth = truth_path;
            if (!counts_path.empty()) rb.class_counts = counts_path;
            const auto files = gala::rebalance_outputs(rb);
            finish(gala::resolve_output_dir(opt(out), "gala_out/rebalance"), files);
        } else if (synth->parsed()) {
            finish(out, gala::synth_outputs(synth_src));
        }
    } catch (const gala::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
