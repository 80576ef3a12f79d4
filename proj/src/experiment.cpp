#include "gala/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>

#include "csv_util.hpp"
#include "gala/errors.hpp"
#include "gala/format.hpp"
#include "gala/kernels.hpp"
#include "gala/rebalance.hpp"

namespace gala {

namespace {

using nlohmann::json;

// Reads keys of one JSON object and rejects any key it was not asked about.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_ + " must be a JSON object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    template <typename T>
    T get(const std::string& key, T fallback) {
        seen_.insert(key);
        if (!j_.contains(key)) return fallback;
        return convert<T>(key);
    }

    template <typename T>
    T require(const std::string& key) {
        seen_.insert(key);
        if (!j_.contains(key)) throw ConfigError(path_ + "." + key + " is required");
        return convert<T>(key);
    }

    Section child(const std::string& key) {
        seen_.insert(key);
        return Section(j_.at(key), path_ + "." + key);
    }

    void finish() const {
        for (const auto& [key, value] : j_.items()) {
            (void)value;
            if (!seen_.count(key)) throw ConfigError("unknown key " + path_ + "." + key);
        }
    }

private:
    template <typename T>
    T convert(const std::string& key) const {
        const json& v = j_.at(key);
        if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean()) throw ConfigError(path_ + "." + key + " must be a boolean");
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) throw ConfigError(path_ + "." + key + " must be a string");
        } else if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw ConfigError(path_ + "." + key + " must be a non-negative integer");
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!v.is_number()) throw ConfigError(path_ + "." + key + " must be a number");
        }
        return v.get<T>();
    }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string header_row(const char* first, std::size_t K, const char* prefix = "class_") {
    std::string out = first;
    for (std::size_t k = 0; k < K; ++k) out += std::string(",") + prefix + std::to_string(k);
    return out + "\n";
}

std::string cell(double v) { return std::isfinite(v) ? format_real(v) : std::string(); }

// One row per epoch, one column per class.
template <typename RowFn>
std::string epoch_table(const TrainHistory& history, std::size_t K, RowFn row_of) {
    std::string out = header_row("epoch", K);
    for (const auto& rec : history.epochs) {
        out += std::to_string(rec.epoch);
        const Vector row = row_of(rec);
        for (double v : row) out += "," + cell(v);
        out += "\n";
    }
    return out;
}

Vector ratio_or_nan(const GradAccumulators& acc) {
    Vector out(acc.num_classes(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t j = 0; j < out.size(); ++j)
        if (acc.nu[j] > 0.0) out[j] = acc.theta[j] / acc.nu[j];
    return out;
}

double spread(const Vector& v) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double x : v) {
        if (!std::isfinite(x)) return std::numeric_limits<double>::quiet_NaN();
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    return lo > 0.0 ? hi / lo : std::numeric_limits<double>::quiet_NaN();
}

double group_mean(const Vector& v, const GroupAssignment& groups, Group g) {
    double acc = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (groups[k] != g || !std::isfinite(v[k])) continue;
        acc += v[k];
        ++n;
    }
    return n == 0 ? std::numeric_limits<double>::quiet_NaN() : acc / static_cast<double>(n);
}

std::vector<std::size_t> load_counts_csv(const std::filesystem::path& path) {
    // Same layout as a label file: optional header, one integer per line.
    return load_labels_csv(path);
}

struct RunSummary {
    json summary;
    OutputSet files;
};

RunSummary single_run_files(const ExperimentConfig& config, const LoadedData& data, const RunArtifacts& art) {
    const auto& train_data = data.split.train;
    const auto& test_data = data.split.test;
    const auto& result = art.result;
    const std::size_t K = train_data.num_classes();
    OutputSet files;

    files["checkpoint.json"] = dump(to_json(result.params));

    std::string history, accumulators;
    for (const auto& rec : result.history.epochs) {
        history += to_json(rec).dump() + "\n";
        accumulators += to_json(rec.accumulators, rec.epoch).dump() + "\n";
    }
    files["history.jsonl"] = history;
    files["accumulators.jsonl"] = accumulators;

    files["test_probs.csv"] = probs_to_csv(art.test_probs);
    files["test_labels.csv"] = labels_to_csv(test_data.labels);
    files["class_counts.csv"] = labels_to_csv(train_data.class_counts, "count");

    const Vector ratio = ratio_or_nan(result.accumulators);
    const Vector phi_dist = produced_negative_distribution(result.accumulators, true);
    const Vector train_sim = result.history.epochs.back().similarity;
    std::vector<CrossSimilarity> cross;
    bool has_cross = false;
    try {
        cross = cross_similarity_report(result.params, train_data, data.groups);
        has_cross = true;
    } catch (const DegenerateInputError&) {
        // needs both head and tail classes and every class populated
    }

    json groups = json::array();
    for (auto g : data.groups) groups.push_back(to_string(g));
    json cross_json = nullptr;
    if (has_cross) {
        cross_json = json::array();
        for (const auto& c : cross) cross_json.push_back({{"to_head", number_or_null(c.to_head)}, {"to_tail", number_or_null(c.to_tail)}});
    }
    json ratio_json = json::array(), sim_json = json::array();
    for (double v : ratio) ratio_json.push_back(number_or_null(v));
    for (double v : train_sim) sim_json.push_back(number_or_null(v));

    const double tail_sim = group_mean(train_sim, data.groups, Group::tail);
    json report = {{"loss", to_string(config.train.loss_kind)},
                   {"tau", config.train.tau},
                   {"groups", groups},
                   {"train_class_counts", train_data.class_counts},
                   {"final_mean_loss", result.history.epochs.back().mean_loss},
                   {"eval", {{"tau_0", to_json(art.raw)}, {"rebalanced", to_json(art.rebalanced)}}},
                   {"diagnostics",
                    {{"gradient_ratio", ratio_json},
                     {"gradient_ratio_spread", number_or_null(spread(ratio))},
                     {"phi_distribution", phi_dist},
                     {"weight_norms", weight_norms(result.params)},
                     {"similarity", sim_json},
                     {"tail_similarity_mean", number_or_null(tail_sim)},
                     {"cross_similarity", cross_json}}}};
    files["report.json"] = dump(report);

    if (config.emit_csv) {
        files["gradient_ratio.csv"] =
            epoch_table(result.history, K, [](const EpochRecord& r) { return ratio_or_nan(r.accumulators); });
        files["phi_distribution.csv"] = epoch_table(result.history, K, [](const EpochRecord& r) {
            return produced_negative_distribution(r.accumulators, true);
        });
        files["similarity.csv"] = epoch_table(result.history, K, [](const EpochRecord& r) { return r.similarity; });
        files["weight_norms.csv"] = epoch_table(result.history, K, [](const EpochRecord& r) { return r.weight_norms; });

        std::string neg = header_row("source", K, "to_class_");
        for (std::size_t k = 0; k < K; ++k) {
            neg += std::to_string(k);
            for (double v : result.accumulators.cross.row(k)) neg += "," + cell(v);
            neg += "\n";
        }
        files["negative_gradient_matrix.csv"] = neg;

        std::string per_class =
            "class,train_count,group,accuracy,accuracy_rebalanced,positive_predictions,positive_predictions_rebalanced,"
            "gradient_ratio,phi,similarity,to_head,to_tail\n";
        for (std::size_t k = 0; k < K; ++k) {
            per_class += std::to_string(k) + "," + std::to_string(train_data.class_counts[k]) + "," +
                         to_string(data.groups[k]) + "," + cell(art.raw.per_class_accuracy[k]) + "," +
                         cell(art.rebalanced.per_class_accuracy[k]) + "," +
                         std::to_string(art.raw.positive_prediction_counts[k]) + "," +
                         std::to_string(art.rebalanced.positive_prediction_counts[k]) + "," + cell(ratio[k]) + "," +
                         cell(result.accumulators.phi[k]) + "," + cell(train_sim[k]) + "," +
                         (has_cross ? cell(cross[k].to_head) : "") + "," + (has_cross ? cell(cross[k].to_tail) : "") +
                         "\n";
        }
        files["per_class.csv"] = per_class;
    }

    json summary = {{"top1", number_or_null(art.raw.top1)},
                    {"top1_rebalanced", number_or_null(art.rebalanced.top1)},
                    {"head_accuracy", number_or_null(art.raw.group_accuracy.head)},
                    {"medium_accuracy", number_or_null(art.raw.group_accuracy.medium)},
                    {"tail_accuracy", number_or_null(art.raw.group_accuracy.tail)},
                    {"tail_accuracy_rebalanced", number_or_null(art.rebalanced.group_accuracy.tail)},
                    {"gradient_ratio_spread", number_or_null(spread(ratio))},
                    {"tail_similarity_mean", number_or_null(tail_sim)},
                    {"epoch1_mean_loss", result.history.epochs.front().mean_loss},
                    {"final_mean_loss", result.history.epochs.back().mean_loss}};
    return {std::move(summary), std::move(files)};
}

}  // namespace

ExperimentConfig parse_experiment_config(const json& j) {
    ExperimentConfig cfg;
    Section root(j, "config");

    if (!root.has("data")) throw ConfigError("config.data is required");
    Section data = root.child("data");
    const bool synthetic = data.has("synthetic");
    const bool csv_source = data.has("csv");
    if (synthetic == csv_source) throw ConfigError("config.data needs exactly one of 'synthetic' or 'csv'");
    if (synthetic) {
        Section s = data.child("synthetic");
        SyntheticSource src;
        src.profile.num_classes = s.get<std::size_t>("num_classes", src.profile.num_classes);
        src.profile.max_count = s.get<std::size_t>("max_count", src.profile.max_count);
        src.profile.imbalance_factor = s.get<double>("imbalance_factor", src.profile.imbalance_factor);
        src.options.dim = s.get<std::size_t>("dim", src.options.dim);
        src.options.separation = s.get<double>("separation", src.options.separation);
        src.options.seed = s.get<std::uint64_t>("seed", src.options.seed);
        src.options.test_per_class = s.get<std::size_t>("test_per_class", src.options.test_per_class);
        s.finish();
        src.profile.validate();
        cfg.data = src;
    } else {
        Section s = data.child("csv");
        cfg.data = CsvSource{s.require<std::string>("train"), s.require<std::string>("test")};
        s.finish();
    }
    data.finish();

    if (root.has("train")) {
        Section t = root.child("train");
        auto& tc = cfg.train;
        tc.loss_kind = parse_loss_kind(t.get<std::string>("loss", to_string(tc.loss_kind)));
        tc.epochs = t.get<std::size_t>("epochs", tc.epochs);
        tc.batch_size = t.get<std::size_t>("batch_size", tc.batch_size);
        tc.base_lr = t.get<double>("base_lr", tc.base_lr);
        tc.momentum = t.get<double>("momentum", tc.momentum);
        tc.seed = t.get<std::uint64_t>("seed", tc.seed);
        tc.eps_floor = t.get<double>("eps_floor", tc.eps_floor);
        tc.use_bias = t.get<bool>("use_bias", tc.use_bias);
        tc.tau = t.get<double>("tau", tc.tau);
        tc.init_scale = t.get<double>("init_scale", tc.init_scale);
        t.finish();
    }
    cfg.train.validate();

    if (root.has("groups")) {
        Section g = root.child("groups");
        cfg.head_threshold = g.get<std::size_t>("head_threshold", cfg.head_threshold);
        cfg.tail_threshold = g.get<std::size_t>("tail_threshold", cfg.tail_threshold);
        g.finish();
    }
    if (cfg.head_threshold <= cfg.tail_threshold) throw ConfigError("head_threshold must exceed tail_threshold");

    cfg.output_dir = root.get<std::string>("output_dir", cfg.output_dir);
    if (root.has("report_formats")) {
        const auto formats = root.get<std::vector<std::string>>("report_formats", {});
        cfg.emit_csv = false;
        for (const auto& f : formats) {
            if (f == "csv")
                cfg.emit_csv = true;
            else if (f != "json")
                throw ConfigError("unknown report format '" + f + "' (expected json or csv)");
        }
    }
    root.finish();
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("'" + path.string() + "': " + e.what());
    }
    try {
        return parse_experiment_config(j);
    } catch (const json::exception& e) {
        throw ConfigError("'" + path.string() + "': " + e.what());
    }
}

json to_json(const ExperimentConfig& config) {
    json data;
    if (const auto* s = std::get_if<SyntheticSource>(&config.data)) {
        data["synthetic"] = {{"num_classes", s->profile.num_classes},
                             {"max_count", s->profile.max_count},
                             {"imbalance_factor", s->profile.imbalance_factor},
                             {"dim", s->options.dim},
                             {"separation", s->options.separation},
                             {"seed", s->options.seed},
                             {"test_per_class", s->options.test_per_class}};
    } else {
        const auto& c = std::get<CsvSource>(config.data);
        data["csv"] = {{"train", c.train.string()}, {"test", c.test.string()}};
    }
    const auto& t = config.train;
    json formats = json::array({"json"});
    if (config.emit_csv) formats.push_back("csv");
    return {{"data", data},
            {"train",
             {{"loss", to_string(t.loss_kind)},
              {"epochs", t.epochs},
              {"batch_size", t.batch_size},
              {"base_lr", t.base_lr},
              {"momentum", t.momentum},
              {"seed", t.seed},
              {"eps_floor", t.eps_floor},
              {"use_bias", t.use_bias},
              {"tau", t.tau},
              {"init_scale", t.init_scale}}},
            {"groups", {{"head_threshold", config.head_threshold}, {"tail_threshold", config.tail_threshold}}},
            {"report_formats", formats}};
}

ExperimentConfig preset(const std::string& name) {
    if (name != "paper-analysis") throw ConfigError("unknown preset '" + name + "' (available: paper-analysis)");
    ExperimentConfig cfg;
    SyntheticSource src;
    src.profile = {10, 500, 100.0};
    src.options = {16, 3.0, 0, 100};
    cfg.data = src;
    cfg.train.loss_kind = LossKind::gala;
    cfg.train.epochs = 100;
    cfg.train.batch_size = 64;
    cfg.train.base_lr = 0.1;
    cfg.train.momentum = 0.9;
    cfg.train.seed = 0;
    cfg.train.tau = 1.0;
    cfg.head_threshold = 100;
    cfg.tail_threshold = 20;
    cfg.output_dir = "gala_out/paper-analysis";
    return cfg;
}

void write_outputs(const std::filesystem::path& dir, const OutputSet& files) {
    for (const auto& [name, text] : files) {
        const auto path = dir / name;
        std::filesystem::create_directories(path.parent_path());
        write_text_file(path, text);
    }
}

LoadedData load_data(const ExperimentConfig& config) {
    LoadedData out;
    if (const auto* s = std::get_if<SyntheticSource>(&config.data)) {
        out.split = synthesize(s->profile, s->options);
    } else {
        const auto& c = std::get<CsvSource>(config.data);
        for (const auto& p : {c.train, c.test})
            if (!std::filesystem::exists(p)) throw ParseError("missing data file '" + p.string() + "'");
        const std::size_t K = std::max(scan_num_classes(c.train), scan_num_classes(c.test));
        out.split.train = load_csv(c.train, Role::train, K);
        out.split.test = load_csv(c.test, Role::test, K);
        if (out.split.train.dim() != out.split.test.dim())
            throw DimensionError("train and test feature widths differ");
    }
    out.groups = assign_groups(out.split.train.class_counts, config.head_threshold, config.tail_threshold);
    return out;
}

RunArtifacts run_single(const ExperimentConfig& config, const LoadedData& data) {
    RunArtifacts art;
    art.result = train(config.train, data.split.train);
    art.test_probs = kernels::predict_proba(art.result.params, data.split.test.features, config.train.backend);
    art.raw = evaluate(predict(art.test_probs), data.split.test.labels, data.groups);
    art.rebalanced = evaluate(predict(rebalance(art.test_probs, config.train.tau, config.train.backend)),
                              data.split.test.labels, data.groups);
    return art;
}

OutputSet train_outputs(const ExperimentConfig& config) {
    const LoadedData data = load_data(config);
    const RunArtifacts art = run_single(config, data);
    OutputSet files = single_run_files(config, data, art).files;
    files["manifest.json"] = dump(to_json(config));
    return files;
}

OutputSet compare_outputs(const ExperimentConfig& config) {
    const LoadedData data = load_data(config);
    OutputSet files;
    json runs;
    std::vector<RunArtifacts> arts;
    for (LossKind kind : {LossKind::cross_entropy, LossKind::gala}) {
        ExperimentConfig run_cfg = config;
        run_cfg.train.loss_kind = kind;
        arts.push_back(run_single(run_cfg, data));
        auto run = single_run_files(run_cfg, data, arts.back());
        const std::string prefix = kind == LossKind::gala ? "gala/" : "ce/";
        for (auto& [name, text] : run.files) files[prefix + name] = std::move(text);
        runs[kind == LossKind::gala ? "gala" : "cross_entropy"] = std::move(run.summary);
    }
    const auto& ce = runs["cross_entropy"];
    const auto& gala = runs["gala"];
    auto delta = [&](const char* key) -> json {
        if (ce[key].is_null() || gala[key].is_null()) return nullptr;
        return gala[key].get<double>() - ce[key].get<double>();
    };
    json comparison = {
        {"runs", runs},
        {"delta",
         {{"top1", delta("top1")},
          {"top1_rebalanced", delta("top1_rebalanced")},
          {"tail_accuracy", delta("tail_accuracy")},
          {"gradient_ratio_spread", delta("gradient_ratio_spread")},
          {"tail_similarity_mean", delta("tail_similarity_mean")}}},
        {"epoch1_trajectory_identical",
         to_json(arts[0].result.history.epochs.front()) == to_json(arts[1].result.history.epochs.front())}};
    files["comparison.json"] = dump(comparison);
    files["manifest.json"] = dump(to_json(config));
    return files;
}

OutputSet rebalance_outputs(const RebalanceRequest& request) {
    const Matrix probs = load_probs_csv(request.probs);
    check_prediction_matrix(probs, 1e-6);
    const std::size_t K = probs.cols();
    const Matrix balanced = rebalance(probs, request.tau);
    const auto pred = predict(balanced);

    OutputSet files;
    files["rebalanced_probs.csv"] = probs_to_csv(balanced);
    files["predictions.csv"] = labels_to_csv(pred, "prediction");

    if (request.truth) {
        const auto truth = load_labels_csv(*request.truth);
        if (truth.size() != probs.rows())
            throw DimensionError("truth has " + std::to_string(truth.size()) + " labels but probabilities have " +
                                 std::to_string(probs.rows()) + " rows");
        for (std::size_t b = 0; b < truth.size(); ++b)
            if (truth[b] >= K)
                throw DimensionError("truth label " + std::to_string(truth[b]) + " at row " + std::to_string(b + 1) +
                                     " exceeds the " + std::to_string(K) + " probability columns");
        GroupAssignment groups(K, Group::medium);
        if (request.class_counts) {
            const auto counts = load_counts_csv(*request.class_counts);
            if (counts.size() != K)
                throw DimensionError("class counts list " + std::to_string(counts.size()) + " classes, expected " +
                                     std::to_string(K));
            groups = assign_groups(counts, request.head_threshold, request.tail_threshold);
        }
        json j = {{"tau", request.tau},
                  {"tau_0", to_json(evaluate(predict(probs), truth, groups))},
                  {"rebalanced", to_json(evaluate(pred, truth, groups))}};
        files["eval.json"] = dump(j);
    }
    return files;
}

OutputSet synth_outputs(const SyntheticSource& source) {
    const auto split = synthesize(source.profile, source.options);
    return {{"train.csv", to_csv(split.train)},
            {"test.csv", to_csv(split.test)},
            {"class_counts.csv", labels_to_csv(split.train.class_counts, "count")}};
}

std::filesystem::path resolve_output_dir(const std::optional<std::string>& flag, const std::string& fallback) {
    if (flag && !flag->empty()) return *flag;
    if (const char* env = std::getenv("GALA_OUT"); env && *env) return env;
    return fallback;
}

}  // namespace gala
