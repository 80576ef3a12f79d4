#include "gala/data.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "gala/errors.hpp"
#include "gala/format.hpp"
#include "gala/random.hpp"
#include "csv_util.hpp"

namespace gala {

namespace {

using csv::parse_label;
using csv::parse_real;
using csv::trim;

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    return in;
}

}  // namespace

void LongTailProfile::validate() const {
    if (num_classes < 2) throw ConfigError("num_classes must be >= 2");
    if (!(imbalance_factor >= 1.0) || !std::isfinite(imbalance_factor))
        throw ConfigError("imbalance_factor must be a finite value >= 1");
    if (max_count < 1) throw ConfigError("max_count must be >= 1");
    if (std::lround(static_cast<double>(max_count) / imbalance_factor) < 1)
        throw ConfigError("round(max_count / imbalance_factor) is 0; some class would be empty");
}

const char* to_string(Group g) {
    switch (g) {
        case Group::head: return "head";
        case Group::medium: return "medium";
        case Group::tail: return "tail";
    }
    return "?";
}

std::vector<std::size_t> longtail_counts(const LongTailProfile& profile) {
    profile.validate();
    const auto K = profile.num_classes;
    std::vector<std::size_t> counts(K);
    for (std::size_t k = 0; k < K; ++k) {
        const double exponent = -static_cast<double>(k) / static_cast<double>(K - 1);
        counts[k] = static_cast<std::size_t>(
            std::lround(static_cast<double>(profile.max_count) * std::pow(profile.imbalance_factor, exponent)));
        if (counts[k] == 0) throw ConfigError("class " + std::to_string(k) + " rounds to zero samples");
    }
    return counts;
}

Dataset make_dataset(Matrix features, std::vector<std::size_t> labels, std::size_t num_classes, Role role) {
    if (features.rows() != labels.size())
        throw DimensionError("feature rows " + std::to_string(features.rows()) + " != label count " +
                             std::to_string(labels.size()));
    Dataset d;
    d.class_counts.assign(num_classes, 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] >= num_classes)
            throw DimensionError("label " + std::to_string(labels[i]) + " >= K=" + std::to_string(num_classes));
        ++d.class_counts[labels[i]];
    }
    if (!all_finite(features.elements())) throw DomainError("non-finite feature value");
    d.features = std::move(features);
    d.labels = std::move(labels);
    d.role = role;
    return d;
}

SplitDataset synthesize(const LongTailProfile& profile, const SynthOptions& options) {
    if (options.dim < 2) throw ConfigError("dim must be >= 2");
    if (!(options.separation > 0.0)) throw ConfigError("separation must be > 0");
    if (options.test_per_class < 1) throw ConfigError("test_per_class must be >= 1");
    const auto counts = longtail_counts(profile);
    const std::size_t K = profile.num_classes;
    const std::size_t d = options.dim;

    Matrix means(K, d);
    Rng mean_rng(options.seed, Stream::class_means);
    for (std::size_t k = 0; k < K; ++k) {
        auto row = means.row(k);
        double norm = 0.0;
        while (norm == 0.0) {
            for (double& v : row) v = mean_rng.normal();
            norm = l2_norm(row);
        }
        for (double& v : row) v *= options.separation / norm;
    }

    auto draw = [&](const std::vector<std::size_t>& per_class, Stream stream, Role role) {
        std::size_t n = 0;
        for (auto c : per_class) n += c;
        Matrix x(n, d);
        std::vector<std::size_t> y(n);
        Rng rng(options.seed, stream);
        std::size_t i = 0;
        for (std::size_t k = 0; k < K; ++k) {
            for (std::size_t s = 0; s < per_class[k]; ++s, ++i) {
                y[i] = k;
                for (std::size_t c = 0; c < d; ++c) x(i, c) = means(k, c) + rng.normal();
            }
        }
        return make_dataset(std::move(x), std::move(y), K, role);
    };

    return {draw(counts, Stream::train_samples, Role::train),
            draw(std::vector<std::size_t>(K, options.test_per_class), Stream::test_samples, Role::test)};
}

Dataset load_csv(const std::filesystem::path& path, Role role, std::size_t num_classes) {
    auto in = open_input(path);
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty file '" + path.string() + "'");
    ++line_no;
    const auto header = csv::split(trim(line));
    if (header.size() < 2 || trim(header[0]) != "label")
        throw ParseError("header must be 'label,f1,...,fd'", line_no);
    const std::size_t width = header.size();

    std::vector<double> values;
    std::vector<std::size_t> labels;
    while (std::getline(in, line)) {
        ++line_no;
        const auto row = trim(line);
        if (row.empty()) continue;
        const auto fields = csv::split(row);
        if (fields.size() != width)
            throw ParseError("expected " + std::to_string(width) + " fields, got " + std::to_string(fields.size()),
                             line_no);
        const std::size_t label = parse_label(fields[0], line_no);
        if (num_classes != 0 && label >= num_classes)
            throw ParseError("label " + std::to_string(label) + " >= K=" + std::to_string(num_classes), line_no);
        labels.push_back(label);
        for (std::size_t c = 1; c < width; ++c) values.push_back(parse_real(fields[c], line_no));
    }
    if (labels.empty()) throw ParseError("no samples in '" + path.string() + "'");
    if (num_classes == 0) {
        for (auto l : labels) num_classes = std::max(num_classes, l + 1);
    }
    const std::size_t n = labels.size();
    return make_dataset(Matrix(n, width - 1, std::move(values)), std::move(labels), num_classes, role);
}

std::size_t scan_num_classes(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::string line;
    std::size_t line_no = 0;
    std::size_t k = 0;
    while (std::getline(in, line)) {
        if (++line_no == 1) continue;
        const auto row = trim(line);
        if (row.empty()) continue;
        k = std::max(k, parse_label(csv::split(row)[0], line_no) + 1);
    }
    return k;
}

std::string to_csv(const Dataset& data) {
    std::string out = "label";
    for (std::size_t c = 0; c < data.dim(); ++c) out += ",f" + std::to_string(c + 1);
    out += '\n';
    for (std::size_t i = 0; i < data.size(); ++i) {
        out += std::to_string(data.labels[i]);
        for (double v : data.features.row(i)) {
            out += ',';
            out += format_real(v);
        }
        out += '\n';
    }
    return out;
}

void write_csv(const Dataset& data, const std::filesystem::path& path) { write_text_file(path, to_csv(data)); }

GroupAssignment assign_groups(const std::vector<std::size_t>& class_counts, std::size_t head_threshold,
                              std::size_t tail_threshold) {
    if (head_threshold <= tail_threshold) throw ConfigError("head_threshold must exceed tail_threshold");
    GroupAssignment groups(class_counts.size());
    for (std::size_t k = 0; k < class_counts.size(); ++k) {
        if (class_counts[k] > head_threshold)
            groups[k] = Group::head;
        else if (class_counts[k] < tail_threshold)
            groups[k] = Group::tail;
        else
            groups[k] = Group::medium;
    }
    return groups;
}

Matrix class_means(const Dataset& data) {
    const std::size_t K = data.num_classes();
    Matrix means(K, data.dim());
    for (std::size_t i = 0; i < data.size(); ++i) {
        auto dst = means.row(data.labels[i]);
        const auto src = data.features.row(i);
        for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += src[c];
    }
    for (std::size_t k = 0; k < K; ++k) {
        if (data.class_counts[k] == 0)
            throw DegenerateInputError("class " + std::to_string(k) + " has no samples");
        for (double& v : means.row(k)) v /= static_cast<double>(data.class_counts[k]);
    }
    return means;
}

}  // namespace gala
