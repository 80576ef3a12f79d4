#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gala/math.hpp"

namespace gala {

struct LongTailProfile {
    std::size_t num_classes = 10;
    std::size_t max_count = 500;
    double imbalance_factor = 100.0;

    /// Throws ConfigError on K < 2, IF < 1 or a zero minimum count.
    void validate() const;
};

enum class Role { train, test };

struct Dataset {
    Matrix features;  // N x d
    std::vector<std::size_t> labels;
    std::vector<std::size_t> class_counts;  // length K
    Role role = Role::train;

    std::size_t size() const noexcept { return labels.size(); }
    std::size_t dim() const noexcept { return features.cols(); }
    std::size_t num_classes() const noexcept { return class_counts.size(); }
};

enum class Group { head, medium, tail };

using GroupAssignment = std::vector<Group>;

const char* to_string(Group g);

/// counts[k] = round(n_max * IF^(-k/(K-1))).
std::vector<std::size_t> longtail_counts(const LongTailProfile& profile);

struct SynthOptions {
    std::size_t dim = 16;
    double separation = 3.0;
    std::uint64_t seed = 0;
    std::size_t test_per_class = 100;
};

struct SplitDataset {
    Dataset train;
    Dataset test;
};

/// K isotropic unit-variance Gaussian clusters whose means lie on a sphere of
/// radius `separation`. Train counts follow the long-tail profile; the test
/// split is balanced.
SplitDataset synthesize(const LongTailProfile& profile, const SynthOptions& options);

/// Builds a dataset from rows, checking labels against num_classes.
Dataset make_dataset(Matrix features, std::vector<std::size_t> labels, std::size_t num_classes, Role role);

/// Reads `label,f1,...,fd` rows after a header line. When num_classes is 0
/// it is inferred as max(label) + 1.
Dataset load_csv(const std::filesystem::path& path, Role role = Role::train, std::size_t num_classes = 0);

/// Largest label + 1 found in a feature CSV (header skipped).
std::size_t scan_num_classes(const std::filesystem::path& path);

std::string to_csv(const Dataset& data);
void write_csv(const Dataset& data, const std::filesystem::path& path);

GroupAssignment assign_groups(const std::vector<std::size_t>& class_counts, std::size_t head_threshold,
                              std::size_t tail_threshold);

/// Per-class mean feature, K x d. Throws DegenerateInputError for an empty class.
Matrix class_means(const Dataset& data);

}  // namespace gala
