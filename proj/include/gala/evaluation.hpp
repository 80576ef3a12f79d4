#pragma once

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "gala/data.hpp"
#include "gala/math.hpp"
#include "gala/model.hpp"

namespace gala {

struct GroupAccuracy {
    double head = 0.0;
    double medium = 0.0;
    double tail = 0.0;

    double operator[](Group g) const noexcept { return g == Group::head ? head : g == Group::medium ? medium : tail; }
};

struct EvalReport {
    double top1 = 0.0;
    std::size_t correct = 0;
    std::size_t total = 0;
    Vector per_class_accuracy;  // NaN for classes absent from the truth labels
    GroupAccuracy group_accuracy;  // unweighted mean over classes; NaN for an empty group
    std::vector<std::size_t> positive_prediction_counts;
    Matrix confusion;  // confusion(truth, pred) = count
};

/// K is taken from groups.size().
EvalReport evaluate(const std::vector<std::size_t>& pred, const std::vector<std::size_t>& truth,
                    const GroupAssignment& groups);

/// Cosine similarity of each class weight with the given per-class mean feature.
Vector similarity_to_means(const ClassifierParams& params, const Matrix& means);

/// Cosine similarity of w_j with the mean feature of class j in data.
Vector similarity_report(const ClassifierParams& params, const Dataset& data);

struct CrossSimilarity {
    double to_head = 0.0;
    double to_tail = 0.0;
};

/// Mean cosine similarity of each class weight to the samples of head-group
/// and tail-group classes, excluding its own class. Requires both groups to
/// be non-empty; an entry whose group holds only its own class is NaN.
std::vector<CrossSimilarity> cross_similarity_report(const ClassifierParams& params, const Dataset& data,
                                                     const GroupAssignment& groups);

nlohmann::json to_json(const EvalReport& report);

}  // namespace gala
