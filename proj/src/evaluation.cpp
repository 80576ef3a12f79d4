#include "gala/evaluation.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gala/errors.hpp"

namespace gala {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

EvalReport evaluate(const std::vector<std::size_t>& pred, const std::vector<std::size_t>& truth,
                    const GroupAssignment& groups) {
    if (pred.size() != truth.size())
        throw DimensionError("evaluate: " + std::to_string(pred.size()) + " predictions vs " +
                             std::to_string(truth.size()) + " labels");
    const std::size_t K = groups.size();
    EvalReport r;
    r.total = truth.size();
    r.confusion = Matrix(K, K);
    r.positive_prediction_counts.assign(K, 0);
    std::vector<std::size_t> per_class_total(K, 0), per_class_correct(K, 0);
    for (std::size_t b = 0; b < truth.size(); ++b) {
        if (truth[b] >= K || pred[b] >= K)
            throw DimensionError("evaluate: label out of range at sample " + std::to_string(b));
        r.confusion(truth[b], pred[b]) += 1.0;
        ++r.positive_prediction_counts[pred[b]];
        ++per_class_total[truth[b]];
        if (pred[b] == truth[b]) {
            ++per_class_correct[truth[b]];
            ++r.correct;
        }
    }
    r.top1 = r.total == 0 ? kNaN : static_cast<double>(r.correct) / static_cast<double>(r.total);

    r.per_class_accuracy.assign(K, kNaN);
    double group_sum[3] = {0, 0, 0};
    std::size_t group_n[3] = {0, 0, 0};
    for (std::size_t k = 0; k < K; ++k) {
        if (per_class_total[k] == 0) continue;
        r.per_class_accuracy[k] = static_cast<double>(per_class_correct[k]) / static_cast<double>(per_class_total[k]);
        const auto g = static_cast<std::size_t>(groups[k]);
        group_sum[g] += r.per_class_accuracy[k];
        ++group_n[g];
    }
    auto mean = [&](Group g) {
        const auto i = static_cast<std::size_t>(g);
        return group_n[i] == 0 ? kNaN : group_sum[i] / static_cast<double>(group_n[i]);
    };
    r.group_accuracy = {mean(Group::head), mean(Group::medium), mean(Group::tail)};
    return r;
}

Vector similarity_to_means(const ClassifierParams& params, const Matrix& means) {
    if (means.rows() != params.num_classes() || means.cols() != params.dim())
        throw DimensionError("similarity: class-mean matrix shape mismatch");
    Vector out(params.num_classes());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = cosine_similarity(params.weights.row(j), means.row(j));
    return out;
}

Vector similarity_report(const ClassifierParams& params, const Dataset& data) {
    return similarity_to_means(params, class_means(data));
}

std::vector<CrossSimilarity> cross_similarity_report(const ClassifierParams& params, const Dataset& data,
                                                     const GroupAssignment& groups) {
    const std::size_t K = params.num_classes();
    if (groups.size() != K || data.num_classes() != K) throw DimensionError("cross_similarity: K mismatch");
    if (data.dim() != params.dim()) throw DimensionError("cross_similarity: feature width != d");
    bool any_head = false, any_tail = false;
    for (std::size_t k = 0; k < K; ++k) {
        if (data.class_counts[k] == 0) throw DegenerateInputError("class " + std::to_string(k) + " has no samples");
        any_head |= groups[k] == Group::head;
        any_tail |= groups[k] == Group::tail;
    }
    if (!any_head || !any_tail) throw DegenerateInputError("cross_similarity: needs both head and tail classes");

    std::vector<CrossSimilarity> out(K);
    for (std::size_t j = 0; j < K; ++j) {
        const auto w = params.weights.row(j);
        double head_sum = 0.0, tail_sum = 0.0;
        std::size_t head_n = 0, tail_n = 0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            const std::size_t y = data.labels[i];
            if (y == j || groups[y] == Group::medium) continue;
            const double c = cosine_similarity(w, data.features.row(i));
            if (groups[y] == Group::head) {
                head_sum += c;
                ++head_n;
            } else {
                tail_sum += c;
                ++tail_n;
            }
        }
        out[j].to_head = head_n == 0 ? kNaN : head_sum / static_cast<double>(head_n);
        out[j].to_tail = tail_n == 0 ? kNaN : tail_sum / static_cast<double>(tail_n);
    }
    return out;
}

nlohmann::json to_json(const EvalReport& report) {
    nlohmann::json per_class = nlohmann::json::array();
    for (double a : report.per_class_accuracy) per_class.push_back(number_or_null(a));
    nlohmann::json confusion = nlohmann::json::array();
    for (std::size_t k = 0; k < report.confusion.rows(); ++k) {
        std::vector<std::size_t> row;
        for (double v : report.confusion.row(k)) row.push_back(static_cast<std::size_t>(v));
        confusion.push_back(std::move(row));
    }
    return {{"top1", number_or_null(report.top1)},
            {"correct", report.correct},
            {"total", report.total},
            {"per_class_accuracy", std::move(per_class)},
            {"group_accuracy",
             {{"head", number_or_null(report.group_accuracy.head)},
              {"medium", number_or_null(report.group_accuracy.medium)},
              {"tail", number_or_null(report.group_accuracy.tail)}}},
            {"positive_prediction_counts", report.positive_prediction_counts},
            {"confusion", std::move(confusion)}};
}

}  // namespace gala
