#include "gala/grad_stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gala/errors.hpp"

namespace gala {

GradAccumulators::GradAccumulators(std::size_t num_classes)
    : theta(num_classes, 0.0), phi(num_classes, 0.0), nu(num_classes, 0.0), cross(num_classes, num_classes) {}

void accumulate(GradAccumulators& acc, std::span<const double> probs, std::size_t true_class) {
    const std::size_t K = acc.num_classes();
    if (probs.size() != K) throw DimensionError("accumulate: probs length != K");
    if (true_class >= K) throw DimensionError("accumulate: class index out of range");
    if (std::abs(sum(probs) - 1.0) > 1e-6) throw DomainError("accumulate: probabilities do not sum to 1");

    acc.theta[true_class] += 1.0 - probs[true_class];
    for (std::size_t j = 0; j < K; ++j) {
        if (j == true_class) continue;
        acc.cross(true_class, j) += probs[j];
        acc.nu[j] += probs[j];
        acc.phi[true_class] += probs[j];
    }
}

void floor_epsilon(GradAccumulators& acc, double eps) {
    if (!(eps > 0.0)) throw ConfigError("floor_epsilon: eps must be > 0");
    for (double& v : acc.theta) v = std::max(v, eps);
    for (double& v : acc.phi) v = std::max(v, eps);
}

Vector gradient_ratio(const GradAccumulators& acc) {
    Vector ratio(acc.num_classes());
    for (std::size_t j = 0; j < ratio.size(); ++j) {
        if (!(acc.nu[j] > 0.0))
            throw DegenerateInputError("gradient_ratio: class " + std::to_string(j) + " received no negative gradient");
        ratio[j] = acc.theta[j] / acc.nu[j];
    }
    return ratio;
}

Vector produced_negative_distribution(const GradAccumulators& acc, bool normalize) {
    Vector out = acc.phi;
    if (normalize) {
        const double total = sum(out);
        if (!(total > 0.0)) throw DegenerateInputError("produced_negative_distribution: phi sums to zero");
        for (double& v : out) v /= total;
    }
    return out;
}

nlohmann::json to_json(const GradAccumulators& acc, std::size_t epoch) {
    nlohmann::json cross = nlohmann::json::array();
    for (std::size_t k = 0; k < acc.num_classes(); ++k) {
        const auto row = acc.cross.row(k);
        cross.push_back(std::vector<double>(row.begin(), row.end()));
    }
    nlohmann::json j;
    if (epoch > 0) j["epoch"] = epoch;
    j["theta"] = acc.theta;
    j["phi"] = acc.phi;
    j["nu"] = acc.nu;
    j["cross"] = std::move(cross);
    return j;
}

}  // namespace gala
