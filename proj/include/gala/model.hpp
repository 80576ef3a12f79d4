#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include <json.hpp>

#include "gala/math.hpp"

namespace gala {

/// Linear classifier: z_j = w_j . x (+ b_j when use_bias).
struct ClassifierParams {
    Matrix weights;  // K x d, row j is the class weight of class j
    Vector biases;   // K
    bool use_bias = false;

    std::size_t num_classes() const noexcept { return weights.rows(); }
    std::size_t dim() const noexcept { return weights.cols(); }

    bool operator==(const ClassifierParams&) const = default;
};

/// Weights i.i.d. uniform in [-scale, scale], biases zero.
ClassifierParams init_params(std::size_t num_classes, std::size_t dim, double scale, std::uint64_t seed,
                             bool use_bias = false);

Vector logits(const ClassifierParams& params, std::span<const double> x);

/// Writes logits for x into `out` (length K) without allocating.
void logits_into(const ClassifierParams& params, std::span<const double> x, std::span<double> out);

Vector weight_norms(const ClassifierParams& params);

/// Checkpoint schema: {K, d, use_bias, weights (row-major), biases}.
nlohmann::json to_json(const ClassifierParams& params);
ClassifierParams params_from_json(const nlohmann::json& j);

}  // namespace gala
