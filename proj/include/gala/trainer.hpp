#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "gala/data.hpp"
#include "gala/grad_stats.hpp"
#include "gala/kernels.hpp"
#include "gala/losses.hpp"
#include "gala/model.hpp"

namespace gala {

struct TrainConfig {
    LossKind loss_kind = LossKind::gala;
    std::size_t epochs = 100;
    std::size_t batch_size = 64;
    double base_lr = 0.1;
    double momentum = 0.9;
    std::uint64_t seed = 0;
    double eps_floor = 1e-8;
    bool use_bias = false;
    double tau = 1.0;  // re-balance temperature, used at evaluation time
    double init_scale = 0.01;
    kernels::Backend backend = kernels::Backend::parallel;

    /// Throws ConfigError when an invariant is violated.
    void validate() const;
};

struct EpochRecord {
    std::size_t epoch = 0;  // 1-based
    double lr = 0.0;
    double mean_loss = 0.0;
    Vector weight_norms;
    Vector similarity;  // cosine(w_j, mean train feature of class j)
    GradAccumulators accumulators;  // snapshot after the end-of-epoch floor
};

struct TrainHistory {
    std::vector<EpochRecord> epochs;
};

struct TrainResult {
    ClassifierParams params;
    GradAccumulators accumulators;
    TrainHistory history;
};

/// base_lr * (1 + cos(pi * epoch / total)) / 2, epoch 0-based.
double cosine_lr(std::size_t epoch, std::size_t total_epochs, double base_lr);

struct Velocity {
    Matrix weights;
    Vector biases;
};

/// v <- momentum * v + g;  w <- w - lr * v. Biases only when params.use_bias.
void sgd_step(ClassifierParams& params, const Matrix& weight_grad, const Vector& bias_grad, Velocity& velocity,
              double lr, double momentum);

/// Mini-batch SGD over the dataset. Margins for epoch e come from the
/// accumulators as of the end of epoch e-1; epoch 1 uses zero margins, so
/// GALA and cross-entropy coincide there. Statistics are accumulated per
/// sample from the probabilities the loss actually used. Deterministic in
/// (config, data). Throws DivergenceError on a non-finite batch loss.
TrainResult train(const TrainConfig& config, const Dataset& data);

/// {epoch, lr, mean_loss, weight_norms, similarity}
nlohmann::json to_json(const EpochRecord& record);

}  // namespace gala
