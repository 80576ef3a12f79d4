#include "gala/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>

#include "gala/errors.hpp"
#include "gala/evaluation.hpp"
#include "gala/random.hpp"

namespace gala {

void TrainConfig::validate() const {
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (!(base_lr > 0.0) || !std::isfinite(base_lr)) throw ConfigError("base_lr must be > 0");
    if (!(momentum >= 0.0 && momentum < 1.0)) throw ConfigError("momentum must be in [0, 1)");
    if (!(eps_floor > 0.0)) throw ConfigError("eps_floor must be > 0");
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw ConfigError("tau must be >= 0");
    if (!(init_scale > 0.0)) throw ConfigError("init_scale must be > 0");
}

double cosine_lr(std::size_t epoch, std::size_t total_epochs, double base_lr) {
    const double t = static_cast<double>(epoch) / static_cast<double>(total_epochs);
    return base_lr * 0.5 * (1.0 + std::cos(std::numbers::pi * t));
}

void sgd_step(ClassifierParams& params, const Matrix& weight_grad, const Vector& bias_grad, Velocity& velocity,
              double lr, double momentum) {
    auto& w = params.weights.elements();
    const auto& g = weight_grad.elements();
    auto& v = velocity.weights.elements();
    if (g.size() != w.size() || v.size() != w.size()) throw DimensionError("sgd_step: weight shape mismatch");
    for (std::size_t i = 0; i < w.size(); ++i) {
        v[i] = momentum * v[i] + g[i];
        w[i] -= lr * v[i];
    }
    if (!params.use_bias) return;
    if (bias_grad.size() != params.biases.size() || velocity.biases.size() != params.biases.size())
        throw DimensionError("sgd_step: bias shape mismatch");
    for (std::size_t j = 0; j < params.biases.size(); ++j) {
        velocity.biases[j] = momentum * velocity.biases[j] + bias_grad[j];
        params.biases[j] -= lr * velocity.biases[j];
    }
}

namespace {

// Similarity per class; NaN for a class without training samples.
Vector tracked_similarity(const ClassifierParams& params, const Matrix& means, const Dataset& data) {
    Vector out(params.num_classes(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t j = 0; j < out.size(); ++j) {
        if (data.class_counts[j] == 0) continue;
        const auto w = params.weights.row(j);
        const auto m = means.row(j);
        if (l2_norm(w) > 0.0 && l2_norm(m) > 0.0) out[j] = cosine_similarity(w, m);
    }
    return out;
}

Matrix tolerant_class_means(const Dataset& data) {
    Matrix means(data.num_classes(), data.dim());
    for (std::size_t i = 0; i < data.size(); ++i) {
        auto dst = means.row(data.labels[i]);
        const auto src = data.features.row(i);
        for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += src[c];
    }
    for (std::size_t k = 0; k < data.num_classes(); ++k) {
        if (data.class_counts[k] == 0) continue;
        for (double& v : means.row(k)) v /= static_cast<double>(data.class_counts[k]);
    }
    return means;
}

}  // namespace

TrainResult train(const TrainConfig& config, const Dataset& data) {
    config.validate();
    if (data.size() == 0) throw ConfigError("train: empty dataset");
    const std::size_t K = data.num_classes();
    const std::size_t N = data.size();
    if (K < 2) throw ConfigError("train: need at least two classes");

    TrainResult result;
    result.params = init_params(K, data.dim(), config.init_scale, config.seed, config.use_bias);
    result.accumulators = GradAccumulators(K);
    Velocity velocity{Matrix(K, data.dim()), Vector(K, 0.0)};
    const Matrix means = tolerant_class_means(data);

    std::vector<std::size_t> order(N);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle_rng(config.seed, Stream::shuffle);

    kernels::BatchForward fwd;
    Matrix weight_grad(K, data.dim());
    Vector bias_grad(K, 0.0);

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        const double lr = cosine_lr(epoch, config.epochs, config.base_lr);
        const LogMargins margins = epoch == 0 ? LogMargins::neutral(K)
                                              : LogMargins::from(result.accumulators.theta, result.accumulators.phi);
        shuffle_rng.shuffle(std::span<std::size_t>(order));

        double loss_total = 0.0;
        std::size_t batch_no = 0;
        for (std::size_t start = 0; start < N; start += config.batch_size, ++batch_no) {
            const std::size_t end = std::min(N, start + config.batch_size);
            const kernels::BatchInput batch{data.features, data.labels,
                                            std::span<const std::size_t>(order).subspan(start, end - start)};
            kernels::forward_batch(result.params, config.loss_kind, margins, batch, fwd, config.backend);

            double batch_loss = 0.0;
            for (double l : fwd.losses) batch_loss += l;
            if (!std::isfinite(batch_loss)) throw DivergenceError(epoch + 1, batch_no + 1, batch_loss);
            loss_total += batch_loss;

            kernels::batch_gradient(batch, fwd, config.use_bias, weight_grad, bias_grad, config.backend);
            sgd_step(result.params, weight_grad, bias_grad, velocity, lr, config.momentum);

            for (std::size_t i = 0; i < batch.indices.size(); ++i)
                accumulate(result.accumulators, fwd.probs.row(i), data.labels[batch.indices[i]]);
        }
        if (!all_finite(result.params.weights.elements())) throw DivergenceError(epoch + 1, batch_no, loss_total);

        floor_epsilon(result.accumulators, config.eps_floor);

        EpochRecord rec;
        rec.epoch = epoch + 1;
        rec.lr = lr;
        rec.mean_loss = loss_total / static_cast<double>(N);
        rec.weight_norms = weight_norms(result.params);
        rec.similarity = tracked_similarity(result.params, means, data);
        rec.accumulators = result.accumulators;
        result.history.epochs.push_back(std::move(rec));
    }
    return result;
}

nlohmann::json to_json(const EpochRecord& record) {
    nlohmann::json sim = nlohmann::json::array();
    for (double s : record.similarity) sim.push_back(std::isfinite(s) ? nlohmann::json(s) : nlohmann::json(nullptr));
    return {{"epoch", record.epoch},
            {"lr", record.lr},
            {"mean_loss", record.mean_loss},
            {"weight_norms", record.weight_norms},
            {"similarity", std::move(sim)}};
}

}  // namespace gala
