#include "gala/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gala/errors.hpp"

namespace gala {

namespace {

void check_class(std::size_t k, std::size_t K) {
    if (k >= K) throw DimensionError("true class " + std::to_string(k) + " out of range for K=" + std::to_string(K));
}

// Logits actually fed to the softmax for this loss kind.
Vector effective_logits(LossKind kind, std::span<const double> logits, std::size_t k, std::span<const double> theta,
                        std::span<const double> phi) {
    if (logits.empty()) throw DimensionError("empty logits");
    check_class(k, logits.size());
    if (kind == LossKind::cross_entropy) return Vector(logits.begin(), logits.end());
    return gala_adjust(logits, k, theta, phi);
}

}  // namespace

const char* to_string(LossKind kind) { return kind == LossKind::gala ? "gala" : "cross_entropy"; }

LossKind parse_loss_kind(std::string_view name) {
    if (name == "gala") return LossKind::gala;
    if (name == "ce" || name == "cross_entropy") return LossKind::cross_entropy;
    throw ConfigError("unknown loss '" + std::string(name) + "' (expected cross_entropy or gala)");
}

LogMargins LogMargins::from(std::span<const double> theta, std::span<const double> phi) {
    if (theta.size() != phi.size()) throw DimensionError("theta and phi lengths differ");
    LogMargins m;
    m.log_theta.resize(theta.size());
    m.log_phi.resize(phi.size());
    for (std::size_t j = 0; j < theta.size(); ++j) {
        if (!(theta[j] > 0.0)) throw DomainError("theta[" + std::to_string(j) + "] must be > 0");
        if (!(phi[j] > 0.0)) throw DomainError("phi[" + std::to_string(j) + "] must be > 0");
        m.log_theta[j] = std::log(theta[j]);
        m.log_phi[j] = std::log(phi[j]);
    }
    return m;
}

LogMargins LogMargins::neutral(std::size_t num_classes) {
    return {Vector(num_classes, 0.0), Vector(num_classes, 0.0)};
}

void gala_adjust_in_place(std::span<double> logits, std::size_t true_class, const LogMargins& margins) {
    const double log_phi_k = margins.log_phi[true_class];
    for (std::size_t j = 0; j < logits.size(); ++j) {
        if (j != true_class) logits[j] = logits[j] + margins.log_theta[j] - log_phi_k;
    }
}

Vector gala_adjust(std::span<const double> logits, std::size_t true_class, std::span<const double> theta,
                   std::span<const double> phi) {
    const std::size_t K = logits.size();
    check_class(true_class, K);
    if (theta.size() != K || phi.size() != K) throw DimensionError("theta/phi length must equal K");
    if (!(phi[true_class] > 0.0)) throw DomainError("phi[k] must be > 0");
    Vector out(logits.begin(), logits.end());
    const double log_phi_k = std::log(phi[true_class]);
    for (std::size_t j = 0; j < K; ++j) {
        if (j == true_class) continue;
        if (!(theta[j] > 0.0)) throw DomainError("theta[" + std::to_string(j) + "] must be > 0");
        out[j] = out[j] + std::log(theta[j]) - log_phi_k;
    }
    return out;
}

double loss(LossKind kind, std::span<const double> logits, std::size_t true_class, std::span<const double> theta,
            std::span<const double> phi) {
    const Vector z = effective_logits(kind, logits, true_class, theta, phi);
    // lse >= z_k mathematically; clamp the rounding residue.
    return std::max(0.0, log_sum_exp(z) - z[true_class]);
}

Vector grad_logits(LossKind kind, std::span<const double> logits, std::size_t true_class,
                   std::span<const double> theta, std::span<const double> phi) {
    Vector g = softmax(effective_logits(kind, logits, true_class, theta, phi));
    g[true_class] -= 1.0;
    return g;
}

ParamGrad grad_params(LossKind kind, const ClassifierParams& params, std::span<const double> x,
                      std::size_t true_class, std::span<const double> theta, std::span<const double> phi) {
    const Vector z = logits(params, x);
    const Vector g = grad_logits(kind, z, true_class, theta, phi);
    ParamGrad out{Matrix(params.num_classes(), params.dim()), Vector(params.num_classes(), 0.0)};
    for (std::size_t j = 0; j < g.size(); ++j) {
        auto row = out.weights.row(j);
        for (std::size_t c = 0; c < x.size(); ++c) row[c] = g[j] * x[c];
        if (params.use_bias) out.biases[j] = g[j];
    }
    return out;
}

}  // namespace gala
