#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "gala/math.hpp"
#include "gala/model.hpp"

namespace gala {

enum class LossKind { cross_entropy, gala };

const char* to_string(LossKind kind);
/// Accepts "ce", "cross_entropy" and "gala"; throws ConfigError otherwise.
LossKind parse_loss_kind(std::string_view name);

/// Log-domain margins: log(theta_j) and log(phi_k), frozen for a training epoch.
struct LogMargins {
    Vector log_theta;
    Vector log_phi;

    /// Throws DomainError if any theta or phi entry is not > 0.
    static LogMargins from(std::span<const double> theta, std::span<const double> phi);
    /// All-ones accumulators: zero margins.
    static LogMargins neutral(std::size_t num_classes);
};

/// Adds log(theta_j) - log(phi_k) to every j != k, leaves z_k unchanged.
void gala_adjust_in_place(std::span<double> logits, std::size_t true_class, const LogMargins& margins);

Vector gala_adjust(std::span<const double> logits, std::size_t true_class, std::span<const double> theta,
                   std::span<const double> phi);

/// theta/phi are ignored for cross-entropy and may be empty.
double loss(LossKind kind, std::span<const double> logits, std::size_t true_class, std::span<const double> theta,
            std::span<const double> phi);

/// dL/dz_j = q_j - [j == k], q the softmax of the (adjusted) logits. The
/// margins are constants: nothing flows into theta or phi.
Vector grad_logits(LossKind kind, std::span<const double> logits, std::size_t true_class,
                   std::span<const double> theta, std::span<const double> phi);

struct ParamGrad {
    Matrix weights;  // K x d
    Vector biases;   // K
};

ParamGrad grad_params(LossKind kind, const ClassifierParams& params, std::span<const double> x,
                      std::size_t true_class, std::span<const double> theta, std::span<const double> phi);

}  // namespace gala
