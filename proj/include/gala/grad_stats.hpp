#pragma once

#include <cstddef>
#include <span>

#include <json.hpp>

#include "gala/math.hpp"

namespace gala {

/// Per-class gradient statistics accumulated over training.
///
/// theta[j]    positive gradient magnitude received by class weight j
/// phi[k]      negative gradient magnitude produced by samples of class k
/// nu[j]       negative gradient magnitude received by class weight j
/// cross[k][j] negative gradient from class-k samples onto class weight j
///
/// phi and nu are the row and column sums of cross.
struct GradAccumulators {
    Vector theta;
    Vector phi;
    Vector nu;
    Matrix cross;

    GradAccumulators() = default;
    explicit GradAccumulators(std::size_t num_classes);

    std::size_t num_classes() const noexcept { return theta.size(); }

    bool operator==(const GradAccumulators&) const = default;
};

/// Adds one sample's logit-gradient magnitudes: 1 - p_k to theta_k and p_j
/// (j != k) to cross[k][j], nu_j and phi_k. Throws DomainError if probs does
/// not sum to 1 within 1e-6.
void accumulate(GradAccumulators& acc, std::span<const double> probs, std::size_t true_class);

/// theta_j <- max(theta_j, eps), phi_k <- max(phi_k, eps).
void floor_epsilon(GradAccumulators& acc, double eps);

/// theta_j / nu_j. Throws DegenerateInputError when some nu_j is zero.
Vector gradient_ratio(const GradAccumulators& acc);

/// phi, optionally normalized to sum to one.
Vector produced_negative_distribution(const GradAccumulators& acc, bool normalize = false);

/// {theta, phi, nu, cross} plus "epoch" when epoch > 0.
nlohmann::json to_json(const GradAccumulators& acc, std::size_t epoch = 0);

}  // namespace gala
