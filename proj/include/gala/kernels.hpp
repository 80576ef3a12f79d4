#pragma once

#include <cstddef>
#include <span>

#include "gala/losses.hpp"
#include "gala/math.hpp"
#include "gala/model.hpp"

// Data-parallel inner loops of training and inference. Each kernel has a
// serial reference and an OpenMP variant. Both variants run the same
// per-item body and reduce in the same order, so they agree bit for bit.
namespace gala::kernels {

enum class Backend { serial, parallel };

/// True when the library was built with OpenMP.
bool parallel_available() noexcept;

/// Forward pass over a mini-batch. Row i of probs is the softmax of the
/// effective logits of sample indices[i]; losses[i] is its loss.
struct BatchForward {
    Matrix probs;   // B x K
    Vector losses;  // B
};

struct BatchInput {
    const Matrix& features;
    std::span<const std::size_t> labels;
    std::span<const std::size_t> indices;  // rows of features in this batch
};

/// One sample: writes the effective-logit softmax into probs, returns the loss.
double forward_sample(const ClassifierParams& params, LossKind kind, const LogMargins& margins,
                      std::span<const double> x, std::size_t label, std::span<double> probs);

/// Batch-mean weight/bias gradient from forward probabilities:
/// G_j = (1/B) sum_i (q_ij - [y_i = j]) x_i, summed over i in batch order.
void batch_gradient(const BatchInput& batch, const BatchForward& fwd, bool use_bias, Matrix& weight_grad,
                    Vector& bias_grad, Backend backend = Backend::parallel);

void forward_batch(const ClassifierParams& params, LossKind kind, const LogMargins& margins, const BatchInput& batch,
                   BatchForward& out, Backend backend = Backend::parallel);

/// Softmax of raw logits for every row of features (N x K).
Matrix predict_proba(const ClassifierParams& params, const Matrix& features, Backend backend = Backend::parallel);

/// L1 norm of each column, summed in row order.
Vector column_l1_norms(const Matrix& m, Backend backend = Backend::parallel);

namespace serial {
void forward_batch(const ClassifierParams&, LossKind, const LogMargins&, const BatchInput&, BatchForward&);
void batch_gradient(const BatchInput&, const BatchForward&, bool, Matrix&, Vector&);
Matrix predict_proba(const ClassifierParams&, const Matrix&);
Vector column_l1_norms(const Matrix&);
}  // namespace serial

namespace omp {
void forward_batch(const ClassifierParams&, LossKind, const LogMargins&, const BatchInput&, BatchForward&);
void batch_gradient(const BatchInput&, const BatchForward&, bool, Matrix&, Vector&);
Matrix predict_proba(const ClassifierParams&, const Matrix&);
Vector column_l1_norms(const Matrix&);
}  // namespace omp

namespace detail {
void prepare(const ClassifierParams& params, const BatchInput& batch, BatchForward& out);
void gradient_row(const BatchInput& batch, const BatchForward& fwd, std::size_t j, std::span<double> row,
                  double& bias);
void proba_row(const ClassifierParams& params, std::span<const double> x, std::span<double> out);
double column_l1(const Matrix& m, std::size_t c);
}  // namespace detail

}  // namespace gala::kernels
