#include "gala/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gala/errors.hpp"

namespace gala::kernels {

bool parallel_available() noexcept {
#ifdef GALA_HAVE_OPENMP
    return true;
#else
    return false;
#endif
}

double forward_sample(const ClassifierParams& params, LossKind kind, const LogMargins& margins,
                      std::span<const double> x, std::size_t label, std::span<double> probs) {
    logits_into(params, x, probs);
    if (kind == LossKind::gala) gala_adjust_in_place(probs, label, margins);
    const double m = *std::max_element(probs.begin(), probs.end());
    const double z_k = probs[label];
    double denom = 0.0;
    for (double& v : probs) {
        v = std::exp(v - m);
        denom += v;
    }
    for (double& v : probs) v /= denom;
    return std::max(0.0, m + std::log(denom) - z_k);
}

namespace detail {

void prepare(const ClassifierParams& params, const BatchInput& batch, BatchForward& out) {
    const std::size_t B = batch.indices.size();
    const std::size_t K = params.num_classes();
    if (batch.features.cols() != params.dim()) throw DimensionError("batch: feature width != d");
    for (std::size_t idx : batch.indices) {
        if (idx >= batch.features.rows()) throw DimensionError("batch: sample index out of range");
        if (batch.labels[idx] >= K) throw DimensionError("batch: label out of range");
    }
    if (out.probs.rows() != B || out.probs.cols() != K) out.probs = Matrix(B, K);
    out.losses.assign(B, 0.0);
}

void gradient_row(const BatchInput& batch, const BatchForward& fwd, std::size_t j, std::span<double> row,
                  double& bias) {
    std::fill(row.begin(), row.end(), 0.0);
    bias = 0.0;
    const std::size_t B = batch.indices.size();
    for (std::size_t i = 0; i < B; ++i) {
        const std::size_t idx = batch.indices[i];
        const double g = fwd.probs(i, j) - (batch.labels[idx] == j ? 1.0 : 0.0);
        const auto x = batch.features.row(idx);
        for (std::size_t c = 0; c < row.size(); ++c) row[c] += g * x[c];
        bias += g;
    }
    const double inv = 1.0 / static_cast<double>(B);
    for (double& v : row) v *= inv;
    bias *= inv;
}

void proba_row(const ClassifierParams& params, std::span<const double> x, std::span<double> out) {
    logits_into(params, x, out);
    const double m = *std::max_element(out.begin(), out.end());
    double denom = 0.0;
    for (double& v : out) {
        v = std::exp(v - m);
        denom += v;
    }
    for (double& v : out) v /= denom;
}

double column_l1(const Matrix& m, std::size_t c) {
    double acc = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) acc += std::abs(m(r, c));
    return acc;
}

}  // namespace detail

namespace {

void check_grad_shapes(const BatchInput& batch, const BatchForward& fwd, Matrix& weight_grad, Vector& bias_grad) {
    if (batch.indices.empty()) throw DimensionError("batch_gradient: empty batch");
    const std::size_t K = fwd.probs.cols();
    if (weight_grad.rows() != K || weight_grad.cols() != batch.features.cols())
        weight_grad = Matrix(K, batch.features.cols());
    bias_grad.assign(K, 0.0);
}

}  // namespace

namespace serial {

void forward_batch(const ClassifierParams& params, LossKind kind, const LogMargins& margins, const BatchInput& batch,
                   BatchForward& out) {
    detail::prepare(params, batch, out);
    for (std::size_t i = 0; i < batch.indices.size(); ++i) {
        const std::size_t idx = batch.indices[i];
        out.losses[i] = forward_sample(params, kind, margins, batch.features.row(idx), batch.labels[idx], out.probs.row(i));
    }
}

void batch_gradient(const BatchInput& batch, const BatchForward& fwd, bool use_bias, Matrix& weight_grad,
                    Vector& bias_grad) {
    check_grad_shapes(batch, fwd, weight_grad, bias_grad);
    for (std::size_t j = 0; j < weight_grad.rows(); ++j) {
        double b = 0.0;
        detail::gradient_row(batch, fwd, j, weight_grad.row(j), b);
        bias_grad[j] = use_bias ? b : 0.0;
    }
}

Matrix predict_proba(const ClassifierParams& params, const Matrix& features) {
    if (features.cols() != params.dim()) throw DimensionError("predict_proba: feature width != d");
    Matrix out(features.rows(), params.num_classes());
    for (std::size_t r = 0; r < features.rows(); ++r) detail::proba_row(params, features.row(r), out.row(r));
    return out;
}

Vector column_l1_norms(const Matrix& m) {
    Vector out(m.cols());
    for (std::size_t c = 0; c < m.cols(); ++c) out[c] = detail::column_l1(m, c);
    return out;
}

}  // namespace serial

void forward_batch(const ClassifierParams& params, LossKind kind, const LogMargins& margins, const BatchInput& batch,
                   BatchForward& out, Backend backend) {
    if (backend == Backend::parallel) return omp::forward_batch(params, kind, margins, batch, out);
    serial::forward_batch(params, kind, margins, batch, out);
}

void batch_gradient(const BatchInput& batch, const BatchForward& fwd, bool use_bias, Matrix& weight_grad,
                    Vector& bias_grad, Backend backend) {
    if (backend == Backend::parallel) return omp::batch_gradient(batch, fwd, use_bias, weight_grad, bias_grad);
    serial::batch_gradient(batch, fwd, use_bias, weight_grad, bias_grad);
}

Matrix predict_proba(const ClassifierParams& params, const Matrix& features, Backend backend) {
    return backend == Backend::parallel ? omp::predict_proba(params, features)
                                        : serial::predict_proba(params, features);
}

Vector column_l1_norms(const Matrix& m, Backend backend) {
    return backend == Backend::parallel ? omp::column_l1_norms(m) : serial::column_l1_norms(m);
}

}  // namespace gala::kernels
