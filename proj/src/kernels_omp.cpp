#include <cstdint>

#include "gala/errors.hpp"
#include "gala/kernels.hpp"

// Without OpenMP the pragmas are ignored and these loops run serially.
namespace gala::kernels::omp {

void forward_batch(const ClassifierParams& params, LossKind kind, const LogMargins& margins, const BatchInput& batch,
                   BatchForward& out) {
    detail::prepare(params, batch, out);
    const auto B = static_cast<std::int64_t>(batch.indices.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < B; ++i) {
        const std::size_t idx = batch.indices[i];
        out.losses[i] = forward_sample(params, kind, margins, batch.features.row(idx), batch.labels[idx], out.probs.row(i));
    }
}

void batch_gradient(const BatchInput& batch, const BatchForward& fwd, bool use_bias, Matrix& weight_grad,
                    Vector& bias_grad) {
    if (batch.indices.empty()) throw DimensionError("batch_gradient: empty batch");
    const std::size_t K = fwd.probs.cols();
    if (weight_grad.rows() != K || weight_grad.cols() != batch.features.cols())
        weight_grad = Matrix(K, batch.features.cols());
    bias_grad.assign(K, 0.0);
    const auto rows = static_cast<std::int64_t>(K);
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < rows; ++j) {
        double b = 0.0;
        detail::gradient_row(batch, fwd, static_cast<std::size_t>(j), weight_grad.row(j), b);
        bias_grad[j] = use_bias ? b : 0.0;
    }
}

Matrix predict_proba(const ClassifierParams& params, const Matrix& features) {
    if (features.cols() != params.dim()) throw DimensionError("predict_proba: feature width != d");
    Matrix out(features.rows(), params.num_classes());
    const auto N = static_cast<std::int64_t>(features.rows());
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < N; ++r) detail::proba_row(params, features.row(r), out.row(r));
    return out;
}

Vector column_l1_norms(const Matrix& m) {
    Vector out(m.cols());
    const auto C = static_cast<std::int64_t>(m.cols());
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < C; ++c) out[c] = detail::column_l1(m, c);
    return out;
}

}  // namespace gala::kernels::omp
