#include "gala/math.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gala/errors.hpp"

namespace gala {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> elements)
    : rows_(rows), cols_(cols), data_(std::move(elements)) {
    if (data_.size() != rows * cols) {
        throw DimensionError("matrix element count " + std::to_string(data_.size()) + " != " +
                             std::to_string(rows) + "x" + std::to_string(cols));
    }
}

std::vector<double> Matrix::column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

Vector Matrix::row_sums() const {
    Vector out(rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = sum(row(r));
    return out;
}

Vector Matrix::col_sums() const {
    Vector out(cols_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out[c] += (*this)(r, c);
    return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw DimensionError("dot: length mismatch " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double l2_norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

Vector softmax(std::span<const double> logits) {
    if (logits.empty()) throw DimensionError("softmax: empty input");
    const double m = *std::max_element(logits.begin(), logits.end());
    Vector p(logits.size());
    double denom = 0.0;
    for (std::size_t j = 0; j < logits.size(); ++j) {
        p[j] = std::exp(logits[j] - m);
        denom += p[j];
    }
    for (double& v : p) v /= denom;
    return p;
}

double log_sum_exp(std::span<const double> logits) {
    if (logits.empty()) throw DimensionError("log_sum_exp: empty input");
    const double m = *std::max_element(logits.begin(), logits.end());
    double acc = 0.0;
    for (double z : logits) acc += std::exp(z - m);
    return m + std::log(acc);
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    const double na = l2_norm(a);
    const double nb = l2_norm(b);
    if (na == 0.0 || nb == 0.0) throw DegenerateInputError("cosine_similarity: zero-norm input");
    return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

double sum(std::span<const double> a) {
    double acc = 0.0;
    for (double v : a) acc += v;
    return acc;
}

bool all_finite(std::span<const double> a) {
    return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace gala
