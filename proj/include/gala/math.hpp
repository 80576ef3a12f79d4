#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gala {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> elements);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    std::vector<double>& elements() noexcept { return data_; }
    const std::vector<double>& elements() const noexcept { return data_; }

    std::vector<double> column(std::size_t c) const;
    Vector row_sums() const;
    Vector col_sums() const;

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double l2_norm(std::span<const double> a);

/// Max-shifted softmax.
Vector softmax(std::span<const double> logits);

/// log(sum_j exp(z_j)), max-shifted.
double log_sum_exp(std::span<const double> logits);

/// Throws DegenerateInputError if either vector has zero norm.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

double sum(std::span<const double> a);
bool all_finite(std::span<const double> a);

}  // namespace gala
