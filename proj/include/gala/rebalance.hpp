#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "gala/kernels.hpp"
#include "gala/math.hpp"

namespace gala {

/// Checks the probability-matrix invariants: entries in [0, 1] and every row
/// summing to 1 within `tolerance`. Throws DomainError naming the row.
void check_prediction_matrix(const Matrix& probs, double tolerance = 1e-9);

/// Divides column k by (sum_b p_bk)^tau. tau = 0 returns the input unchanged.
/// Throws DegenerateInputError naming the first class with a zero column.
Matrix rebalance(const Matrix& probs, double tau, kernels::Backend backend = kernels::Backend::parallel);

/// Row-wise argmax; ties go to the lowest class index.
std::vector<std::size_t> predict(const Matrix& scores);

/// Probability CSV: optional header row, then B rows of K reals.
Matrix load_probs_csv(const std::filesystem::path& path);
std::string probs_to_csv(const Matrix& probs);

/// Label CSV: optional "label" header, then one class index per line.
std::vector<std::size_t> load_labels_csv(const std::filesystem::path& path);
std::string labels_to_csv(const std::vector<std::size_t>& labels, const char* header = "label");

}  // namespace gala
