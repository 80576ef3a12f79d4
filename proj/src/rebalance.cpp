#include "gala/rebalance.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <string>

#include "csv_util.hpp"
#include "gala/errors.hpp"
#include "gala/format.hpp"

namespace gala {

void check_prediction_matrix(const Matrix& probs, double tolerance) {
    if (probs.cols() == 0) throw DimensionError("prediction matrix has no columns");
    for (std::size_t b = 0; b < probs.rows(); ++b) {
        double total = 0.0;
        for (double p : probs.row(b)) {
            if (!(p >= 0.0 && p <= 1.0))
                throw DomainError("prediction row " + std::to_string(b + 1) + " has an entry outside [0, 1]");
            total += p;
        }
        if (std::abs(total - 1.0) > tolerance)
            throw DomainError("prediction row " + std::to_string(b + 1) + " sums to " + format_real(total));
    }
}

Matrix rebalance(const Matrix& probs, double tau, kernels::Backend backend) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw ConfigError("tau must be a finite value >= 0");
    const Vector norms = kernels::column_l1_norms(probs, backend);
    for (std::size_t k = 0; k < norms.size(); ++k) {
        if (!(norms[k] > 0.0))
            throw DegenerateInputError("class " + std::to_string(k) + " has zero total probability");
    }
    if (tau == 0.0) return probs;
    Vector scale(norms.size());
    for (std::size_t k = 0; k < norms.size(); ++k) scale[k] = std::pow(norms[k], tau);
    Matrix out = probs;
    for (std::size_t b = 0; b < out.rows(); ++b) {
        auto row = out.row(b);
        for (std::size_t k = 0; k < row.size(); ++k) row[k] /= scale[k];
    }
    return out;
}

std::vector<std::size_t> predict(const Matrix& scores) {
    std::vector<std::size_t> out(scores.rows(), 0);
    for (std::size_t b = 0; b < scores.rows(); ++b) {
        const auto row = scores.row(b);
        std::size_t best = 0;
        for (std::size_t k = 1; k < row.size(); ++k)
            if (row[k] > row[best]) best = k;
        out[b] = best;
    }
    return out;
}

Matrix load_probs_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    std::size_t rows = 0;
    std::vector<double> values;
    while (std::getline(in, line)) {
        ++line_no;
        const auto row = csv::trim(line);
        if (row.empty()) continue;
        const auto fields = csv::split(row);
        double probe = 0.0;
        if (line_no == 1 && !csv::try_parse_real(fields[0], probe)) {
            width = fields.size();
            continue;
        }
        if (width == 0) width = fields.size();
        if (fields.size() != width)
            throw ParseError("expected " + std::to_string(width) + " columns, got " + std::to_string(fields.size()),
                             line_no);
        for (auto f : fields) values.push_back(csv::parse_real(f, line_no));
        ++rows;
    }
    if (rows == 0) throw ParseError("no rows in '" + path.string() + "'");
    return Matrix(rows, width, std::move(values));
}

std::string probs_to_csv(const Matrix& probs) {
    std::string out;
    for (std::size_t k = 0; k < probs.cols(); ++k) {
        if (k) out += ',';
        out += "class_" + std::to_string(k);
    }
    out += '\n';
    for (std::size_t b = 0; b < probs.rows(); ++b) {
        const auto row = probs.row(b);
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) out += ',';
            out += format_real(row[k]);
        }
        out += '\n';
    }
    return out;
}

std::vector<std::size_t> load_labels_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::size_t> labels;
    while (std::getline(in, line)) {
        ++line_no;
        const auto row = csv::trim(line);
        if (row.empty()) continue;
        const auto fields = csv::split(row);
        const auto first = csv::trim(fields[0]);
        if (line_no == 1 && !first.empty() && !std::isdigit(static_cast<unsigned char>(first[0]))) continue;
        if (fields.size() != 1) throw ParseError("expected a single label column", line_no);
        labels.push_back(csv::parse_label(fields[0], line_no));
    }
    return labels;
}

std::string labels_to_csv(const std::vector<std::size_t>& labels, const char* header) {
    std::string out = std::string(header) + '\n';
    for (auto l : labels) out += std::to_string(l) + '\n';
    return out;
}

}  // namespace gala
