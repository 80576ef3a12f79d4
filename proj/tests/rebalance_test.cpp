#include <doctest.h>

#include <algorithm>
#include <random>

#include "gala/errors.hpp"
#include "gala/format.hpp"
#include "gala/rebalance.hpp"
#include "support/oracles.hpp"

using namespace gala;

namespace {

Matrix random_probs(std::mt19937_64& rng, std::size_t B, std::size_t K, double skew) {
    Matrix P(B, K);
    for (std::size_t b = 0; b < B; ++b) {
        double total = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            // earlier classes get more mass so column norms differ
            P(b, k) = std::uniform_real_distribution<double>(0.0, 1.0)(rng) * std::pow(skew, -static_cast<double>(k));
            total += P(b, k);
        }
        for (double& v : P.row(b)) v /= total;
    }
    return P;
}

// Circulant rows built from a dyadic distribution: every column sums to the
// same exactly representable value.
Matrix equal_norm_probs(std::mt19937_64& rng, std::size_t K, std::size_t blocks) {
    std::vector<int> parts(K, 1);
    for (int extra = 0; extra < 64 - static_cast<int>(K); ++extra)
        ++parts[std::uniform_int_distribution<std::size_t>(0, K - 1)(rng)];
    Matrix P(K * blocks, K);
    for (std::size_t blk = 0; blk < blocks; ++blk) {
        std::shuffle(parts.begin(), parts.end(), rng);
        for (std::size_t r = 0; r < K; ++r)
            for (std::size_t k = 0; k < K; ++k) P(blk * K + r, k) = parts[(k + r) % K] / 64.0;
    }
    return P;
}

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
    const auto dir = std::filesystem::temp_directory_path() / "gala_rebalance_test";
    std::filesystem::create_directories(dir);
    write_text_file(dir / name, contents);
    return dir / name;
}

}  // namespace

TEST_CASE("rebalance examples") {
    const Matrix P(2, 2, {0.8, 0.2, 0.6, 0.4});
    CHECK(rebalance(P, 0.0) == P);

    const Matrix flat(2, 2, {0.5, 0.5, 0.5, 0.5});
    CHECK(rebalance(flat, 1.0) == flat);

    const Matrix out = rebalance(P, 1.0);
    CHECK(out(0, 0) == doctest::Approx(0.8 / 1.4).epsilon(1e-15));
    CHECK(out(0, 1) == doctest::Approx(0.2 / 0.6).epsilon(1e-15));
    CHECK(out(1, 0) == doctest::Approx(0.6 / 1.4).epsilon(1e-15));
    CHECK(out(1, 1) == doctest::Approx(0.4 / 0.6).epsilon(1e-15));
    CHECK(out(0, 0) == doctest::Approx(0.5714).epsilon(1e-4));
    CHECK(out(1, 1) == doctest::Approx(0.6667).epsilon(1e-4));
    CHECK(predict(P) == std::vector<std::size_t>{0, 0});
    CHECK(predict(out) == std::vector<std::size_t>{0, 1});

    CHECK_THROWS_AS(rebalance(Matrix(2, 2, {1, 0, 1, 0}), 1.0), DegenerateInputError);
    CHECK_THROWS_AS(rebalance(P, -1.0), ConfigError);
}

TEST_CASE("predict tie-breaking") {
    CHECK(predict(Matrix(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1})) == std::vector<std::size_t>{0, 1, 2});
    CHECK(predict(Matrix(1, 4, {0.25, 0.25, 0.25, 0.25})) == std::vector<std::size_t>{0});
    CHECK(predict(Matrix(1, 3, {0.2, 0.4, 0.4})) == std::vector<std::size_t>{1});
}

TEST_CASE("rebalance properties") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t K = 2 + trial % 7;
        const Matrix P = random_probs(rng, 40 + trial, K, 1.5);
        CHECK(rebalance(P, 0.0) == P);

        const Matrix one = rebalance(P, 1.0);
        for (double s : one.col_sums()) CHECK(std::abs(s - 1.0) <= 1e-9);
        for (double v : one.elements()) CHECK(v >= 0.0);

        // the class with the largest column mass never gains predictions as tau grows
        const Vector norms = P.col_sums();
        const auto top = static_cast<std::size_t>(std::max_element(norms.begin(), norms.end()) - norms.begin());
        std::size_t previous = P.rows() + 1;
        for (double tau : {0.0, 0.5, 1.0, 1.5}) {
            const auto pred = predict(rebalance(P, tau));
            const auto count = static_cast<std::size_t>(std::count(pred.begin(), pred.end(), top));
            CHECK(count <= previous);
            previous = count;
        }

        const Matrix eq = equal_norm_probs(rng, K, 3);
        const auto base = predict(eq);
        for (double tau : {0.5, 1.0, 2.0}) CHECK(predict(rebalance(eq, tau)) == base);
    }
}

TEST_CASE("serial and parallel rebalance agree") {
    std::mt19937_64 rng(14);
    const Matrix P = random_probs(rng, 300, 9, 1.3);
    CHECK(rebalance(P, 0.7, kernels::Backend::serial) == rebalance(P, 0.7, kernels::Backend::parallel));
}

TEST_CASE("check_prediction_matrix") {
    CHECK_NOTHROW(check_prediction_matrix(Matrix(1, 2, {0.3, 0.7})));
    CHECK_THROWS_AS(check_prediction_matrix(Matrix(1, 2, {0.3, 0.6})), DomainError);
    CHECK_THROWS_AS(check_prediction_matrix(Matrix(1, 2, {-0.1, 1.1})), DomainError);
}

TEST_CASE("probability and label CSV") {
    std::mt19937_64 rng(6);
    const Matrix P = random_probs(rng, 12, 4, 2.0);
    CHECK(load_probs_csv(temp_file("p.csv", probs_to_csv(P))) == P);
    CHECK(load_probs_csv(temp_file("nohdr.csv", "0.5,0.5\n1,0\n")) == Matrix(2, 2, {0.5, 0.5, 1, 0}));

    try {
        load_probs_csv(temp_file("bad.csv", "a,b\n0.5,0.5\n0.5,x\n"));
        FAIL("expected parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(load_probs_csv(temp_file("ragged.csv", "0.5,0.5\n1\n")), ParseError);

    const std::vector<std::size_t> labels{3, 0, 2};
    CHECK(load_labels_csv(temp_file("l.csv", labels_to_csv(labels))) == labels);
    CHECK(load_labels_csv(temp_file("l2.csv", "1\n2\n")) == std::vector<std::size_t>{1, 2});
}
