#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "gala/errors.hpp"
#include "gala/math.hpp"
#include "support/oracles.hpp"

using namespace gala;

TEST_CASE("dot") {
    CHECK(dot(Vector{1, 2}, Vector{3, 4}) == 11.0);
    CHECK(dot(Vector{0, 0}, Vector{5, 7}) == 0.0);
    CHECK(dot(Vector{1, 0, 0}, Vector{0, 1, 0}) == 0.0);
    CHECK_THROWS_AS(dot(Vector{1, 2}, Vector{1}), DimensionError);
}

TEST_CASE("softmax examples") {
    const Vector uniform = softmax(Vector{0, 0, 0});
    for (double p : uniform) CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    const Vector big = softmax(Vector{1000, 0});
    CHECK(all_finite(big));
    CHECK(big[0] == doctest::Approx(1.0));
    CHECK(big[1] < 1e-300);

    const Vector ratios = softmax(Vector{std::log(1.0), std::log(2.0), std::log(3.0)});
    CHECK(ratios[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(ratios[1] == doctest::Approx(2.0 / 6.0).epsilon(1e-14));
    CHECK(ratios[2] == doctest::Approx(3.0 / 6.0).epsilon(1e-14));

    CHECK_THROWS_AS(softmax(Vector{}), DimensionError);
}

TEST_CASE("softmax properties on random logits") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> len(1, 12);
    for (int trial = 0; trial < 500; ++trial) {
        const Vector z = oracle::uniform_vector(rng, static_cast<std::size_t>(len(rng)), -50, 50);
        const Vector p = softmax(z);
        CHECK(std::abs(sum(p) - 1.0) <= 1e-12);
        for (double v : p) {
            CHECK(v > 0.0);
            CHECK(v <= 1.0);
        }

        // permutation equivariance
        std::vector<std::size_t> perm(z.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        Vector zp(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) zp[i] = z[perm[i]];
        const Vector pp = softmax(zp);
        for (std::size_t i = 0; i < z.size(); ++i) CHECK(std::abs(pp[i] - p[perm[i]]) <= 1e-12);

        // shift invariance for |c| <= 700
        const double c = std::uniform_real_distribution<double>(-700, 700)(rng);
        Vector zs = z;
        for (double& v : zs) v += c;
        const Vector ps = softmax(zs);
        for (std::size_t i = 0; i < z.size(); ++i) CHECK(std::abs(ps[i] - p[i]) <= 1e-12);
    }
}

TEST_CASE("log_sum_exp agrees with the literal formula where that is finite") {
    const Vector z{0.5, -1.0, 2.0};
    CHECK(log_sum_exp(z) == doctest::Approx(std::log(std::exp(0.5) + std::exp(-1.0) + std::exp(2.0))));
    CHECK(std::isfinite(log_sum_exp(Vector{1000, 999})));
}

TEST_CASE("cosine_similarity") {
    const Vector v{1.5, -2.0, 0.25};
    Vector neg = v;
    for (double& x : neg) x = -x;
    CHECK(cosine_similarity(v, v) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cosine_similarity(v, neg) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(cosine_similarity(Vector{1, 0}, Vector{0, 1}) == 0.0);
    CHECK_THROWS_AS(cosine_similarity(Vector{0, 0}, Vector{1, 0}), DegenerateInputError);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const Vector a = oracle::uniform_vector(rng, 6, -3, 3);
        const Vector b = oracle::uniform_vector(rng, 6, -3, 3);
        const double alpha = std::uniform_real_distribution<double>(0.01, 100)(rng);
        const double beta = std::uniform_real_distribution<double>(0.01, 100)(rng);
        Vector as = a, bs = b;
        for (double& x : as) x *= alpha;
        for (double& x : bs) x *= beta;
        const double c = cosine_similarity(a, b);
        CHECK(c >= -1.0);
        CHECK(c <= 1.0);
        CHECK(std::abs(cosine_similarity(as, bs) - c) <= 1e-12);
    }
}

TEST_CASE("matrix sums and shape checks") {
    const Matrix m(2, 3, {1, 2, 3, 4, 5, 6});
    CHECK(m.row_sums() == Vector{6, 15});
    CHECK(m.col_sums() == Vector{5, 7, 9});
    CHECK(m.column(1) == Vector{2, 5});
    CHECK_THROWS_AS(Matrix(2, 2, {1, 2, 3}), DimensionError);
}
