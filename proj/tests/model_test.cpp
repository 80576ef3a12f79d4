#include <doctest.h>

#include <random>

#include "gala/errors.hpp"
#include "gala/model.hpp"
#include "support/oracles.hpp"

using namespace gala;

TEST_CASE("init_params") {
    const auto a = init_params(4, 5, 0.01, 3);
    const auto b = init_params(4, 5, 0.01, 3);
    CHECK(a == b);
    CHECK(a.weights.rows() == 4);
    CHECK(a.weights.cols() == 5);
    CHECK(a.biases.size() == 4);
    for (double w : a.weights.elements()) CHECK(std::abs(w) <= 0.01);
    for (double v : a.biases) CHECK(v == 0.0);
    CHECK_FALSE(init_params(4, 5, 0.01, 4) == a);
    CHECK_THROWS_AS(init_params(4, 5, 0.0, 3), ConfigError);
}

TEST_CASE("logits") {
    ClassifierParams id{Matrix(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1}), Vector(3, 0.0), false};
    CHECK(logits(id, Vector{1, 2, 3}) == Vector{1, 2, 3});

    ClassifierParams zero{Matrix(2, 3), Vector(2, 0.0), true};
    CHECK(logits(zero, Vector{4, 5, 6}) == Vector{0, 0});

    ClassifierParams hand{Matrix(2, 2, {1, 1, 1, -1}), Vector{0.5, 0}, true};
    CHECK(logits(hand, Vector{2, 3}) == Vector{5.5, -1});
    hand.use_bias = false;
    CHECK(logits(hand, Vector{2, 3}) == Vector{5, -1});

    CHECK_THROWS_AS(logits(hand, Vector{1, 2, 3}), DimensionError);
}

TEST_CASE("logits are linear in x without bias") {
    std::mt19937_64 rng(17);
    const auto p = init_params(5, 7, 1.0, 8);
    for (int trial = 0; trial < 100; ++trial) {
        const Vector x = oracle::uniform_vector(rng, 7, -2, 2);
        const Vector y = oracle::uniform_vector(rng, 7, -2, 2);
        const double alpha = std::uniform_real_distribution<double>(-3, 3)(rng);
        const double beta = std::uniform_real_distribution<double>(-3, 3)(rng);
        Vector mix(7);
        for (std::size_t c = 0; c < 7; ++c) mix[c] = alpha * x[c] + beta * y[c];
        const Vector zx = logits(p, x), zy = logits(p, y), zm = logits(p, mix);
        for (std::size_t j = 0; j < 5; ++j) CHECK(std::abs(zm[j] - (alpha * zx[j] + beta * zy[j])) <= 1e-12);
    }
}

TEST_CASE("weight_norms") {
    CHECK(weight_norms({Matrix(3, 2), Vector(3, 0.0), false}) == Vector{0, 0, 0});
    CHECK(weight_norms({Matrix(2, 2, {1, 0, 0, 1}), Vector(2, 0.0), false}) == Vector{1, 1});
    CHECK(weight_norms({Matrix(1, 2, {3, 4}), Vector(1, 0.0), false}) == Vector{5});
}

TEST_CASE("checkpoint json round trip") {
    auto p = init_params(3, 4, 0.5, 1, true);
    p.biases = {0.1, -0.2, 0.3};
    const auto j = to_json(p);
    CHECK(j.at("K") == 3);
    CHECK(j.at("d") == 4);
    CHECK(params_from_json(nlohmann::json::parse(j.dump())) == p);
    auto bad = j;
    bad["weights"] = std::vector<double>{1, 2};
    CHECK_THROWS_AS(params_from_json(bad), DimensionError);
    CHECK_THROWS_AS(params_from_json(nlohmann::json::object()), ParseError);
}
