#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gala/errors.hpp"
#include "gala/evaluation.hpp"

using namespace gala;

TEST_CASE("evaluate examples") {
    const GroupAssignment g2{Group::head, Group::tail};
    const auto perfect = evaluate({0, 1, 1, 0}, {0, 1, 1, 0}, g2);
    CHECK(perfect.top1 == 1.0);
    CHECK(perfect.confusion == Matrix(2, 2, {2, 0, 0, 2}));

    const GroupAssignment g3(3, Group::medium);
    const auto constant = evaluate({0, 0, 0, 0, 0}, {0, 1, 2, 1, 0}, g3);
    CHECK(constant.positive_prediction_counts == std::vector<std::size_t>{5, 0, 0});

    const auto hand = evaluate({0, 1, 1, 1}, {0, 0, 1, 1}, g2);
    CHECK(hand.top1 == 0.75);
    CHECK(hand.per_class_accuracy == Vector{0.5, 1.0});
    CHECK(hand.group_accuracy.head == 0.5);
    CHECK(hand.group_accuracy.tail == 1.0);
    CHECK(std::isnan(hand.group_accuracy.medium));
    CHECK(hand.confusion.row_sums() == Vector{2, 2});

    CHECK_THROWS_AS(evaluate({0}, {0, 1}, g2), DimensionError);
    CHECK_THROWS_AS(evaluate({2}, {0}, g2), DimensionError);
}

TEST_CASE("evaluate invariants on random predictions") {
    std::mt19937_64 rng(10);
    const std::size_t K = 6;
    const GroupAssignment groups{Group::head, Group::head, Group::medium, Group::medium, Group::tail, Group::tail};
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::size_t> truth(120), pred(120);
        for (std::size_t b = 0; b < 120; ++b) {
            truth[b] = b % K;
            pred[b] = std::uniform_int_distribution<std::size_t>(0, K - 1)(rng);
        }
        const auto r = evaluate(pred, truth, groups);
        CHECK(r.top1 >= 0.0);
        CHECK(r.top1 <= 1.0);
        CHECK(static_cast<double>(r.correct) == r.top1 * 120.0);
        std::size_t total = 0;
        for (auto c : r.positive_prediction_counts) total += c;
        CHECK(total == 120);
        for (double s : r.confusion.row_sums()) CHECK(s == 20.0);
        for (Group g : {Group::head, Group::medium, Group::tail}) {
            double lo = 1.0, hi = 0.0;
            for (std::size_t k = 0; k < K; ++k)
                if (groups[k] == g) {
                    lo = std::min(lo, r.per_class_accuracy[k]);
                    hi = std::max(hi, r.per_class_accuracy[k]);
                }
            CHECK(r.group_accuracy[g] >= lo - 1e-15);
            CHECK(r.group_accuracy[g] <= hi + 1e-15);
        }

        // permutation invariance
        std::vector<std::size_t> order(120);
        for (std::size_t b = 0; b < 120; ++b) order[b] = b;
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<std::size_t> tp(120), pp(120);
        for (std::size_t b = 0; b < 120; ++b) {
            tp[b] = truth[order[b]];
            pp[b] = pred[order[b]];
        }
        const auto rp = evaluate(pp, tp, groups);
        CHECK(rp.top1 == r.top1);
        CHECK(rp.confusion == r.confusion);
        CHECK(to_json(rp) == to_json(r));
    }
}

TEST_CASE("similarity_report") {
    const Dataset d = make_dataset(Matrix(4, 2, {1, 0, 3, 0, 0, 2, 0, 4}), {0, 0, 1, 1}, 2, Role::train);
    ClassifierParams p{Matrix(2, 2, {2, 0, 0, 1}), Vector(2, 0.0), false};
    const Vector s = similarity_report(p, d);
    CHECK(s[0] == doctest::Approx(1.0));
    CHECK(s[1] == doctest::Approx(1.0));

    p.weights = Matrix(2, 2, {0, 1, 1, 0});
    const Vector orth = similarity_report(p, d);
    CHECK(orth[0] == doctest::Approx(0.0));
    CHECK(orth[1] == doctest::Approx(0.0));

    const Dataset empty_class = make_dataset(Matrix(1, 2, {1, 0}), {0}, 2, Role::train);
    CHECK_THROWS_AS(similarity_report(p, empty_class), DegenerateInputError);
}

TEST_CASE("cross_similarity_report") {
    // Four classes on the axes of the plane, symmetric weights.
    Matrix x(8, 2, {1, 0, 2, 0, 0, 1, 0, 2, -1, 0, -2, 0, 0, -1, 0, -2});
    const Dataset d = make_dataset(std::move(x), {0, 0, 1, 1, 2, 2, 3, 3}, 4, Role::train);
    const GroupAssignment groups{Group::head, Group::tail, Group::head, Group::tail};
    ClassifierParams p{Matrix(4, 2, {1, 0, 0, 1, -1, 0, 0, -1}), Vector(4, 0.0), false};
    const auto r = cross_similarity_report(p, d, groups);
    // w_0 vs head class 2 (opposite) -> -1, vs tail classes 1 and 3 -> 0
    CHECK(r[0].to_head == doctest::Approx(-1.0));
    CHECK(r[0].to_tail == doctest::Approx(0.0));
    CHECK(r[1].to_head == doctest::Approx(0.0));
    CHECK(r[1].to_tail == doctest::Approx(-1.0));

    // weights tilted equally out of the data plane see head and tail alike
    Matrix x3(8, 3);
    for (std::size_t i = 0; i < 8; ++i) {
        x3(i, 0) = d.features(i, 0);
        x3(i, 1) = d.features(i, 1);
    }
    const Dataset d3 = make_dataset(std::move(x3), d.labels, 4, Role::train);
    ClassifierParams tilted{Matrix(4, 3, {0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1}), Vector(4, 0.0), false};
    for (const auto& c : cross_similarity_report(tilted, d3, groups)) CHECK(c.to_head == doctest::Approx(c.to_tail));

    CHECK_THROWS_AS(cross_similarity_report(p, d, GroupAssignment(4, Group::head)), DegenerateInputError);
    CHECK_THROWS_AS(cross_similarity_report(p, d, GroupAssignment(4, Group::medium)), DegenerateInputError);
}

TEST_CASE("eval report json") {
    const auto r = evaluate({0, 1}, {0, 0}, {Group::head, Group::tail});
    const auto j = to_json(r);
    CHECK(j.at("top1") == 0.5);
    CHECK(j.at("per_class_accuracy")[1].is_null());
    CHECK(j.at("group_accuracy").at("medium").is_null());
    CHECK(j.at("confusion")[0] == nlohmann::json({1, 1}));
}
