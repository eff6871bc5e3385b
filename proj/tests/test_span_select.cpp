#include <cmath>
#include <limits>
#include <random>

#include "acc/error.hpp"
#include "acc/span_select.hpp"
#include "doctest.h"
#include "oracles.hpp"

TEST_CASE("select_best_span on a hand example") {
    const auto best = acc::select_best_span({{0.1, 0.7, 0.2}, {0.2, 0.1, 0.7}});
    CHECK(best.span.first == 1);
    CHECK(best.span.last == 2);
    CHECK(best.score == doctest::Approx(1.4));
}

TEST_CASE("select_best_span never picks an end before the start") {
    // The largest st and ed form an inverted pair.
    const auto best = acc::select_best_span({{0.0, 0.0, 5.0}, {5.0, 0.0, 0.0}});
    CHECK(best.span.first <= best.span.last);
    CHECK(best.score == doctest::Approx(5.0));
    CHECK(best.span.first == 0);
    CHECK(best.span.last == 0);
}

TEST_CASE("select_best_span ties go to the smaller start, then the smaller end") {
    const auto best = acc::select_best_span({{1, 1, 1}, {1, 1, 1}});
    CHECK(best.span.first == 0);
    CHECK(best.span.last == 0);
}

TEST_CASE("select_best_span respects the length cap") {
    const auto capped = acc::select_best_span({{9, 0, 0, 0}, {0, 0, 0, 9}}, 2);
    CHECK(capped.span.length() <= 2);
    const auto open = acc::select_best_span({{9, 0, 0, 0}, {0, 0, 0, 9}}, 30);
    CHECK(open.span.first == 0);
    CHECK(open.span.last == 3);
}

TEST_CASE("select_best_span rejects bad inputs") {
    CHECK_THROWS_AS(acc::select_best_span({{}, {}}), acc::ProtocolError);
    CHECK_THROWS_AS(acc::select_best_span({{1, 2}, {1}}), acc::ProtocolError);
    CHECK_THROWS_AS(acc::select_best_span({{1, std::nan("")}, {1, 2}}), acc::ProtocolError);
    CHECK_THROWS_AS(acc::select_best_span({{1, 2}, {std::numeric_limits<double>::infinity(), 2}}),
                    acc::ProtocolError);
    CHECK_THROWS_AS(acc::select_best_span({{1}, {1}}, 0), std::invalid_argument);
}

TEST_CASE("select_best_span matches exhaustive enumeration") {
    std::mt19937 gen(31);
    for (int n = 0; n < 500; ++n) {
        const std::size_t len = 1 + gen() % 50;
        const std::size_t cap = 1 + gen() % 35;
        acc::SpanScores s;
        for (std::size_t i = 0; i < len; ++i) {
            // Small integer grid so ties are common.
            s.st.push_back(static_cast<double>(gen() % 5));
            s.ed.push_back(static_cast<double>(gen() % 5));
        }
        const auto got = acc::select_best_span(s, cap);
        const auto want = oracle::best_span(s.st, s.ed, cap);
        CHECK(got.span.first == want.i);
        CHECK(got.span.last == want.j);
        CHECK(got.score == want.score);
    }
}
