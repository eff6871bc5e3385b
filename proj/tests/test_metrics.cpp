#include <random>

#include "acc/metrics.hpp"
#include "doctest.h"
#include "oracles.hpp"

using Texts = std::vector<std::string>;

TEST_CASE("em_counts") {
    const auto c = acc::em_counts(Texts{"Becky Sloan", "DHMIS"}, Texts{"Becky Sloan", "Joseph Pelling"});
    CHECK(c.pred_credit == 1.0);
    CHECK(c.gold_credit == 1.0);
    CHECK(c.n_preds == 2);
    CHECK(c.n_golds == 2);
    const auto prf = acc::question_prf(c);
    CHECK(prf.precision == 0.5);
    CHECK(prf.recall == 0.5);

    const auto same = acc::question_prf(acc::em_counts(Texts{"a b", "c d"}, Texts{"a b", "c d"}));
    CHECK(same.f1 == 1.0);

    CHECK(acc::em_counts(Texts{"the London Studios"}, Texts{"London Studios"}).pred_credit == 1.0);

    const auto dup = acc::em_counts(Texts{"Becky Sloan", "becky sloan."}, Texts{"Becky Sloan"});
    CHECK(dup.n_preds == 1);
    CHECK(dup.pred_credit == 1.0);

    const auto empty = acc::em_counts(Texts{}, Texts{});
    CHECK(empty.n_preds == 0);
    CHECK(empty.pred_credit == 0.0);
}

TEST_CASE("pm_counts") {
    const auto c = acc::question_prf(acc::pm_counts(Texts{"Becky"}, Texts{"Becky Sloan"}));
    CHECK(c.precision == 1.0);
    CHECK(c.recall == 0.5);
    CHECK(acc::question_prf(acc::pm_counts(Texts{"xyz"}, Texts{"Becky Sloan"})).f1 == 0.0);
    CHECK(acc::question_prf(acc::pm_counts(Texts{"a b", "c"}, Texts{"a b", "c"})).f1 == 1.0);
}

TEST_CASE("longest_common_run") {
    CHECK(acc::longest_common_run(Texts{"a", "b", "c", "d"}, Texts{"x", "b", "c", "y"}) == 2);
    CHECK(acc::longest_common_run(Texts{}, Texts{"a"}) == 0);
    CHECK(acc::longest_common_run(Texts{"a", "b"}, Texts{"b", "a"}) == 1);
}

TEST_CASE("aggregate_micro") {
    const std::vector<acc::MatchCounts> two = {{1, 1, 2, 2}, {1, 1, 1, 2}};
    const auto prf = acc::aggregate_micro(two);
    CHECK(prf.precision == doctest::Approx(2.0 / 3.0));
    CHECK(prf.recall == doctest::Approx(0.5));
    CHECK(prf.f1 == doctest::Approx(4.0 / 7.0));

    CHECK(acc::aggregate_micro({}).f1 == 0.0);

    const std::vector<acc::MatchCounts> unanswerable = {{0, 0, 0, 0}};
    CHECK(acc::aggregate_micro(unanswerable).f1 == 1.0);
    // Predicting something for an unanswerable question earns nothing.
    const std::vector<acc::MatchCounts> spurious = {acc::em_counts(Texts{"x"}, Texts{})};
    CHECK(acc::aggregate_micro(spurious).precision == 0.0);

    const acc::MatchCounts one{1, 2, 3, 4};
    const std::vector<acc::MatchCounts> single = {one};
    CHECK(acc::aggregate_micro(single).f1 == acc::question_prf(one).f1);
}

TEST_CASE("f1_score") {
    CHECK(acc::f1_score(0.0, 0.0) == 0.0);
    CHECK(acc::f1_score(1.0, 0.0) == 0.0);
    CHECK(acc::f1_score(0.5, 0.25) == acc::f1_score(0.25, 0.5));
}

TEST_CASE("metric properties on random questions") {
    std::mt19937 gen(23);
    const Texts vocab = {"becky", "sloan", "joseph", "pelling", "the", "london", "studios", "a"};
    auto text = [&] {
        std::string s;
        for (std::size_t i = 0; i < 1 + gen() % 3; ++i) {
            s += (i ? " " : "") + vocab[gen() % vocab.size()];
        }
        return s;
    };
    for (int n = 0; n < 300; ++n) {
        Texts preds;
        Texts golds;
        for (std::size_t i = 0; i < gen() % 4; ++i) {
            preds.push_back(text());
        }
        for (std::size_t i = 0; i < 1 + gen() % 3; ++i) {
            golds.push_back(text());
        }
        const auto em = acc::em_counts(preds, golds);
        const auto pm = acc::pm_counts(preds, golds);
        const auto oem = oracle::em(preds, golds);
        const auto opm = oracle::pm(preds, golds);
        CHECK(em.pred_credit == oem.pred_credit);
        CHECK(em.n_preds == oem.n_preds);
        CHECK(em.n_golds == oem.n_golds);
        CHECK(pm.pred_credit == doctest::Approx(opm.pred_credit).epsilon(1e-12));
        CHECK(pm.gold_credit == doctest::Approx(opm.gold_credit).epsilon(1e-12));
        CHECK(pm.pred_credit >= em.pred_credit);
        CHECK(pm.gold_credit >= em.gold_credit);

        // A wrong prediction lowers EM precision and leaves recall alone.
        if (!preds.empty()) {
            auto more = preds;
            more.push_back("qqq zzz");
            const auto before = acc::question_prf(em);
            const auto after = acc::question_prf(acc::em_counts(more, golds));
            CHECK(after.recall == before.recall);
            if (before.precision > 0) {
                CHECK(after.precision < before.precision);
            }
        }
    }
}
