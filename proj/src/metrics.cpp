#include "acc/metrics.hpp"

#include <algorithm>

#include "acc/norm.hpp"

namespace acc {
namespace {

// Normalized texts with duplicates removed, first occurrence order.
std::vector<std::string> normalized_set(std::span<const std::string> items) {
    std::vector<std::string> out;
    for (const auto& item : items) {
        auto n = normalize_answer(item);
        if (std::find(out.begin(), out.end(), n) == out.end()) {
            out.push_back(std::move(n));
        }
    }
    return out;
}

double overlap_ratio(const std::string& a_norm, const std::vector<std::string>& a_words,
                     const std::string& b_norm, const std::vector<std::string>& b_words) {
    if (a_norm == b_norm) {
        return 1.0;
    }
    if (a_words.empty()) {
        return 0.0;
    }
    return static_cast<double>(longest_common_run(a_words, b_words)) /
           static_cast<double>(a_words.size());
}

}  // namespace

double f1_score(double precision, double recall) {
    const double denom = precision + recall;
    return denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
}

MatchCounts& MatchCounts::operator+=(const MatchCounts& other) {
    pred_credit += other.pred_credit;
    gold_credit += other.gold_credit;
    n_preds += other.n_preds;
    n_golds += other.n_golds;
    return *this;
}

MatchCounts em_counts(std::span<const std::string> preds, std::span<const std::string> golds) {
    const auto p = normalized_set(preds);
    const auto g = normalized_set(golds);
    std::size_t shared = 0;
    for (const auto& x : p) {
        shared += static_cast<std::size_t>(std::count(g.begin(), g.end(), x));
    }
    MatchCounts out;
    out.pred_credit = static_cast<double>(shared);
    out.gold_credit = static_cast<double>(shared);
    out.n_preds = p.size();
    out.n_golds = g.size();
    return out;
}

std::size_t longest_common_run(std::span<const std::string> a, std::span<const std::string> b) {
    // Rolling-row dynamic program over suffix-match lengths.
    std::vector<std::size_t> prev(b.size() + 1, 0);
    std::vector<std::size_t> cur(b.size() + 1, 0);
    std::size_t best = 0;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : 0;
            best = std::max(best, cur[j]);
        }
        std::swap(prev, cur);
    }
    return best;
}

MatchCounts pm_counts(std::span<const std::string> preds, std::span<const std::string> golds) {
    const auto p = normalized_set(preds);
    const auto g = normalized_set(golds);
    std::vector<std::vector<std::string>> p_words;
    std::vector<std::vector<std::string>> g_words;
    for (const auto& x : p) {
        p_words.push_back(split_words(x));
    }
    for (const auto& x : g) {
        g_words.push_back(split_words(x));
    }

    MatchCounts out;
    out.n_preds = p.size();
    out.n_golds = g.size();
    for (std::size_t i = 0; i < p.size(); ++i) {
        double best = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) {
            best = std::max(best, overlap_ratio(p[i], p_words[i], g[j], g_words[j]));
        }
        out.pred_credit += best;
    }
    for (std::size_t j = 0; j < g.size(); ++j) {
        double best = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            best = std::max(best, overlap_ratio(g[j], g_words[j], p[i], p_words[i]));
        }
        out.gold_credit += best;
    }
    return out;
}

namespace {

MatchCounts with_no_answer_convention(const MatchCounts& c) {
    if (c.n_preds == 0 && c.n_golds == 0) {
        return {1.0, 1.0, 1, 1};
    }
    return c;
}

PRF prf_from_totals(const MatchCounts& total) {
    PRF out;
    out.precision = total.n_preds > 0 ? total.pred_credit / static_cast<double>(total.n_preds) : 0.0;
    out.recall = total.n_golds > 0 ? total.gold_credit / static_cast<double>(total.n_golds) : 0.0;
    out.f1 = f1_score(out.precision, out.recall);
    return out;
}

}  // namespace

PRF question_prf(const MatchCounts& counts) {
    return prf_from_totals(with_no_answer_convention(counts));
}

PRF aggregate_micro(std::span<const MatchCounts> counts) {
    MatchCounts total;
    for (const auto& c : counts) {
        total += with_no_answer_convention(c);
    }
    return prf_from_totals(total);
}

}  // namespace acc
