#include "acc/taxonomy.hpp"

#include <tuple>

#include "acc/error.hpp"
#include "acc/norm.hpp"

namespace acc {

std::string_view to_string(Label label) {
    switch (label) {
        case Label::Wrong:
            return "wrong";
        case Label::Partially:
            return "partially";
        case Label::Correct:
            return "correct";
    }
    return "wrong";
}

std::optional<Label> parse_label(std::string_view text) {
    for (const Label l : kAllLabels) {
        if (text == to_string(l)) {
            return l;
        }
    }
    return std::nullopt;
}

void Thresholds::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw InputError("alpha must lie in [0, 1]");
    }
    if (!(beta >= 0.0 && beta <= 1.0)) {
        throw InputError("beta must lie in [0, 1]");
    }
}

std::size_t& LabelCounts::operator[](Label label) {
    switch (label) {
        case Label::Wrong:
            return wrong;
        case Label::Partially:
            return partially;
        case Label::Correct:
            break;
    }
    return correct;
}

std::size_t LabelCounts::operator[](Label label) const {
    return const_cast<LabelCounts&>(*this)[label];
}

namespace {

struct Candidate {
    const std::string* gold = nullptr;
    std::string normalized;
    double wo = 0.0;
    double bs = 0.0;
};

// True if a ranks strictly above b.
bool ranks_above(const Candidate& a, const Candidate& b) {
    if (a.wo != b.wo) {
        return a.wo > b.wo;
    }
    if (a.bs != b.bs) {
        return a.bs > b.bs;
    }
    return std::tie(a.normalized, *a.gold) < std::tie(b.normalized, *b.gold);
}

}  // namespace

LabeledPrediction classify_prediction(std::string_view pred, std::span<const std::string> golds,
                                      const Thresholds& t, const EmbeddingProvider& provider) {
    LabeledPrediction out;
    out.prediction = std::string(pred);
    if (golds.empty()) {
        return out;
    }

    const std::string norm_pred = normalize_answer(pred);
    const Candidate* exact = nullptr;
    std::vector<Candidate> candidates;
    candidates.reserve(golds.size());
    for (const auto& g : golds) {
        candidates.push_back({&g, normalize_answer(g), 0.0, 0.0});
    }
    for (const auto& c : candidates) {
        if (c.normalized == norm_pred && (exact == nullptr || ranks_above(c, *exact))) {
            exact = &c;
        }
    }
    if (exact != nullptr) {
        out.label = Label::Correct;
        out.best_gold = *exact->gold;
        out.wo = 1.0;
        out.bs = 1.0;
        return out;
    }

    const Candidate* best_qualifying = nullptr;
    const Candidate* best_overall = nullptr;
    for (auto& c : candidates) {
        c.wo = word_overlap(pred, *c.gold);
        c.bs = bertscore(pred, *c.gold, provider);
        if (c.wo >= t.alpha && c.bs >= t.beta &&
            (best_qualifying == nullptr || ranks_above(c, *best_qualifying))) {
            best_qualifying = &c;
        }
        if (best_overall == nullptr || ranks_above(c, *best_overall)) {
            best_overall = &c;
        }
    }
    const Candidate* chosen = best_qualifying != nullptr ? best_qualifying : best_overall;
    out.label = best_qualifying != nullptr ? Label::Partially : Label::Wrong;
    out.best_gold = *chosen->gold;
    out.wo = chosen->wo;
    out.bs = chosen->bs;
    return out;
}

AnnotatedSet annotate_prediction_set(std::span<const std::string> preds,
                                     std::span<const std::string> golds, const Thresholds& t,
                                     const EmbeddingProvider& provider) {
    AnnotatedSet out;
    out.labeled.reserve(preds.size());
    for (const auto& p : preds) {
        out.labeled.push_back(classify_prediction(p, golds, t, provider));
        ++out.counts[out.labeled.back().label];
    }
    return out;
}

}  // namespace acc
