#include "acc/silverlabel.hpp"

#include <set>

#include "acc/error.hpp"
#include "acc/norm.hpp"
#include "acc/rng.hpp"

namespace acc {

std::vector<std::string> FoldPlan::train_ids(std::size_t fold) const {
    std::vector<std::string> out;
    for (const auto& id : ids) {
        if (assignment.at(id) != fold) {
            out.push_back(id);
        }
    }
    return out;
}

FoldPlan split_folds(std::span<const Example> dataset, std::size_t k, std::uint64_t seed) {
    if (k < 2) {
        throw InputError("fold count must be at least 2");
    }
    if (k > dataset.size()) {
        throw InputError("fold count " + std::to_string(k) + " exceeds dataset size " +
                         std::to_string(dataset.size()));
    }
    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.folds.resize(k);

    std::vector<std::size_t> order(dataset.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    SeededRng rng(seed);
    rng.shuffle(order);

    std::vector<std::size_t> fold_of(dataset.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        fold_of[order[pos]] = pos % k;
    }
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        if (!plan.assignment.emplace(dataset[i].id, fold_of[i]).second) {
            throw InputError("duplicate example id: " + dataset[i].id);
        }
        plan.folds[fold_of[i]].push_back(dataset[i].id);
        plan.ids.push_back(dataset[i].id);
    }
    return plan;
}

Json to_json(const ClassifierRecord& r) {
    return {{"id", r.id},
            {"question", r.question},
            {"context", r.context},
            {"prediction", r.prediction},
            {"label", to_string(r.label)}};
}

Json to_json(const CorrectorRecord& r) {
    return {{"id", r.id},
            {"question", r.question},
            {"context", r.context},
            {"prediction", r.prediction},
            {"target", r.target},
            {"target_span", {r.target_span.first, r.target_span.last}},
            {"requires_modification", r.requires_modification}};
}

namespace {

std::map<std::string, const Example*> index_examples(std::span<const Example> dataset) {
    std::map<std::string, const Example*> out;
    for (const auto& ex : dataset) {
        out.emplace(ex.id, &ex);
    }
    return out;
}

}  // namespace

std::vector<ClassifierRecord> annotate_fold_predictions(std::span<const PredictionRecord> predictions,
                                                        std::span<const Example> dataset,
                                                        const Thresholds& t,
                                                        const EmbeddingProvider& provider) {
    const auto by_id = index_examples(dataset);
    std::string missing;
    for (const auto& r : predictions) {
        if (!by_id.count(r.id)) {
            missing += (missing.empty() ? "" : ", ") + r.id;
        }
    }
    if (!missing.empty()) {
        throw InputError("prediction ids not in dataset: " + missing);
    }

    std::vector<ClassifierRecord> out;
    for (const auto& r : predictions) {
        const Example& ex = *by_id.at(r.id);
        const auto golds = ex.gold_texts();
        const std::string context = ex.context_text();
        for (const auto& p : r.predictions) {
            out.push_back({ex.id, ex.question, context, p,
                           classify_prediction(p, golds, t, provider).label});
        }
    }
    return out;
}

ClassifierDataset build_classifier_dataset(std::span<const ClassifierRecord> records, std::uint64_t seed) {
    ClassifierDataset out;
    std::vector<ClassifierRecord> by_class[3];
    for (const auto& r : records) {
        by_class[static_cast<int>(r.label)].push_back(r);
        ++out.input_counts[r.label];
    }
    std::size_t target = records.size();
    for (const Label l : kAllLabels) {
        target = std::min(target, out.input_counts[l]);
        if (out.input_counts[l] == 0) {
            out.diagnostics.push_back("no " + std::string(to_string(l)) +
                                      " records; a 1:1:1 classifier dataset is empty");
        }
    }
    if (target == 0) {
        return out;
    }
    SeededRng rng(seed);
    for (const Label l : kAllLabels) {
        auto kept = rng.sample(by_class[static_cast<int>(l)], target);
        out.records.insert(out.records.end(), kept.begin(), kept.end());
        out.output_counts[l] = kept.size();
    }
    rng.shuffle(out.records);
    return out;
}

CorrectorDataset build_corrector_dataset(std::span<const ClassifierRecord> records,
                                         std::span<const Example> dataset, const Thresholds& t,
                                         const EmbeddingProvider& provider, std::uint64_t seed) {
    CorrectorDataset out;
    const auto by_id = index_examples(dataset);
    std::vector<CorrectorRecord> modify;
    std::vector<CorrectorRecord> keep;

    for (const auto& r : records) {
        if (r.label == Label::Wrong) {
            continue;
        }
        const auto it = by_id.find(r.id);
        if (it == by_id.end()) {
            throw InputError("classifier record refers to unknown example id: " + r.id);
        }
        const Example& ex = *it->second;
        std::string anchor = r.prediction;
        if (r.label == Label::Partially) {
            const auto golds = ex.gold_texts();
            const auto lp = classify_prediction(r.prediction, golds, t, provider);
            if (!lp.best_gold) {
                ++out.skipped_gold_not_in_context;
                continue;
            }
            anchor = *lp.best_gold;
        }
        const auto hits = find_span_occurrences(anchor, ex.context_words);
        if (hits.empty()) {
            ++(r.label == Label::Partially ? out.skipped_gold_not_in_context
                                           : out.skipped_prediction_not_in_context);
            continue;
        }
        CorrectorRecord cr{r.id, r.question, r.context, r.prediction,
                           join_words(ex.context_words, hits.front()), hits.front(), false};
        cr.requires_modification = normalize_answer(cr.prediction) != normalize_answer(cr.target);
        (r.label == Label::Partially ? modify : keep).push_back(std::move(cr));
    }

    out.modify_candidates = modify.size();
    out.keep_candidates = keep.size();
    if (modify.empty()) {
        out.diagnostics.push_back("no partially correct records with their gold in context; corrector dataset is empty");
    }
    if (keep.empty()) {
        out.diagnostics.push_back("no correct records found in context; corrector dataset is empty");
    }
    const std::size_t pairs = std::min(modify.size() / 2, keep.size());
    if (pairs == 0) {
        if (!modify.empty() && !keep.empty()) {
            out.diagnostics.push_back("a single modification example cannot form a 2:1 ratio; corrector dataset is empty");
        }
        return out;
    }
    SeededRng rng(seed);
    out.records = rng.sample(modify, 2 * pairs);
    auto kept = rng.sample(keep, pairs);
    out.records.insert(out.records.end(), kept.begin(), kept.end());
    out.modify_kept = 2 * pairs;
    out.keep_kept = pairs;
    rng.shuffle(out.records);
    return out;
}

}  // namespace acc
