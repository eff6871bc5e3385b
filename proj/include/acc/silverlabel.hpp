#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "acc/dataio.hpp"
#include "acc/example.hpp"
#include "acc/jsonl.hpp"
#include "acc/similarity.hpp"
#include "acc/taxonomy.hpp"

namespace acc {

inline constexpr std::size_t kDefaultFolds = 3;

/// Assignment of example ids to K folds of near-equal size.
struct FoldPlan {
    std::size_t k = kDefaultFolds;
    std::uint64_t seed = 0;
    std::vector<std::string> ids;  // dataset order
    std::map<std::string, std::size_t> assignment;
    std::vector<std::vector<std::string>> folds;  // ids per fold, dataset order

    /// Ids outside fold i, dataset order.
    std::vector<std::string> train_ids(std::size_t fold) const;
};

/// Seeded shuffle, then round-robin assignment. Throws InputError when
/// k < 2, k exceeds the dataset size or ids repeat.
FoldPlan split_folds(std::span<const Example> dataset, std::size_t k, std::uint64_t seed);

struct ClassifierRecord {
    std::string id;  // example id, for tracing back to golds
    std::string question;
    std::string context;
    std::string prediction;
    Label label = Label::Wrong;
};

struct CorrectorRecord {
    std::string id;
    std::string question;
    std::string context;
    std::string prediction;
    std::string target;
    WordSpan target_span;
    bool requires_modification = false;
};

Json to_json(const ClassifierRecord& r);
Json to_json(const CorrectorRecord& r);

/// Labels every (example, prediction) pair with the taxonomy. Throws
/// InputError listing prediction ids missing from the dataset.
std::vector<ClassifierRecord> annotate_fold_predictions(std::span<const PredictionRecord> predictions,
                                                        std::span<const Example> dataset,
                                                        const Thresholds& t,
                                                        const EmbeddingProvider& provider);

struct ClassifierDataset {
    std::vector<ClassifierRecord> records;
    LabelCounts input_counts;
    LabelCounts output_counts;
    std::vector<std::string> diagnostics;
};

/// Strict 1:1:1 balance by seeded downsampling to the smallest class. If any
/// class is empty the output is empty and diagnostics name the class.
ClassifierDataset build_classifier_dataset(std::span<const ClassifierRecord> records, std::uint64_t seed);

struct CorrectorDataset {
    std::vector<CorrectorRecord> records;
    std::size_t modify_candidates = 0;
    std::size_t keep_candidates = 0;
    std::size_t modify_kept = 0;
    std::size_t keep_kept = 0;
    std::size_t skipped_gold_not_in_context = 0;
    std::size_t skipped_prediction_not_in_context = 0;
    std::vector<std::string> diagnostics;
};

/// Modification examples come from partially correct records whose best gold
/// occurs in the context (target = first occurrence); no-modification
/// examples come from correct records (target = the prediction). Seeded
/// downsampling makes modify : keep exactly 2 : 1.
CorrectorDataset build_corrector_dataset(std::span<const ClassifierRecord> records,
                                         std::span<const Example> dataset, const Thresholds& t,
                                         const EmbeddingProvider& provider, std::uint64_t seed);

}  // namespace acc
