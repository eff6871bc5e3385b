#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "acc/similarity.hpp"

namespace acc {

/// Ordered the way the analysis tables index them: wrong, partially, correct.
enum class Label { Wrong = 0, Partially = 1, Correct = 2 };

inline constexpr std::array<Label, 3> kAllLabels = {Label::Wrong, Label::Partially, Label::Correct};

/// Wire/file spelling: "wrong", "partially", "correct".
std::string_view to_string(Label label);
std::optional<Label> parse_label(std::string_view text);

/// Word Overlap floor (alpha) and BERTScore floor (beta).
struct Thresholds {
    double alpha = 0.25;
    double beta = 0.6;

    /// Throws InputError unless both lie in [0, 1].
    void validate() const;
};

struct LabeledPrediction {
    std::string prediction;
    Label label = Label::Wrong;
    std::optional<std::string> best_gold;
    double wo = 0.0;
    double bs = 0.0;
};

struct LabelCounts {
    std::size_t wrong = 0;
    std::size_t partially = 0;
    std::size_t correct = 0;

    std::size_t total() const { return wrong + partially + correct; }
    std::size_t& operator[](Label label);
    std::size_t operator[](Label label) const;
    friend bool operator==(const LabelCounts&, const LabelCounts&) = default;
};

/// Correct if the prediction equals some gold after normalization; otherwise
/// partially correct if some gold reaches both floors; otherwise wrong.
///
/// best_gold is the gold with the highest (WO, BS), ties broken by the
/// smaller normalized text, taken over qualifying golds (the matching gold for
/// Correct) or over all golds for Wrong. An exact match reports wo = bs = 1.
LabeledPrediction classify_prediction(std::string_view pred, std::span<const std::string> golds,
                                      const Thresholds& t, const EmbeddingProvider& provider);

struct AnnotatedSet {
    std::vector<LabeledPrediction> labeled;
    LabelCounts counts;
};

AnnotatedSet annotate_prediction_set(std::span<const std::string> preds,
                                     std::span<const std::string> golds, const Thresholds& t,
                                     const EmbeddingProvider& provider);

}  // namespace acc
