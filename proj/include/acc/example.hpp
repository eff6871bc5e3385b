#pragma once

#include <optional>
#include <string>
#include <vector>

#include "acc/norm.hpp"

namespace acc {

struct Gold {
    std::string text;
    std::optional<WordSpan> span;

    friend bool operator==(const Gold&, const Gold&) = default;
};

/// One question: (Q, C, A). Context is kept as its word sequence; the raw
/// context string is the words joined by single spaces.
struct Example {
    std::string id;
    std::string question;
    std::vector<std::string> context_words;
    std::vector<Gold> golds;

    std::string context_text() const { return join_words(context_words); }
    std::vector<std::string> gold_texts() const;

    friend bool operator==(const Example&, const Example&) = default;
};

/// One line of a predictions file.
struct PredictionRecord {
    std::string id;
    std::vector<std::string> predictions;

    friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

}  // namespace acc
