#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace acc {

/// Inclusive word-index range into a context.
struct WordSpan {
    std::size_t first = 0;
    std::size_t last = 0;

    std::size_t length() const { return last - first + 1; }
    friend auto operator<=>(const WordSpan&, const WordSpan&) = default;
};

/// Answer normalization used everywhere a string is compared: lowercase, drop
/// punctuation, drop the articles "a", "an", "the" as whole words, collapse
/// whitespace. Idempotent.
std::string normalize_answer(std::string_view text);

/// Whitespace split of the normalized text.
std::vector<std::string> word_tokenize(std::string_view text);

/// Whitespace split without any normalization. Uses the same whitespace
/// classes as normalize_answer.
std::vector<std::string> split_words(std::string_view text);

/// Joins words with single spaces.
std::string join_words(std::span<const std::string> words);
std::string join_words(std::span<const std::string> words, WordSpan span);

struct NormalizedText {
    std::string raw;
    std::string normalized;
    std::vector<std::string> words;

    explicit NormalizedText(std::string text);
};

/// Every placement of `span` inside `context_words`, compared word by word
/// after normalization. Context words that normalize to nothing (articles,
/// bare punctuation) are transparent: "Becky , Sloan" contains "becky sloan".
/// Results are ordered by start index; indices refer to the original words.
std::vector<WordSpan> find_span_occurrences(std::string_view span,
                                            std::span<const std::string> context_words);

}  // namespace acc
