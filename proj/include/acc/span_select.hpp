#pragma once

#include <cstddef>
#include <vector>

#include "acc/norm.hpp"

namespace acc {

inline constexpr std::size_t kDefaultMaxSpanWords = 30;

/// Per-word start and end scores emitted by a pointer-style corrector.
struct SpanScores {
    std::vector<double> st;
    std::vector<double> ed;
};

struct ScoredSpan {
    WordSpan span;
    double score = 0.0;
};

/// argmax over i <= j, j - i + 1 <= max_span_words of st[i] + ed[j]. Ties go
/// to the smaller i, then the smaller j. Throws ProtocolError when the arrays
/// are empty, differ in length or hold non-finite values.
ScoredSpan select_best_span(const SpanScores& scores, std::size_t max_span_words = kDefaultMaxSpanWords);

}  // namespace acc
