#include "acc/span_select.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "acc/error.hpp"

namespace acc {

ScoredSpan select_best_span(const SpanScores& scores, std::size_t max_span_words) {
    if (max_span_words == 0) {
        throw std::invalid_argument("max_span_words must be at least 1");
    }
    const std::size_t n = scores.st.size();
    if (n == 0 || scores.ed.size() != n) {
        throw ProtocolError("span scores must be non-empty arrays of equal length");
    }
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(scores.st.begin(), scores.st.end(), finite) ||
        !std::all_of(scores.ed.begin(), scores.ed.end(), finite)) {
        throw ProtocolError("span scores must be finite");
    }

    ScoredSpan best{{0, 0}, scores.st[0] + scores.ed[0]};
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j_end = std::min(n, i + max_span_words);
        for (std::size_t j = i; j < j_end; ++j) {
            const double s = scores.st[i] + scores.ed[j];
            if (s > best.score) {
                best = {{i, j}, s};
            }
        }
    }
    return best;
}

}  // namespace acc
