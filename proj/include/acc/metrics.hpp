#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace acc {

struct PRF {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Harmonic mean of p and r; 0 when p + r = 0.
double f1_score(double precision, double recall);

/// Per-question credit accumulator. Credits are fractional for PM.
struct MatchCounts {
    double pred_credit = 0.0;
    double gold_credit = 0.0;
    std::size_t n_preds = 0;
    std::size_t n_golds = 0;

    MatchCounts& operator+=(const MatchCounts& other);
};

/// Exact match over deduplicated normalized sets.
MatchCounts em_counts(std::span<const std::string> preds, std::span<const std::string> golds);

/// Partial match: each deduplicated prediction earns the best
/// longest-common-contiguous-word-run ratio against any gold (divided by its
/// own length), and symmetrically for golds. Normalized-equal pairs earn 1.
MatchCounts pm_counts(std::span<const std::string> preds, std::span<const std::string> golds);

/// Length of the longest common contiguous run of words.
std::size_t longest_common_run(std::span<const std::string> a, std::span<const std::string> b);

/// Question-level PRF. A question with neither predictions nor golds is a
/// perfect "no answer" match.
PRF question_prf(const MatchCounts& counts);

/// Sums credits and denominators over questions, then derives PRF. Empty
/// questions contribute one full-credit unit to every term.
PRF aggregate_micro(std::span<const MatchCounts> counts);

struct ScoreSummary {
    PRF em;
    PRF pm;
    std::size_t questions = 0;
};

}  // namespace acc
