#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "acc/similarity.hpp"
#include "acc/taxonomy.hpp"

namespace acc {

/// 100 * part / whole rounded half-up to two decimals, as an integer count of
/// hundredths of a percent (3785 means 37.85%). Exact integer arithmetic.
std::int64_t percent_hundredths(std::size_t part, std::size_t whole);

/// "37.85" for 3785.
std::string format_percent(std::int64_t hundredths);

struct NamedRun {
    std::string name;
    std::vector<Label> labels;
};

struct DistributionRow {
    std::string name;
    LabelCounts counts;
};

std::vector<DistributionRow> distribution_report(std::span<const NamedRun> runs);

/// Rows: true label; columns: predicted label; both ordered wrong, partially, correct.
struct ConfusionMatrix3 {
    std::array<std::array<std::size_t, 3>, 3> counts{};

    std::size_t at(Label truth, Label predicted) const {
        return counts[static_cast<int>(truth)][static_cast<int>(predicted)];
    }
    std::size_t row_total(Label truth) const;
    /// Row percentage in hundredths (see percent_hundredths).
    std::int64_t row_percent(Label truth, Label predicted) const;
    double accuracy() const;
};

ConfusionMatrix3 classifier_confusion(std::span<const std::pair<Label, Label>> pairs);

/// Rows: correctness before correction; columns: after. Index 0 = incorrect, 1 = correct.
struct ChangeMatrix2 {
    std::array<std::array<std::size_t, 2>, 2> counts{};

    std::size_t at(bool correct_before, bool correct_after) const {
        return counts[correct_before ? 1 : 0][correct_after ? 1 : 0];
    }
    std::size_t total() const;
    /// Share of all items, in hundredths of a percent.
    std::int64_t percent(bool correct_before, bool correct_after) const;
};

/// Correctness is normalized exact membership in that item's golds. Throws
/// InputError unless the three lists have equal length.
ChangeMatrix2 corrector_change_matrix(std::span<const std::string> before,
                                      std::span<const std::string> after,
                                      std::span<const std::vector<std::string>> golds);

struct QualityItem {
    std::vector<std::string> before;
    std::vector<std::string> after;
    std::vector<std::string> golds;
};

struct QualityAverages {
    double wo = 0.0;
    double bs = 0.0;
    std::size_t count = 0;
    bool empty() const { return count == 0; }
};

struct QualityReport {
    QualityAverages before;
    QualityAverages after;
    double delta_wo() const { return after.wo - before.wo; }
    double delta_bs() const { return after.bs - before.bs; }
};

/// Averages each prediction's WO and BS against its best gold (the
/// taxonomy's choice) over all predictions, before and after.
QualityReport quality_report(std::span<const QualityItem> items, const Thresholds& t,
                             const EmbeddingProvider& provider);

// Human-readable aligned tables.
void print_distribution(std::ostream& out, std::span<const DistributionRow> rows);
void print_confusion(std::ostream& out, const ConfusionMatrix3& m, const std::string& title);
void print_changes(std::ostream& out, const ChangeMatrix2& m, const std::string& title);
void print_quality(std::ostream& out, const QualityReport& q);

// CSV renderings.
void write_distribution_csv(std::ostream& out, std::span<const DistributionRow> rows);
void write_confusion_csv(std::ostream& out, const ConfusionMatrix3& m);
void write_changes_csv(std::ostream& out, const ChangeMatrix2& m);
void write_quality_csv(std::ostream& out, const QualityReport& q);

}  // namespace acc
