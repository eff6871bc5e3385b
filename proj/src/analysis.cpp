#include "acc/analysis.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>

#include "acc/error.hpp"
#include "acc/norm.hpp"

namespace acc {

std::int64_t percent_hundredths(std::size_t part, std::size_t whole) {
    if (whole == 0) {
        return 0;
    }
    // round(part * 10000 / whole) with halves going up.
    const auto p = static_cast<std::int64_t>(part);
    const auto w = static_cast<std::int64_t>(whole);
    return (2 * p * 10000 + w) / (2 * w);
}

std::string format_percent(std::int64_t hundredths) {
    std::ostringstream s;
    s << hundredths / 100 << '.' << std::setw(2) << std::setfill('0') << hundredths % 100;
    return s.str();
}

std::vector<DistributionRow> distribution_report(std::span<const NamedRun> runs) {
    std::vector<DistributionRow> out;
    out.reserve(runs.size());
    for (const auto& run : runs) {
        DistributionRow row{run.name, {}};
        for (const Label l : run.labels) {
            ++row.counts[l];
        }
        out.push_back(std::move(row));
    }
    return out;
}

std::size_t ConfusionMatrix3::row_total(Label truth) const {
    const auto& row = counts[static_cast<int>(truth)];
    return row[0] + row[1] + row[2];
}

std::int64_t ConfusionMatrix3::row_percent(Label truth, Label predicted) const {
    return percent_hundredths(at(truth, predicted), row_total(truth));
}

double ConfusionMatrix3::accuracy() const {
    std::size_t total = 0;
    std::size_t diag = 0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            total += counts[i][j];
        }
        diag += counts[i][i];
    }
    return total > 0 ? static_cast<double>(diag) / static_cast<double>(total) : 0.0;
}

ConfusionMatrix3 classifier_confusion(std::span<const std::pair<Label, Label>> pairs) {
    ConfusionMatrix3 m;
    for (const auto& [truth, predicted] : pairs) {
        ++m.counts[static_cast<int>(truth)][static_cast<int>(predicted)];
    }
    return m;
}

std::size_t ChangeMatrix2::total() const {
    return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
}

std::int64_t ChangeMatrix2::percent(bool correct_before, bool correct_after) const {
    return percent_hundredths(at(correct_before, correct_after), total());
}

namespace {

bool is_member(const std::string& pred, const std::vector<std::string>& golds) {
    const auto n = normalize_answer(pred);
    for (const auto& g : golds) {
        if (normalize_answer(g) == n) {
            return true;
        }
    }
    return false;
}

}  // namespace

ChangeMatrix2 corrector_change_matrix(std::span<const std::string> before,
                                      std::span<const std::string> after,
                                      std::span<const std::vector<std::string>> golds) {
    if (before.size() != after.size() || before.size() != golds.size()) {
        throw InputError("change matrix inputs differ in length: " + std::to_string(before.size()) +
                         " before, " + std::to_string(after.size()) + " after, " +
                         std::to_string(golds.size()) + " gold sets");
    }
    ChangeMatrix2 m;
    for (std::size_t i = 0; i < before.size(); ++i) {
        const int b = is_member(before[i], golds[i]) ? 1 : 0;
        const int a = is_member(after[i], golds[i]) ? 1 : 0;
        ++m.counts[b][a];
    }
    return m;
}

QualityReport quality_report(std::span<const QualityItem> items, const Thresholds& t,
                             const EmbeddingProvider& provider) {
    QualityReport q;
    auto accumulate = [&](QualityAverages& acc, const std::vector<std::string>& preds,
                          const std::vector<std::string>& golds) {
        for (const auto& p : preds) {
            const auto lp = classify_prediction(p, golds, t, provider);
            acc.wo += lp.wo;
            acc.bs += lp.bs;
            ++acc.count;
        }
    };
    for (const auto& item : items) {
        accumulate(q.before, item.before, item.golds);
        accumulate(q.after, item.after, item.golds);
    }
    for (QualityAverages* a : {&q.before, &q.after}) {
        if (a->count > 0) {
            a->wo /= static_cast<double>(a->count);
            a->bs /= static_cast<double>(a->count);
        }
    }
    return q;
}

namespace {

std::string cell(std::size_t count, std::int64_t hundredths) {
    return std::to_string(count) + " (" + format_percent(hundredths) + "%)";
}

}  // namespace

void print_distribution(std::ostream& out, std::span<const DistributionRow> rows) {
    out << std::left << std::setw(20) << "model" << std::right << std::setw(10) << "correct"
        << std::setw(12) << "partially" << std::setw(10) << "wrong" << std::setw(10) << "total" << '\n';
    for (const auto& r : rows) {
        out << std::left << std::setw(20) << r.name << std::right << std::setw(10) << r.counts.correct
            << std::setw(12) << r.counts.partially << std::setw(10) << r.counts.wrong << std::setw(10)
            << r.counts.total() << '\n';
    }
}

void print_confusion(std::ostream& out, const ConfusionMatrix3& m, const std::string& title) {
    out << title << '\n';
    out << std::left << std::setw(14) << "label \\ pred";
    for (const Label p : kAllLabels) {
        out << std::right << std::setw(18) << to_string(p);
    }
    out << '\n';
    for (const Label t : kAllLabels) {
        out << std::left << std::setw(14) << to_string(t);
        for (const Label p : kAllLabels) {
            out << std::right << std::setw(18) << cell(m.at(t, p), m.row_percent(t, p));
        }
        out << '\n';
    }
}

void print_changes(std::ostream& out, const ChangeMatrix2& m, const std::string& title) {
    out << title << '\n';
    out << std::left << std::setw(14) << "before \\ after" << std::right << std::setw(18)
        << "incorrect" << std::setw(18) << "correct" << '\n';
    for (const bool b : {false, true}) {
        out << std::left << std::setw(14) << (b ? "correct" : "incorrect");
        for (const bool a : {false, true}) {
            out << std::right << std::setw(18) << cell(m.at(b, a), m.percent(b, a));
        }
        out << '\n';
    }
}

void print_quality(std::ostream& out, const QualityReport& q) {
    out << std::fixed << std::setprecision(4);
    out << std::left << std::setw(10) << "" << std::right << std::setw(10) << "avg WO" << std::setw(10)
        << "avg BS" << std::setw(8) << "n" << '\n';
    out << std::left << std::setw(10) << "before" << std::right << std::setw(10) << q.before.wo
        << std::setw(10) << q.before.bs << std::setw(8) << q.before.count << '\n';
    out << std::left << std::setw(10) << "after" << std::right << std::setw(10) << q.after.wo
        << std::setw(10) << q.after.bs << std::setw(8) << q.after.count << '\n';
    out << std::left << std::setw(10) << "delta" << std::right << std::setw(10) << q.delta_wo()
        << std::setw(10) << q.delta_bs() << '\n';
    out.unsetf(std::ios::fixed);
    out << std::setprecision(6);
}

void write_distribution_csv(std::ostream& out, std::span<const DistributionRow> rows) {
    out << "model,correct,partially,wrong,total\n";
    for (const auto& r : rows) {
        out << r.name << ',' << r.counts.correct << ',' << r.counts.partially << ',' << r.counts.wrong
            << ',' << r.counts.total() << '\n';
    }
}

void write_confusion_csv(std::ostream& out, const ConfusionMatrix3& m) {
    out << "label,pred,count,row_percent\n";
    for (const Label t : kAllLabels) {
        for (const Label p : kAllLabels) {
            out << to_string(t) << ',' << to_string(p) << ',' << m.at(t, p) << ','
                << format_percent(m.row_percent(t, p)) << '\n';
        }
    }
}

void write_changes_csv(std::ostream& out, const ChangeMatrix2& m) {
    out << "before,after,count,percent\n";
    for (const bool b : {false, true}) {
        for (const bool a : {false, true}) {
            out << (b ? "correct" : "incorrect") << ',' << (a ? "correct" : "incorrect") << ','
                << m.at(b, a) << ',' << format_percent(m.percent(b, a)) << '\n';
        }
    }
}

void write_quality_csv(std::ostream& out, const QualityReport& q) {
    std::ostringstream s;
    s << std::setprecision(10);
    s << "stage,avg_wo,avg_bs,count\n";
    s << "before," << q.before.wo << ',' << q.before.bs << ',' << q.before.count << '\n';
    s << "after," << q.after.wo << ',' << q.after.bs << ',' << q.after.count << '\n';
    s << "delta," << q.delta_wo() << ',' << q.delta_bs() << ",\n";
    out << s.str();
}

}  // namespace acc
