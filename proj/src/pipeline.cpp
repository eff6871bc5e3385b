#include "acc/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "acc/error.hpp"
#include "acc/norm.hpp"

namespace acc {

std::string_view to_string(PipelineMode mode) {
    switch (mode) {
        case PipelineMode::Standard:
            return "standard";
        case PipelineMode::ClsOnly:
            return "cls-only";
        case PipelineMode::CorOnly:
            return "cor-only";
        case PipelineMode::CorThenCls:
            return "cor-then-cls";
        case PipelineMode::BinaryClsCor:
            return "binary-cls-cor";
    }
    return "standard";
}

std::optional<PipelineMode> parse_mode(std::string_view text) {
    for (const auto m : {PipelineMode::Standard, PipelineMode::ClsOnly, PipelineMode::CorOnly,
                         PipelineMode::CorThenCls, PipelineMode::BinaryClsCor}) {
        if (text == to_string(m)) {
            return m;
        }
    }
    return std::nullopt;
}

Partition partition(std::span<const LabeledPrediction> labeled) {
    Partition out;
    for (const auto& lp : labeled) {
        switch (lp.label) {
            case Label::Correct:
                out.correct.push_back(lp);
                break;
            case Label::Partially:
                out.partially.push_back(lp);
                break;
            case Label::Wrong:
                out.wrong.push_back(lp);
                break;
        }
    }
    return out;
}

std::vector<std::string> dedupe_normalized(std::span<const std::string> items) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& item : items) {
        if (seen.insert(normalize_answer(item)).second) {
            out.push_back(item);
        }
    }
    return out;
}

namespace {

void bucket(PipelineTrace& trace, Label label, const std::string& text) {
    switch (label) {
        case Label::Correct:
            trace.p_c.push_back(text);
            break;
        case Label::Partially:
            trace.p_p.push_back(text);
            break;
        case Label::Wrong:
            trace.p_w.push_back(text);
            break;
    }
}

void run_steps(PipelineTrace& trace, const Example& ex, Classifier& classifier,
               Corrector& corrector) {
    const auto& preds = trace.predictions;
    const std::size_t n = preds.size();
    trace.labels.assign(n, std::nullopt);
    trace.corrected.assign(n, std::nullopt);

    auto classify_all = [&](const std::vector<std::string>& texts) {
        for (std::size_t i = 0; i < n; ++i) {
            const Label label = classifier.classify(ex, texts[i]);
            trace.labels[i] = label;
            bucket(trace, label, texts[i]);
        }
    };
    auto correct_where = [&](auto&& pick) {
        for (std::size_t i = 0; i < n; ++i) {
            if (pick(i)) {
                trace.corrected[i] = corrector.correct(ex, preds[i]);
                trace.p_hat_p.push_back(*trace.corrected[i]);
            }
        }
    };

    std::vector<std::string> kept;
    switch (trace.mode) {
        case PipelineMode::Standard:
            classify_all(preds);
            correct_where([&](std::size_t i) { return trace.labels[i] == Label::Partially; });
            // P_c and the corrected P_p, in reader order.
            for (std::size_t i = 0; i < n; ++i) {
                if (trace.labels[i] == Label::Correct) {
                    kept.push_back(preds[i]);
                } else if (trace.corrected[i]) {
                    kept.push_back(*trace.corrected[i]);
                }
            }
            break;
        case PipelineMode::ClsOnly:
            classify_all(preds);
            for (std::size_t i = 0; i < n; ++i) {
                if (trace.labels[i] != Label::Wrong) {
                    kept.push_back(preds[i]);
                }
            }
            break;
        case PipelineMode::CorOnly:
            correct_where([](std::size_t) { return true; });
            kept = trace.p_hat_p;
            break;
        case PipelineMode::CorThenCls: {
            correct_where([](std::size_t) { return true; });
            std::vector<std::string> texts;
            for (const auto& c : trace.corrected) {
                texts.push_back(*c);
            }
            classify_all(texts);
            for (std::size_t i = 0; i < n; ++i) {
                if (trace.labels[i] != Label::Wrong) {
                    kept.push_back(texts[i]);
                }
            }
            break;
        }
        case PipelineMode::BinaryClsCor:
            classify_all(preds);
            correct_where([&](std::size_t i) { return trace.labels[i] != Label::Wrong; });
            kept = trace.p_hat_p;
            break;
    }
    trace.final = dedupe_normalized(kept);
}

}  // namespace

PipelineTrace run_pipeline(const Example& ex, Reader& reader, Classifier& classifier,
                           Corrector& corrector, PipelineMode mode) {
    PipelineTrace trace;
    trace.id = ex.id;
    trace.mode = mode;
    try {
        trace.predictions = reader.read(ex);
        run_steps(trace, ex, classifier, corrector);
    } catch (const ProtocolError& e) {
        trace.error = e.what();
        trace.final.clear();
    }
    return trace;
}

std::vector<PipelineTrace> run_pipeline_dataset(std::span<const Example> examples,
                                                const BackendFactory& factory, PipelineMode mode,
                                                std::size_t workers) {
    std::vector<PipelineTrace> traces(examples.size());
    workers = std::max<std::size_t>(1, std::min(workers, examples.size()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;

    auto work = [&] {
        try {
            BackendSet backends = factory();
            for (std::size_t i = next++; i < examples.size(); i = next++) {
                traces[i] = run_pipeline(examples[i], *backends.reader, *backends.classifier,
                                         *backends.corrector, mode);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mu);
            if (!failure) {
                failure = std::current_exception();
            }
            next = examples.size();
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    std::stable_sort(traces.begin(), traces.end(),
                     [](const PipelineTrace& a, const PipelineTrace& b) { return a.id < b.id; });
    return traces;
}

}  // namespace acc
