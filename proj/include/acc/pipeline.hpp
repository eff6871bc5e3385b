#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "acc/backends.hpp"
#include "acc/example.hpp"
#include "acc/span_select.hpp"
#include "acc/taxonomy.hpp"

namespace acc {

enum class PipelineMode {
    Standard,      // classify, correct the partially correct, keep correct + corrected
    ClsOnly,       // classify, drop wrong
    CorOnly,       // correct everything, drop nothing
    CorThenCls,    // correct everything, then classify and drop wrong
    BinaryClsCor,  // classify as wrong / not wrong, correct everything not wrong
};

std::string_view to_string(PipelineMode mode);
std::optional<PipelineMode> parse_mode(std::string_view text);

/// Everything one example passed through. `labels` and `corrected` run
/// parallel to `predictions`; entries are empty where the step did not run.
/// In CorThenCls mode the labels belong to the corrected texts.
struct PipelineTrace {
    std::string id;
    PipelineMode mode = PipelineMode::Standard;
    std::vector<std::string> predictions;
    std::vector<std::optional<Label>> labels;
    std::vector<std::optional<std::string>> corrected;
    std::vector<std::string> p_c;
    std::vector<std::string> p_p;
    std::vector<std::string> p_w;
    std::vector<std::string> p_hat_p;
    std::vector<std::string> final;
    std::optional<std::string> error;
};

struct Partition {
    std::vector<LabeledPrediction> correct;
    std::vector<LabeledPrediction> partially;
    std::vector<LabeledPrediction> wrong;
};

/// Splits by label, keeping input order inside each part.
Partition partition(std::span<const LabeledPrediction> labeled);

/// Drops later entries whose normalized text repeats an earlier one.
std::vector<std::string> dedupe_normalized(std::span<const std::string> items);

/// Runs the reader, then classifier and corrector as `mode` dictates. Backend
/// failures (ProtocolError) are recorded in trace.error with an empty final set.
PipelineTrace run_pipeline(const Example& ex, Reader& reader, Classifier& classifier,
                           Corrector& corrector, PipelineMode mode);

struct BackendSet {
    std::unique_ptr<Reader> reader;
    std::unique_ptr<Classifier> classifier;
    std::unique_ptr<Corrector> corrector;
};

/// Called once per worker thread; must be safe to call concurrently.
using BackendFactory = std::function<BackendSet()>;

/// Runs every example on up to `workers` threads, each with its own backends.
/// Traces come back sorted by example id.
std::vector<PipelineTrace> run_pipeline_dataset(std::span<const Example> examples,
                                                const BackendFactory& factory, PipelineMode mode,
                                                std::size_t workers);

}  // namespace acc
