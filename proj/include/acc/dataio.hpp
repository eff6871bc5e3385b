#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "acc/example.hpp"
#include "acc/taxonomy.hpp"

namespace acc {

inline constexpr int kFormatVersion = 1;

struct DatasetHeader {
    int format = kFormatVersion;
    std::string name;
    Thresholds thresholds;

    friend bool operator==(const DatasetHeader& a, const DatasetHeader& b) {
        return a.format == b.format && a.name == b.name &&
               a.thresholds.alpha == b.thresholds.alpha && a.thresholds.beta == b.thresholds.beta;
    }
};

/// Canonical newline-delimited dataset: a version header line followed by one
/// example per line.
struct DatasetFile {
    DatasetHeader header;
    std::vector<Example> examples;

    friend bool operator==(const DatasetFile&, const DatasetFile&) = default;
};

DatasetFile read_dataset(std::istream& in, const std::string& source = "<stream>");
DatasetFile read_dataset(const std::filesystem::path& path);
void write_dataset(std::ostream& out, const DatasetFile& dataset);
void write_dataset(const std::filesystem::path& path, const DatasetFile& dataset);

struct BioImport {
    DatasetFile dataset;
    std::vector<std::string> warnings;
};

/// Reads token-level BIO annotations. Accepts newline-delimited records
/// {"id", "question", "context": [tokens], "label": [tags]} or a single
/// document {"data": [records...]}. Questions may be a string or a token list.
/// An I with no open span is treated as B and reported in warnings.
BioImport import_bio(std::istream& in, const std::string& name = "imported");

/// Decodes one tag sequence into gold spans. Throws InputError on a symbol
/// outside {B, I, O}; `repaired` counts orphan I tags.
std::vector<WordSpan> decode_bio(const std::vector<std::string>& tags, std::size_t& repaired);

/// Inverse of decode_bio for non-overlapping spans.
std::vector<std::string> encode_bio(std::size_t n_words, const std::vector<Gold>& golds);

struct DatasetDiagnostics {
    std::vector<std::string> issues;
    std::size_t n_examples = 0;
    std::size_t multi_answer = 0;
    std::size_t single_answer = 0;
    std::size_t no_answer = 0;
    double avg_answers = 0.0;
    double avg_context_words = 0.0;

    double share(std::size_t n) const {
        return n_examples > 0 ? static_cast<double>(n) / static_cast<double>(n_examples) : 0.0;
    }
};

DatasetDiagnostics validate_dataset(const DatasetFile& dataset);

// Predictions files: {"id": ..., "predictions": [...]} per line.
std::vector<PredictionRecord> read_predictions(std::istream& in, const std::string& source = "<stream>");
std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path);
void write_predictions(std::ostream& out, const std::vector<PredictionRecord>& records);

/// Index by id; throws InputError on duplicate ids.
std::map<std::string, std::vector<std::string>> index_predictions(
    const std::vector<PredictionRecord>& records);

/// Throws InputError listing every id present in `records` but not in `dataset`.
void require_known_ids(const DatasetFile& dataset, const std::vector<PredictionRecord>& records);

}  // namespace acc
