#pragma once
// Shared example builders for the unit, integration and acceptance tests.

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "acc/dataio.hpp"
#include "acc/example.hpp"
#include "acc/norm.hpp"

namespace fixtures {

// Golds are located in the context by their first occurrence; a gold that
// does not occur gets no span.
inline acc::Example make_example(std::string id, std::string question, const std::string& context,
                                 const std::vector<std::string>& golds) {
    acc::Example ex;
    ex.id = std::move(id);
    ex.question = std::move(question);
    ex.context_words = acc::split_words(context);
    for (const auto& g : golds) {
        acc::Gold gold{g, std::nullopt};
        const auto occ = acc::find_span_occurrences(g, ex.context_words);
        if (!occ.empty()) {
            gold.span = occ.front();
            gold.text = acc::join_words(ex.context_words, occ.front());
        }
        ex.golds.push_back(gold);
    }
    return ex;
}

// The running example: two creators, one complete prediction, one fragment,
// one unrelated acronym.
inline acc::Example dhmis() {
    return make_example("dhmis1", "Who created Don't Hug Me I'm Scared?",
                        "Don't Hug Me I'm Scared ( DHMIS ) is a British surreal horror comedy web series "
                        "created by Becky Sloan and Joseph Pelling .",
                        {"Becky Sloan", "Joseph Pelling"});
}

inline std::vector<std::string> dhmis_predictions() { return {"Joseph Pelling", "Sloan", "DHMIS"}; }

struct SyntheticCorpus {
    std::vector<acc::Example> examples;
    std::vector<acc::PredictionRecord> predictions;
};

// Every question has 1-3 two-word name answers placed verbatim in filler
// text. Each gold is predicted either exactly or by its last name alone
// (partially correct); unrelated filler words are mixed in as wrong answers.
inline SyntheticCorpus synthetic_corpus(std::size_t n, std::uint32_t seed) {
    static const std::vector<std::string> first = {"Becky", "Joseph", "Maria", "Tomas", "Ingrid", "Kenji",
                                                   "Amara", "Lucas", "Priya", "Oskar", "Nadia", "Felix"};
    static const std::vector<std::string> filler = {"river", "quietly", "orange", "seventeen", "beneath",
                                                    "harbor", "glimmer", "parcel", "windmill", "ledger",
                                                    "copper", "meadow", "lantern", "violet", "quarry"};
    std::mt19937 gen(seed);
    auto pick = [&](std::size_t bound) { return static_cast<std::size_t>(gen() % bound); };
    SyntheticCorpus out;
    std::size_t surname_counter = 0;
    for (std::size_t q = 0; q < n; ++q) {
        const std::size_t n_golds = 1 + pick(3);
        std::vector<std::string> golds;
        for (std::size_t g = 0; g < n_golds; ++g) {
            golds.push_back(first[pick(first.size())] + " Surname" + std::to_string(surname_counter++) + "x");
        }
        std::string context;
        for (std::size_t w = 0; w < 4 + pick(6); ++w) {
            context += filler[pick(filler.size())] + " ";
        }
        for (const auto& g : golds) {
            context += g + " and " + filler[pick(filler.size())] + " ";
        }
        context += ".";
        const std::string id = "q" + std::to_string(1000 + q);
        auto ex = make_example(id, "Who is mentioned in passage " + std::to_string(q) + "?", context, golds);

        acc::PredictionRecord rec{id, {}};
        for (const auto& g : golds) {
            if (pick(2) == 0) {
                rec.predictions.push_back(g);
            } else {
                rec.predictions.push_back(acc::split_words(g).back());
            }
        }
        const std::size_t n_wrong = pick(3);
        const std::size_t offset = pick(filler.size());
        for (std::size_t w = 0; w < n_wrong; ++w) {
            rec.predictions.push_back("zz" + filler[(offset + w) % filler.size()]);
        }
        out.examples.push_back(std::move(ex));
        out.predictions.push_back(std::move(rec));
    }
    return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path);
    f << text;
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream f(path);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

// Fresh scratch directory under the build tree, removed first if it exists.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("acc-test-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_dataset_file(const std::filesystem::path& path, const std::vector<acc::Example>& examples) {
    acc::DatasetFile ds;
    ds.header.name = "fixture";
    ds.examples = examples;
    std::filesystem::create_directories(path.parent_path());
    acc::write_dataset(path, ds);
}

inline void write_predictions_file(const std::filesystem::path& path,
                                   const std::vector<acc::PredictionRecord>& records) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path);
    acc::write_predictions(f, records);
}

}  // namespace fixtures
