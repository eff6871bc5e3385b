#include "acc/dataio.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "acc/error.hpp"
#include "acc/jsonl.hpp"

namespace acc {

std::vector<std::string> Example::gold_texts() const {
    std::vector<std::string> out;
    out.reserve(golds.size());
    for (const auto& g : golds) {
        out.push_back(g.text);
    }
    return out;
}

namespace {

std::vector<std::string> string_list(const Json& v, const char* key) {
    if (!v.is_array()) {
        throw InputError(std::string("field \"") + key + "\" must be a list of strings");
    }
    std::vector<std::string> out;
    out.reserve(v.size());
    for (const auto& item : v) {
        if (!item.is_string()) {
            throw InputError(std::string("field \"") + key + "\" must be a list of strings");
        }
        out.push_back(item.get<std::string>());
    }
    return out;
}

Json example_to_json(const Example& ex) {
    Json golds = Json::array();
    for (const auto& g : ex.golds) {
        Json gj = {{"text", g.text}};
        gj["span"] = g.span ? Json::array({g.span->first, g.span->last}) : Json(nullptr);
        golds.push_back(std::move(gj));
    }
    return {{"id", ex.id},
            {"question", ex.question},
            {"context_words", ex.context_words},
            {"golds", std::move(golds)}};
}

Example example_from_json(const Json& j) {
    Example ex;
    ex.id = require_string(j, "id");
    ex.question = require_string(j, "question");
    ex.context_words = string_list(require_field(j, "context_words"), "context_words");
    const Json& golds = require_field(j, "golds");
    if (!golds.is_array()) {
        throw InputError("field \"golds\" must be a list");
    }
    for (const auto& g : golds) {
        Gold gold;
        gold.text = require_string(g, "text");
        const auto it = g.find("span");
        if (it != g.end() && !it->is_null()) {
            if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number_unsigned() ||
                !(*it)[1].is_number_unsigned()) {
                throw InputError("gold span must be [first, last] word indices");
            }
            gold.span = WordSpan{(*it)[0].get<std::size_t>(), (*it)[1].get<std::size_t>()};
        }
        ex.golds.push_back(std::move(gold));
    }
    return ex;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open " + path.string());
    }
    return in;
}

}  // namespace

DatasetFile read_dataset(std::istream& in, const std::string& source) {
    DatasetFile out;
    bool have_header = false;
    for_each_json_line(in, source, [&](const Json& j, std::size_t) {
        if (!have_header) {
            const auto it = j.find("acc_format");
            if (!j.is_object() || it == j.end()) {
                throw InputError("missing {\"acc_format\": 1, ...} header line");
            }
            if (!it->is_number_integer() || it->get<int>() != kFormatVersion) {
                throw InputError("unsupported acc_format version");
            }
            out.header.name = j.value("name", "");
            out.header.thresholds.alpha = j.value("alpha", Thresholds{}.alpha);
            out.header.thresholds.beta = j.value("beta", Thresholds{}.beta);
            have_header = true;
            return;
        }
        out.examples.push_back(example_from_json(j));
    });
    if (!have_header) {
        throw InputError(source + ": empty dataset file (no header line)");
    }
    return out;
}

DatasetFile read_dataset(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_dataset(in, path.string());
}

void write_dataset(std::ostream& out, const DatasetFile& dataset) {
    write_json_line(out, {{"acc_format", dataset.header.format},
                          {"name", dataset.header.name},
                          {"alpha", dataset.header.thresholds.alpha},
                          {"beta", dataset.header.thresholds.beta}});
    for (const auto& ex : dataset.examples) {
        write_json_line(out, example_to_json(ex));
    }
}

void write_dataset(const std::filesystem::path& path, const DatasetFile& dataset) {
    std::ofstream out(path);
    if (!out) {
        throw InputError("cannot write " + path.string());
    }
    write_dataset(out, dataset);
}

std::vector<WordSpan> decode_bio(const std::vector<std::string>& tags, std::size_t& repaired) {
    std::vector<WordSpan> spans;
    bool open = false;
    for (std::size_t i = 0; i < tags.size(); ++i) {
        const auto& tag = tags[i];
        if (tag == "B" || (tag == "I" && !open)) {
            if (tag == "I") {
                ++repaired;
            }
            spans.push_back({i, i});
            open = true;
        } else if (tag == "I") {
            spans.back().last = i;
        } else if (tag == "O") {
            open = false;
        } else {
            throw InputError("unknown tag '" + tag + "' at token " + std::to_string(i));
        }
    }
    return spans;
}

std::vector<std::string> encode_bio(std::size_t n_words, const std::vector<Gold>& golds) {
    std::vector<std::string> tags(n_words, "O");
    for (const auto& g : golds) {
        if (!g.span || g.span->last >= n_words || g.span->first > g.span->last) {
            throw InputError("gold \"" + g.text + "\" has no valid span to encode");
        }
        tags[g.span->first] = "B";
        for (std::size_t i = g.span->first + 1; i <= g.span->last; ++i) {
            tags[i] = "I";
        }
    }
    return tags;
}

namespace {

Example example_from_bio(const Json& j, std::size_t& repaired) {
    Example ex;
    ex.id = require_string(j, "id");
    const Json& q = require_field(j, "question");
    ex.question = q.is_string() ? q.get<std::string>() : join_words(string_list(q, "question"));
    ex.context_words = string_list(require_field(j, "context"), "context");
    const auto tags = string_list(require_field(j, "label"), "label");
    if (tags.size() != ex.context_words.size()) {
        throw InputError("label has " + std::to_string(tags.size()) + " tags for " +
                         std::to_string(ex.context_words.size()) + " context tokens");
    }
    for (const auto& span : decode_bio(tags, repaired)) {
        ex.golds.push_back({join_words(ex.context_words, span), span});
    }
    return ex;
}

}  // namespace

BioImport import_bio(std::istream& in, const std::string& name) {
    BioImport out;
    out.dataset.header.name = name;
    const std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    auto take = [&](const Json& record, const std::string& where) {
        std::size_t repaired = 0;
        out.dataset.examples.push_back(example_from_bio(record, repaired));
        if (repaired > 0) {
            out.warnings.push_back(where + ": repaired " + std::to_string(repaired) +
                                   " orphan I tag(s) in " + out.dataset.examples.back().id);
        }
    };

    // A whole-document {"data": [...]} file, as MultiSpanQA distributes it.
    const Json whole = Json::parse(content, nullptr, false);
    if (!whole.is_discarded() && whole.is_object() && whole.contains("data")) {
        const Json& data = whole["data"];
        if (!data.is_array()) {
            throw InputError(name + ": \"data\" must be a list");
        }
        for (std::size_t i = 0; i < data.size(); ++i) {
            const std::string where = name + ": record " + std::to_string(i + 1);
            try {
                take(data[i], where);
            } catch (const InputError& e) {
                throw InputError(where + ": " + e.what());
            }
        }
        return out;
    }

    std::istringstream lines(content);
    for_each_json_line(lines, name, [&](const Json& j, std::size_t line_no) {
        take(j, name + ":" + std::to_string(line_no));
    });
    return out;
}

DatasetDiagnostics validate_dataset(const DatasetFile& dataset) {
    DatasetDiagnostics d;
    d.n_examples = dataset.examples.size();
    std::set<std::string> seen;
    std::size_t answers = 0;
    std::size_t context_words = 0;
    for (const auto& ex : dataset.examples) {
        if (!seen.insert(ex.id).second) {
            d.issues.push_back("duplicate id: " + ex.id);
        }
        if (ex.context_words.empty()) {
            d.issues.push_back("empty context: " + ex.id);
        }
        for (const auto& g : ex.golds) {
            if (!g.span) {
                continue;
            }
            if (g.span->first > g.span->last || g.span->last >= ex.context_words.size()) {
                d.issues.push_back("gold span out of range: " + ex.id + " \"" + g.text + "\"");
            } else if (normalize_answer(join_words(ex.context_words, *g.span)) !=
                       normalize_answer(g.text)) {
                d.issues.push_back("gold span does not match its text: " + ex.id + " \"" +
                                   g.text + "\"");
            }
        }
        const std::size_t n = ex.golds.size();
        answers += n;
        context_words += ex.context_words.size();
        if (n >= 2) {
            ++d.multi_answer;
        } else if (n == 1) {
            ++d.single_answer;
        } else {
            ++d.no_answer;
        }
    }
    if (d.n_examples > 0) {
        d.avg_answers = static_cast<double>(answers) / static_cast<double>(d.n_examples);
        d.avg_context_words = static_cast<double>(context_words) / static_cast<double>(d.n_examples);
    }
    return d;
}

std::vector<PredictionRecord> read_predictions(std::istream& in, const std::string& source) {
    std::vector<PredictionRecord> out;
    for_each_json_line(in, source, [&](const Json& j, std::size_t) {
        PredictionRecord r;
        r.id = require_string(j, "id");
        r.predictions = string_list(require_field(j, "predictions"), "predictions");
        out.push_back(std::move(r));
    });
    return out;
}

std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_predictions(in, path.string());
}

void write_predictions(std::ostream& out, const std::vector<PredictionRecord>& records) {
    for (const auto& r : records) {
        write_json_line(out, {{"id", r.id}, {"predictions", r.predictions}});
    }
}

std::map<std::string, std::vector<std::string>> index_predictions(
    const std::vector<PredictionRecord>& records) {
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& r : records) {
        if (!out.emplace(r.id, r.predictions).second) {
            throw InputError("duplicate prediction id: " + r.id);
        }
    }
    return out;
}

void require_known_ids(const DatasetFile& dataset, const std::vector<PredictionRecord>& records) {
    std::set<std::string> known;
    for (const auto& ex : dataset.examples) {
        known.insert(ex.id);
    }
    std::string missing;
    for (const auto& r : records) {
        if (!known.count(r.id)) {
            missing += (missing.empty() ? "" : ", ") + r.id;
        }
    }
    if (!missing.empty()) {
        throw InputError("prediction ids not in dataset: " + missing);
    }
}

}  // namespace acc
