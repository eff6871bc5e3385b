#include "acc/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "acc/analysis.hpp"
#include "acc/backends.hpp"
#include "acc/dataio.hpp"
#include "acc/error.hpp"
#include "acc/jsonl.hpp"
#include "acc/metrics.hpp"
#include "acc/pipeline.hpp"
#include "acc/silverlabel.hpp"

namespace fs = std::filesystem;

namespace acc::cli {
namespace {

struct RunConfig {
    std::string dataset;
    std::vector<std::string> predictions;
    std::string reader_cmd;
    std::string classifier_cmd;
    std::string corrector_cmd;
    std::string embedder_cmd;
    Thresholds thresholds;
    std::string mode = "standard";
    std::size_t k = kDefaultFolds;
    std::uint64_t seed = 0;
    std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    std::string out = "acc-out";
    double max_failure_rate = 0.0;
    std::size_t max_span_words = kDefaultMaxSpanWords;

    // import / report / silver specifics
    std::string bio;
    std::string name = "imported";
    std::string final_predictions;
    std::string trace;
    std::vector<std::string> runs;
    std::string pairs;
    std::string changes;
    std::string phase = "split";
};

class Context {
public:
    Context(const RunConfig& cfg, std::ostream& out, std::ostream& err) : cfg(cfg), out(out), err(err) {}

    const EmbeddingProvider& provider() {
        if (cfg.embedder_cmd.empty()) {
            return default_embedder();
        }
        if (!remote_) {
            remote_ = std::make_unique<RemoteEmbeddingProvider>(open_transport(cfg.embedder_cmd));
        }
        return *remote_;
    }

    fs::path out_dir() {
        fs::create_directories(cfg.out);
        return cfg.out;
    }

    const RunConfig& cfg;
    std::ostream& out;
    std::ostream& err;

private:
    std::unique_ptr<RemoteEmbeddingProvider> remote_;
};

std::ofstream open_output(const fs::path& path) {
    std::ofstream f(path);
    if (!f) {
        throw InputError("cannot write " + path.string());
    }
    return f;
}

Json prf_json(const PRF& p) {
    return {{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
}

Json header_json(const RunConfig& cfg, const std::string& command) {
    return {{"tool", "acc"},
            {"command", command},
            {"seed", cfg.seed},
            {"alpha", cfg.thresholds.alpha},
            {"beta", cfg.thresholds.beta}};
}

void print_prf_rows(std::ostream& out, const PRF& em, const PRF& pm, const std::string& prefix = "") {
    std::ostringstream s;
    s << std::fixed << std::setprecision(6);
    s << prefix << "em," << em.precision << ',' << em.recall << ',' << em.f1 << '\n';
    s << prefix << "pm," << pm.precision << ',' << pm.recall << ',' << pm.f1 << '\n';
    out << s.str();
}

struct Scores {
    PRF em;
    PRF pm;
};

/// EM and PM over the dataset; examples without a record count as empty predictions.
Scores score_predictions(const DatasetFile& ds, const std::map<std::string, std::vector<std::string>>& preds) {
    std::vector<MatchCounts> em;
    std::vector<MatchCounts> pm;
    for (const auto& ex : ds.examples) {
        const auto it = preds.find(ex.id);
        const std::vector<std::string> empty;
        const auto& p = it != preds.end() ? it->second : empty;
        const auto golds = ex.gold_texts();
        em.push_back(em_counts(p, golds));
        pm.push_back(pm_counts(p, golds));
    }
    return {aggregate_micro(em), aggregate_micro(pm)};
}

std::vector<PredictionRecord> load_predictions_for(const DatasetFile& ds, const std::string& path) {
    auto records = read_predictions(fs::path(path));
    require_known_ids(ds, records);
    return records;
}

// ---------------------------------------------------------------------------

int cmd_import(Context& c) {
    if (c.cfg.bio.empty()) {
        throw InputError("import needs --bio FILE");
    }
    std::ifstream in(c.cfg.bio);
    if (!in) {
        throw InputError("cannot open " + c.cfg.bio);
    }
    auto result = import_bio(in, c.cfg.name);
    result.dataset.header.thresholds = c.cfg.thresholds;
    for (const auto& w : result.warnings) {
        c.err << "warning: " << w << '\n';
    }
    const fs::path target = c.cfg.out;
    if (target.has_parent_path()) {
        fs::create_directories(target.parent_path());
    }
    write_dataset(target, result.dataset);
    c.out << "imported " << result.dataset.examples.size() << " examples to " << target.string() << '\n';
    return kExitOk;
}

int cmd_validate(Context& c) {
    const auto ds = read_dataset(fs::path(c.cfg.dataset));
    const auto d = validate_dataset(ds);
    for (const auto& issue : d.issues) {
        c.out << "issue: " << issue << '\n';
    }
    std::ostringstream s;
    s << std::fixed << std::setprecision(4);
    s << "examples," << d.n_examples << '\n'
      << "answers>=2," << d.share(d.multi_answer) << '\n'
      << "answers=1," << d.share(d.single_answer) << '\n'
      << "answers=0," << d.share(d.no_answer) << '\n'
      << "avg_answers," << d.avg_answers << '\n'
      << "avg_context_words," << d.avg_context_words << '\n';
    c.out << s.str();
    return d.issues.empty() ? kExitOk : kExitInput;
}

int cmd_annotate(Context& c) {
    const auto ds = read_dataset(fs::path(c.cfg.dataset));
    if (c.cfg.predictions.size() != 1) {
        throw InputError("annotate needs exactly one --predictions file");
    }
    const auto records = load_predictions_for(ds, c.cfg.predictions.front());
    std::map<std::string, const Example*> by_id;
    for (const auto& ex : ds.examples) {
        by_id.emplace(ex.id, &ex);
    }
    auto& provider = c.provider();
    LabelCounts totals;
    std::vector<Json> lines;
    for (const auto& r : records) {
        const auto golds = by_id.at(r.id)->gold_texts();
        const auto set = annotate_prediction_set(r.predictions, golds, c.cfg.thresholds, provider);
        Json labels = Json::array();
        Json best = Json::array();
        Json wo = Json::array();
        Json bs = Json::array();
        for (const auto& lp : set.labeled) {
            labels.push_back(to_string(lp.label));
            best.push_back(lp.best_gold ? Json(*lp.best_gold) : Json(nullptr));
            wo.push_back(lp.wo);
            bs.push_back(lp.bs);
        }
        for (const Label l : kAllLabels) {
            totals[l] += set.counts[l];
        }
        lines.push_back({{"id", r.id}, {"predictions", r.predictions}, {"labels", labels},
                         {"best_golds", best}, {"wo", wo}, {"bs", bs}});
    }
    std::sort(lines.begin(), lines.end(),
              [](const Json& a, const Json& b) { return a["id"] < b["id"]; });
    const auto dir = c.out_dir();
    auto f = open_output(dir / "annotated.jsonl");
    for (const auto& j : lines) {
        write_json_line(f, j);
    }
    c.out << "correct," << totals.correct << "\npartially," << totals.partially << "\nwrong,"
          << totals.wrong << '\n';
    return kExitOk;
}

int cmd_score(Context& c) {
    const auto ds = read_dataset(fs::path(c.cfg.dataset));
    if (c.cfg.predictions.size() != 1) {
        throw InputError("score needs exactly one --predictions file");
    }
    const auto records = load_predictions_for(ds, c.cfg.predictions.front());
    const auto scores = score_predictions(ds, index_predictions(records));
    c.out << "metric,precision,recall,f1\n";
    print_prf_rows(c.out, scores.em, scores.pm);
    if (!c.cfg.out.empty()) {
        const auto dir = c.out_dir();
        Json report = {{"header", header_json(c.cfg, "score")},
                       {"metrics", {{"em", prf_json(scores.em)}, {"pm", prf_json(scores.pm)}}}};
        auto f = open_output(dir / "report.json");
        f << report.dump(2) << '\n';
        auto csv = open_output(dir / "metrics.csv");
        csv << "metric,precision,recall,f1\n";
        print_prf_rows(csv, scores.em, scores.pm);
    }
    return kExitOk;
}

Json trace_json(const PipelineTrace& t) {
    Json labels = Json::array();
    for (const auto& l : t.labels) {
        labels.push_back(l ? Json(to_string(*l)) : Json(nullptr));
    }
    Json corrected = Json::array();
    for (const auto& x : t.corrected) {
        corrected.push_back(x ? Json(*x) : Json(nullptr));
    }
    Json j = {{"id", t.id},
              {"mode", to_string(t.mode)},
              {"predictions", t.predictions},
              {"labels", labels},
              {"corrected", corrected},
              {"final", t.final}};
    if (t.error) {
        j["error"] = *t.error;
    }
    return j;
}

int cmd_pipeline(Context& c) {
    const auto mode = parse_mode(c.cfg.mode);
    if (!mode) {
        throw InputError("unknown --mode " + c.cfg.mode +
                         " (standard, cls-only, cor-only, cor-then-cls, binary-cls-cor)");
    }
    const auto ds = read_dataset(fs::path(c.cfg.dataset));

    std::shared_ptr<const std::map<std::string, std::vector<std::string>>> static_preds;
    if (!c.cfg.predictions.empty()) {
        if (c.cfg.predictions.size() != 1) {
            throw InputError("pipeline takes at most one --predictions file");
        }
        static_preds = std::make_shared<const std::map<std::string, std::vector<std::string>>>(
            index_predictions(load_predictions_for(ds, c.cfg.predictions.front())));
    } else if (c.cfg.reader_cmd.empty()) {
        throw InputError("pipeline needs --predictions or --reader-cmd");
    }
    const bool needs_classifier = *mode != PipelineMode::CorOnly;
    const bool needs_corrector = *mode != PipelineMode::ClsOnly;
    if (needs_classifier && c.cfg.classifier_cmd.empty()) {
        throw InputError("mode " + c.cfg.mode + " needs --classifier-cmd (oracle, identity or a command)");
    }
    if (needs_corrector && c.cfg.corrector_cmd.empty()) {
        throw InputError("mode " + c.cfg.mode + " needs --corrector-cmd (oracle, identity or a command)");
    }

    const EmbeddingProvider& provider = c.provider();
    const RunConfig& cfg = c.cfg;
    BackendFactory factory = [&cfg, &provider, static_preds]() {
        BackendSet set;
        if (static_preds) {
            set.reader = std::make_unique<StaticReader>(static_preds);
        } else {
            set.reader = std::make_unique<RemoteReader>(open_transport(cfg.reader_cmd));
        }
        const std::string& cls = cfg.classifier_cmd;
        if (cls.empty() || cls == "identity") {
            set.classifier = std::make_unique<IdentityClassifier>();
        } else if (cls == "oracle") {
            set.classifier = std::make_unique<OracleClassifier>(cfg.thresholds, provider);
        } else {
            set.classifier = std::make_unique<RemoteClassifier>(open_transport(cls));
        }
        const std::string& cor = cfg.corrector_cmd;
        if (cor.empty() || cor == "identity") {
            set.corrector = std::make_unique<IdentityCorrector>();
        } else if (cor == "oracle") {
            set.corrector = std::make_unique<OracleCorrector>(provider);
        } else {
            set.corrector = std::make_unique<RemoteCorrector>(open_transport(cor), cfg.max_span_words);
        }
        return set;
    };

    const auto started = std::chrono::system_clock::now();
    const auto traces = run_pipeline_dataset(ds.examples, factory, *mode, cfg.workers);
    const auto finished = std::chrono::system_clock::now();

    std::map<std::string, std::vector<std::string>> before;
    std::map<std::string, std::vector<std::string>> after;
    std::size_t failures = 0;
    for (const auto& t : traces) {
        before[t.id] = t.predictions;
        after[t.id] = t.final;
        failures += t.error ? 1 : 0;
    }
    const auto s_before = score_predictions(ds, before);
    const auto s_after = score_predictions(ds, after);

    const auto dir = c.out_dir();
    {
        auto f = open_output(dir / "final.jsonl");
        for (const auto& t : traces) {
            write_json_line(f, {{"id", t.id}, {"predictions", t.final}});
        }
        auto tr = open_output(dir / "trace.jsonl");
        for (const auto& t : traces) {
            write_json_line(tr, trace_json(t));
        }
        Json header = header_json(cfg, "pipeline");
        header["mode"] = to_string(*mode);
        Json report = {{"header", header},
                       {"examples", traces.size()},
                       {"failures", failures},
                       {"metrics",
                        {{"before", {{"em", prf_json(s_before.em)}, {"pm", prf_json(s_before.pm)}}},
                         {"after", {{"em", prf_json(s_after.em)}, {"pm", prf_json(s_after.pm)}}}}}};
        auto r = open_output(dir / "report.json");
        r << report.dump(2) << '\n';

        // Timestamps live only in the sidecar log.
        auto log = open_output(dir / "run.log");
        const auto to_text = [](std::chrono::system_clock::time_point tp) {
            const std::time_t tt = std::chrono::system_clock::to_time_t(tp);
            std::tm tm{};
            gmtime_r(&tt, &tm);
            std::ostringstream s;
            s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
            return s.str();
        };
        log << "started " << to_text(started) << "\nfinished " << to_text(finished) << "\nworkers "
            << cfg.workers << "\n";
        for (const auto& t : traces) {
            if (t.error) {
                log << "failure " << t.id << ": " << *t.error << '\n';
            }
        }
    }

    c.out << "metric,precision,recall,f1\n";
    print_prf_rows(c.out, s_before.em, s_before.pm, "before_");
    print_prf_rows(c.out, s_after.em, s_after.pm, "after_");
    c.out << "failures," << failures << '/' << traces.size() << '\n';
    const double rate = traces.empty() ? 0.0 : static_cast<double>(failures) / static_cast<double>(traces.size());
    if (rate > cfg.max_failure_rate) {
        c.err << "backend failure rate " << rate << " exceeds cap " << cfg.max_failure_rate << '\n';
        return kExitBackend;
    }
    return kExitOk;
}

// --- silver ----------------------------------------------------------------

int silver_split(Context& c, const DatasetFile& ds) {
    const auto plan = split_folds(ds.examples, c.cfg.k, c.cfg.seed);
    const auto dir = c.out_dir();
    std::map<std::string, const Example*> by_id;
    for (const auto& ex : ds.examples) {
        by_id.emplace(ex.id, &ex);
    }
    auto subset = [&](const std::vector<std::string>& ids) {
        DatasetFile part;
        part.header = ds.header;
        for (const auto& id : ids) {
            part.examples.push_back(*by_id.at(id));
        }
        return part;
    };
    Json summary = {{"header", header_json(c.cfg, "silver split")}, {"k", plan.k}, {"folds", Json::array()}};
    for (std::size_t f = 0; f < plan.k; ++f) {
        const fs::path fold_dir = dir / ("fold_" + std::to_string(f));
        fs::create_directories(fold_dir);
        write_dataset(fold_dir / "heldout.jsonl", subset(plan.folds[f]));
        write_dataset(fold_dir / "train.jsonl", subset(plan.train_ids(f)));
        summary["folds"].push_back({{"fold", f}, {"heldout", plan.folds[f]}});
        c.out << "fold_" << f << ',' << plan.folds[f].size() << '\n';
    }
    auto s = open_output(dir / "folds.json");
    s << summary.dump(2) << '\n';
    return kExitOk;
}

int silver_build(Context& c, const DatasetFile& ds) {
    const auto dir = c.out_dir();
    std::vector<fs::path> fold_files;
    if (!c.cfg.predictions.empty()) {
        if (c.cfg.predictions.size() != c.cfg.k) {
            throw InputError("expected " + std::to_string(c.cfg.k) + " --predictions files (one per fold), got " +
                             std::to_string(c.cfg.predictions.size()));
        }
        fold_files.assign(c.cfg.predictions.begin(), c.cfg.predictions.end());
    } else {
        for (std::size_t f = 0; f < c.cfg.k; ++f) {
            fold_files.push_back(dir / ("fold_" + std::to_string(f)) / "predictions.jsonl");
        }
    }
    std::vector<PredictionRecord> all;
    for (std::size_t f = 0; f < fold_files.size(); ++f) {
        if (!fs::exists(fold_files[f])) {
            throw InputError("missing predictions for fold " + std::to_string(f) + ": " + fold_files[f].string());
        }
        auto part = read_predictions(fold_files[f]);
        all.insert(all.end(), part.begin(), part.end());
    }
    auto& provider = c.provider();
    const auto records = annotate_fold_predictions(all, ds.examples, c.cfg.thresholds, provider);
    const auto cls = build_classifier_dataset(records, c.cfg.seed);
    const auto cor = build_corrector_dataset(records, ds.examples, c.cfg.thresholds, provider, c.cfg.seed);

    {
        auto f = open_output(dir / "classifier.jsonl");
        for (const auto& r : cls.records) {
            write_json_line(f, to_json(r));
        }
        auto g = open_output(dir / "corrector.jsonl");
        for (const auto& r : cor.records) {
            write_json_line(g, to_json(r));
        }
    }
    const auto counts_json = [](const LabelCounts& l) {
        return Json{{"correct", l.correct}, {"partially", l.partially}, {"wrong", l.wrong}};
    };
    Json summary = {{"header", header_json(c.cfg, "silver build")},
                    {"annotated", counts_json(cls.input_counts)},
                    {"classifier", counts_json(cls.output_counts)},
                    {"corrector",
                     {{"modify", cor.modify_kept},
                      {"no_modify", cor.keep_kept},
                      {"modify_candidates", cor.modify_candidates},
                      {"no_modify_candidates", cor.keep_candidates},
                      {"skipped_gold_not_in_context", cor.skipped_gold_not_in_context},
                      {"skipped_prediction_not_in_context", cor.skipped_prediction_not_in_context}}},
                    {"diagnostics", Json::array()}};
    for (const auto& d : cls.diagnostics) {
        summary["diagnostics"].push_back(d);
        c.err << "diagnostic: " << d << '\n';
    }
    for (const auto& d : cor.diagnostics) {
        summary["diagnostics"].push_back(d);
        c.err << "diagnostic: " << d << '\n';
    }
    auto s = open_output(dir / "summary.json");
    s << summary.dump(2) << '\n';
    c.out << "classifier," << cls.records.size() << "\ncorrector," << cor.records.size() << '\n';
    return kExitOk;
}

int cmd_silver(Context& c) {
    if (c.cfg.k < 2) {
        throw InputError("--k must be at least 2");
    }
    const auto ds = read_dataset(fs::path(c.cfg.dataset));
    if (c.cfg.phase == "split") {
        return silver_split(c, ds);
    }
    if (c.cfg.phase == "build") {
        return silver_build(c, ds);
    }
    throw InputError("--phase must be split or build");
}

// --- report ----------------------------------------------------------------

std::vector<Label> labels_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open " + path);
    }
    std::vector<Label> out;
    for_each_json_line(in, path, [&](const Json& j, std::size_t) {
        const Json& labels = require_field(j, "labels");
        if (!labels.is_array()) {
            throw InputError("\"labels\" must be a list");
        }
        for (const auto& l : labels) {
            if (l.is_null()) {
                continue;
            }
            const auto parsed = l.is_string() ? parse_label(l.get<std::string>()) : std::nullopt;
            if (!parsed) {
                throw InputError("bad label " + l.dump());
            }
            out.push_back(*parsed);
        }
    });
    return out;
}

Label label_field(const Json& j, const char* key) {
    const auto parsed = parse_label(require_string(j, key));
    if (!parsed) {
        throw InputError(std::string("field \"") + key + "\" must be correct, partially or wrong");
    }
    return *parsed;
}

int cmd_report(Context& c) {
    const RunConfig& cfg = c.cfg;
    Json report = {{"header", header_json(cfg, "report")}};
    const auto dir = c.out_dir();
    std::optional<DatasetFile> ds;
    if (!cfg.dataset.empty()) {
        ds = read_dataset(fs::path(cfg.dataset));
    }
    auto need_dataset = [&](const char* what) -> const DatasetFile& {
        if (!ds) {
            throw InputError(std::string(what) + " needs --dataset");
        }
        return *ds;
    };
    auto& provider = c.provider();

    // Metrics and quality over before/after prediction files.
    if (!cfg.predictions.empty()) {
        const auto& d = need_dataset("--predictions");
        const auto before = index_predictions(load_predictions_for(d, cfg.predictions.front()));
        const auto s_before = score_predictions(d, before);
        report["metrics"]["before"] = {{"em", prf_json(s_before.em)}, {"pm", prf_json(s_before.pm)}};
        auto csv = open_output(dir / "metrics.csv");
        csv << "metric,precision,recall,f1\n";
        print_prf_rows(csv, s_before.em, s_before.pm, "before_");
        c.out << "metric,precision,recall,f1\n";
        print_prf_rows(c.out, s_before.em, s_before.pm, "before_");
        if (!cfg.final_predictions.empty()) {
            const auto after = index_predictions(load_predictions_for(d, cfg.final_predictions));
            const auto s_after = score_predictions(d, after);
            report["metrics"]["after"] = {{"em", prf_json(s_after.em)}, {"pm", prf_json(s_after.pm)}};
            print_prf_rows(csv, s_after.em, s_after.pm, "after_");
            print_prf_rows(c.out, s_after.em, s_after.pm, "after_");

            std::vector<QualityItem> items;
            for (const auto& ex : d.examples) {
                QualityItem item;
                if (const auto it = before.find(ex.id); it != before.end()) {
                    item.before = it->second;
                }
                if (const auto it = after.find(ex.id); it != after.end()) {
                    item.after = it->second;
                }
                item.golds = ex.gold_texts();
                items.push_back(std::move(item));
            }
            const auto q = quality_report(items, cfg.thresholds, provider);
            report["quality"] = {{"before", {{"wo", q.before.wo}, {"bs", q.before.bs}, {"count", q.before.count}}},
                                 {"after", {{"wo", q.after.wo}, {"bs", q.after.bs}, {"count", q.after.count}}},
                                 {"delta", {{"wo", q.delta_wo()}, {"bs", q.delta_bs()}}}};
            auto qf = open_output(dir / "quality.csv");
            write_quality_csv(qf, q);
            print_quality(c.out, q);
        }
    }

    // Classifier confusion and corrector changes from a pipeline trace.
    std::vector<std::pair<Label, Label>> pairs;
    std::vector<std::string> ch_before;
    std::vector<std::string> ch_after;
    std::vector<std::vector<std::string>> ch_golds;
    if (!cfg.trace.empty()) {
        const auto& d = need_dataset("--trace");
        std::map<std::string, const Example*> by_id;
        for (const auto& ex : d.examples) {
            by_id.emplace(ex.id, &ex);
        }
        std::ifstream in(cfg.trace);
        if (!in) {
            throw InputError("cannot open " + cfg.trace);
        }
        for_each_json_line(in, cfg.trace, [&](const Json& j, std::size_t) {
            const auto id = require_string(j, "id");
            const auto it = by_id.find(id);
            if (it == by_id.end()) {
                throw InputError("trace id not in dataset: " + id);
            }
            const auto golds = it->second->gold_texts();
            const auto& preds = require_field(j, "predictions");
            const auto& labels = require_field(j, "labels");
            const auto& corrected = require_field(j, "corrected");
            const bool labels_on_corrected = j.value("mode", "") == "cor-then-cls";
            if (preds.size() != labels.size() || preds.size() != corrected.size()) {
                throw InputError("trace arrays differ in length for " + id);
            }
            for (std::size_t i = 0; i < preds.size(); ++i) {
                const std::string pred = preds[i].get<std::string>();
                if (!labels[i].is_null()) {
                    const auto seen = labels_on_corrected && !corrected[i].is_null()
                                          ? corrected[i].get<std::string>()
                                          : pred;
                    const auto predicted = parse_label(labels[i].get<std::string>());
                    if (!predicted) {
                        throw InputError("bad label in trace for " + id);
                    }
                    pairs.emplace_back(classify_prediction(seen, golds, cfg.thresholds, provider).label, *predicted);
                }
                if (!corrected[i].is_null()) {
                    ch_before.push_back(pred);
                    ch_after.push_back(corrected[i].get<std::string>());
                    ch_golds.push_back(golds);
                }
            }
        });
    }
    if (!cfg.pairs.empty()) {
        std::ifstream in(cfg.pairs);
        if (!in) {
            throw InputError("cannot open " + cfg.pairs);
        }
        for_each_json_line(in, cfg.pairs, [&](const Json& j, std::size_t) {
            pairs.emplace_back(label_field(j, "label"), label_field(j, "pred"));
        });
    }
    if (!cfg.changes.empty()) {
        std::ifstream in(cfg.changes);
        if (!in) {
            throw InputError("cannot open " + cfg.changes);
        }
        for_each_json_line(in, cfg.changes, [&](const Json& j, std::size_t) {
            ch_before.push_back(require_string(j, "before"));
            ch_after.push_back(require_string(j, "after"));
            ch_golds.push_back(require_field(j, "golds").get<std::vector<std::string>>());
        });
    }
    if (!pairs.empty()) {
        const auto m = classifier_confusion(pairs);
        Json rows = Json::object();
        for (const Label t : kAllLabels) {
            for (const Label p : kAllLabels) {
                rows[std::string(to_string(t))][std::string(to_string(p))] = {
                    {"count", m.at(t, p)}, {"row_percent", format_percent(m.row_percent(t, p))}};
            }
        }
        report["confusion"] = rows;
        auto f = open_output(dir / "confusion.csv");
        write_confusion_csv(f, m);
        print_confusion(c.out, m, "classifier confusion");
    }
    if (!ch_before.empty()) {
        const auto m = corrector_change_matrix(ch_before, ch_after, ch_golds);
        Json rows = Json::object();
        for (const bool b : {false, true}) {
            for (const bool a : {false, true}) {
                rows[b ? "correct" : "incorrect"][a ? "correct" : "incorrect"] = {
                    {"count", m.at(b, a)}, {"percent", format_percent(m.percent(b, a))}};
            }
        }
        report["changes"] = rows;
        auto f = open_output(dir / "changes.csv");
        write_changes_csv(f, m);
        print_changes(c.out, m, "corrector changes");
    }

    if (!cfg.runs.empty()) {
        std::vector<NamedRun> runs;
        for (const auto& spec : cfg.runs) {
            const auto eq = spec.find('=');
            if (eq == std::string::npos || eq == 0) {
                throw InputError("--run must be NAME=FILE");
            }
            runs.push_back({spec.substr(0, eq), labels_from_file(spec.substr(eq + 1))});
        }
        const auto rows = distribution_report(runs);
        Json dist = Json::object();
        for (const auto& r : rows) {
            dist[r.name] = {{"correct", r.counts.correct},
                            {"partially", r.counts.partially},
                            {"wrong", r.counts.wrong},
                            {"total", r.counts.total()}};
        }
        report["distribution"] = dist;
        auto f = open_output(dir / "distribution.csv");
        write_distribution_csv(f, rows);
        print_distribution(c.out, rows);
    }

    auto f = open_output(dir / "report.json");
    f << report.dump(2) << '\n';
    return kExitOk;
}

void add_thresholds(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--alpha", cfg.thresholds.alpha, "Word Overlap floor for partially correct")
        ->capture_default_str();
    sub->add_option("--beta", cfg.thresholds.beta, "BERTScore floor for partially correct")
        ->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"acc: answer, classify, correct post-processing toolkit for multi-span QA", "acc"};
    app.set_config("--config", "", "TOML/INI config file; command-line flags take precedence");
    app.require_subcommand(1);

    auto* import_cmd = app.add_subcommand("import", "Import token-level BIO annotations");
    import_cmd->add_option("--bio", cfg.bio, "BIO token file")->required();
    import_cmd->add_option("--name", cfg.name, "Dataset name");
    import_cmd->add_option("--out", cfg.out, "Output dataset file")->required();
    add_thresholds(import_cmd, cfg);

    auto* validate_cmd = app.add_subcommand("validate", "Check a dataset and print answer statistics");
    validate_cmd->add_option("--dataset", cfg.dataset)->required();

    auto* annotate_cmd = app.add_subcommand("annotate", "Label predictions correct / partially / wrong");
    annotate_cmd->add_option("--dataset", cfg.dataset)->required();
    annotate_cmd->add_option("--predictions", cfg.predictions)->required();
    annotate_cmd->add_option("--embedder-cmd", cfg.embedder_cmd);
    annotate_cmd->add_option("--out", cfg.out);
    add_thresholds(annotate_cmd, cfg);

    auto* score_cmd = app.add_subcommand("score", "EM and PM precision / recall / F1");
    score_cmd->add_option("--dataset", cfg.dataset)->required();
    score_cmd->add_option("--predictions", cfg.predictions)->required();
    score_cmd->add_option("--out", cfg.out, "Also write report.json and metrics.csv here");
    score_cmd->add_option("--seed", cfg.seed);

    auto* pipeline_cmd = app.add_subcommand("pipeline", "Run answer-classify-correct over a dataset");
    pipeline_cmd->add_option("--dataset", cfg.dataset)->required();
    pipeline_cmd->add_option("--predictions", cfg.predictions, "Reader output file (replaces --reader-cmd)");
    pipeline_cmd->add_option("--reader-cmd", cfg.reader_cmd);
    pipeline_cmd->add_option("--classifier-cmd", cfg.classifier_cmd, "oracle, identity, a command or tcp://host:port");
    pipeline_cmd->add_option("--corrector-cmd", cfg.corrector_cmd, "oracle, identity, a command or tcp://host:port");
    pipeline_cmd->add_option("--embedder-cmd", cfg.embedder_cmd);
    pipeline_cmd->add_option("--mode", cfg.mode)->capture_default_str();
    pipeline_cmd->add_option("--workers", cfg.workers)->check(CLI::PositiveNumber);
    pipeline_cmd->add_option("--max-failure-rate", cfg.max_failure_rate)->check(CLI::Range(0.0, 1.0));
    pipeline_cmd->add_option("--max-span-words", cfg.max_span_words)->check(CLI::PositiveNumber);
    pipeline_cmd->add_option("--seed", cfg.seed);
    pipeline_cmd->add_option("--out", cfg.out)->capture_default_str();
    add_thresholds(pipeline_cmd, cfg);

    auto* silver_cmd = app.add_subcommand("silver", "Fold splitting and silver-labeled dataset construction");
    silver_cmd->add_option("--phase", cfg.phase, "split or build")->capture_default_str();
    silver_cmd->add_option("--dataset", cfg.dataset)->required();
    silver_cmd->add_option("--predictions", cfg.predictions, "Per-fold prediction files, in fold order");
    silver_cmd->add_option("--k", cfg.k)->capture_default_str();
    silver_cmd->add_option("--seed", cfg.seed)->capture_default_str();
    silver_cmd->add_option("--embedder-cmd", cfg.embedder_cmd);
    silver_cmd->add_option("--out", cfg.out)->capture_default_str();
    add_thresholds(silver_cmd, cfg);

    auto* report_cmd = app.add_subcommand("report", "Metrics, distributions, confusion and change matrices");
    report_cmd->add_option("--dataset", cfg.dataset);
    report_cmd->add_option("--predictions", cfg.predictions, "Predictions before post-processing");
    report_cmd->add_option("--final", cfg.final_predictions, "Predictions after post-processing");
    report_cmd->add_option("--trace", cfg.trace, "Pipeline trace file");
    report_cmd->add_option("--run", cfg.runs, "NAME=FILE labeled run for the distribution table");
    report_cmd->add_option("--pairs", cfg.pairs, "File of {\"label\", \"pred\"} classifier pairs");
    report_cmd->add_option("--changes", cfg.changes, "File of {\"before\", \"after\", \"golds\"} items");
    report_cmd->add_option("--embedder-cmd", cfg.embedder_cmd);
    report_cmd->add_option("--seed", cfg.seed);
    report_cmd->add_option("--out", cfg.out)->capture_default_str();
    add_thresholds(report_cmd, cfg);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        cfg.thresholds.validate();
        Context ctx(cfg, out, err);
        if (*import_cmd) return cmd_import(ctx);
        if (*validate_cmd) return cmd_validate(ctx);
        if (*annotate_cmd) return cmd_annotate(ctx);
        if (*score_cmd) return cmd_score(ctx);
        if (*pipeline_cmd) return cmd_pipeline(ctx);
        if (*silver_cmd) return cmd_silver(ctx);
        if (*report_cmd) return cmd_report(ctx);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const ProtocolError& e) {
        err << "backend error: " << e.what() << '\n';
        return kExitBackend;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const Json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitInput;
}

}  // namespace acc::cli
