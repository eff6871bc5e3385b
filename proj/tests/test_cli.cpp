#include <sys/wait.h>

#include <cstdlib>
#include <sstream>

#include "acc/cli.hpp"
#include "acc/jsonl.hpp"
#include "doctest.h"
#include "fixtures.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result acc_run(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = acc::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<acc::Json> read_lines(const fs::path& path) {
    std::vector<acc::Json> out;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        out.push_back(acc::Json::parse(line));
    }
    return out;
}

// DHMIS example plus its predictions in a fresh directory.
fs::path dhmis_dir(const std::string& name) {
    const auto dir = fixtures::scratch_dir(name);
    fixtures::write_dataset_file(dir / "dataset.jsonl", {fixtures::dhmis()});
    fixtures::write_predictions_file(dir / "preds.jsonl", {{"dhmis1", fixtures::dhmis_predictions()}});
    return dir;
}

std::vector<std::string> final_of(const fs::path& out_dir) {
    const auto lines = read_lines(out_dir / "final.jsonl");
    REQUIRE(lines.size() == 1);
    return lines[0]["predictions"].get<std::vector<std::string>>();
}

}  // namespace

TEST_CASE("score on the running example") {
    const auto dir = dhmis_dir("cli-score");
    const auto r = acc_run({"score", "--dataset", (dir / "dataset.jsonl").string(), "--predictions",
                            (dir / "preds.jsonl").string(), "--out", (dir / "out").string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("metric,precision,recall,f1") != std::string::npos);
    CHECK(r.out.find("em,0.333333,0.500000,0.400000") != std::string::npos);
    const auto report = acc::Json::parse(fixtures::read_text(dir / "out" / "report.json"));
    CHECK(report["metrics"]["em"]["precision"].get<double>() == doctest::Approx(1.0 / 3.0));
    CHECK(report["header"]["seed"] == 0);
}

TEST_CASE("score with predictions equal to golds") {
    const auto dir = fixtures::scratch_dir("cli-score-gold");
    fixtures::write_dataset_file(dir / "dataset.jsonl", {fixtures::dhmis()});
    fixtures::write_predictions_file(dir / "preds.jsonl", {{"dhmis1", {"Becky Sloan", "Joseph Pelling"}}});
    const auto r = acc_run({"score", "--dataset", (dir / "dataset.jsonl").string(), "--predictions",
                            (dir / "preds.jsonl").string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("em,1.000000,1.000000,1.000000") != std::string::npos);
}

TEST_CASE("input errors exit with 2") {
    const auto dir = dhmis_dir("cli-errors");
    fixtures::write_text(dir / "bad.jsonl", "{\"id\": \"dhmis1\", \"predictions\": [\n");
    auto r = acc_run({"score", "--dataset", (dir / "dataset.jsonl").string(), "--predictions",
                      (dir / "bad.jsonl").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("bad.jsonl:1") != std::string::npos);

    fixtures::write_predictions_file(dir / "unknown.jsonl", {{"dhmis1", {}}, {"ghost", {"x"}}, {"phantom", {}}});
    r = acc_run({"score", "--dataset", (dir / "dataset.jsonl").string(), "--predictions",
                 (dir / "unknown.jsonl").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("ghost") != std::string::npos);
    CHECK(r.err.find("phantom") != std::string::npos);

    r = acc_run({"score", "--dataset", (dir / "missing.jsonl").string(), "--predictions",
                 (dir / "preds.jsonl").string()});
    CHECK(r.code == 2);

    r = acc_run({"pipeline", "--dataset", (dir / "dataset.jsonl").string(), "--predictions",
                 (dir / "preds.jsonl").string(), "--mode", "turbo", "--classifier-cmd", "oracle"});
    CHECK(r.code == 2);

    r = acc_run({"annotate", "--dataset", (dir / "dataset.jsonl").string(), "--predictions",
                 (dir / "preds.jsonl").string(), "--alpha", "1.5"});
    CHECK(r.code == 2);

    r = acc_run({"frobnicate"});
    CHECK(r.code == 2);
    r = acc_run({});
    CHECK(r.code == 2);
    r = acc_run({"--help"});
    CHECK(r.code == 0);
}

TEST_CASE("pipeline modes with built-in oracle backends") {
    const auto dir = dhmis_dir("cli-pipeline");
    const std::vector<std::string> base = {"pipeline", "--dataset", (dir / "dataset.jsonl").string(),
                                           "--predictions", (dir / "preds.jsonl").string(),
                                           "--classifier-cmd", "oracle", "--corrector-cmd", "oracle"};
    auto args = base;
    args.insert(args.end(), {"--mode", "cls-only", "--out", (dir / "cls").string()});
    CHECK(acc_run(args).code == 0);
    CHECK(final_of(dir / "cls") == std::vector<std::string>{"Joseph Pelling", "Sloan"});

    args = base;
    args.insert(args.end(), {"--mode", "standard", "--out", (dir / "std").string()});
    const auto r = acc_run(args);
    CHECK(r.code == 0);
    CHECK(final_of(dir / "std") == std::vector<std::string>{"Joseph Pelling", "Becky Sloan"});
    CHECK(r.out.find("after_em,1.000000,1.000000,1.000000") != std::string::npos);

    const auto trace = read_lines(dir / "std" / "trace.jsonl");
    REQUIRE(trace.size() == 1);
    CHECK(trace[0]["labels"] == acc::Json({"correct", "partially", "wrong"}));
    CHECK(trace[0]["corrected"][1] == "Becky Sloan");
    CHECK(fs::exists(dir / "std" / "run.log"));
    const auto report = acc::Json::parse(fixtures::read_text(dir / "std" / "report.json"));
    CHECK(report["header"]["mode"] == "standard");
    CHECK(report["metrics"]["after"]["em"]["f1"] == 1.0);
}

TEST_CASE("pipeline with identity backends reproduces the input") {
    const auto dir = dhmis_dir("cli-identity");
    const auto r = acc_run({"pipeline", "--dataset", (dir / "dataset.jsonl").string(), "--predictions",
                            (dir / "preds.jsonl").string(), "--classifier-cmd", "identity", "--corrector-cmd",
                            "identity", "--out", (dir / "out").string()});
    CHECK(r.code == 0);
    CHECK(final_of(dir / "out") == fixtures::dhmis_predictions());
}

TEST_CASE("pipeline over process backends") {
    const auto dir = dhmis_dir("cli-process");
    const std::string server = std::string(ACC_BACKEND_BIN) + " --dataset " + (dir / "dataset.jsonl").string();
    const auto r = acc_run({"pipeline", "--dataset", (dir / "dataset.jsonl").string(), "--reader-cmd",
                            server + " --predictions " + (dir / "preds.jsonl").string(), "--classifier-cmd", server,
                            "--corrector-cmd", server + " --pointer", "--embedder-cmd", server, "--workers", "2",
                            "--out", (dir / "out").string()});
    CHECK(r.code == 0);
    CHECK(final_of(dir / "out") == std::vector<std::string>{"Joseph Pelling", "Becky Sloan"});
}

TEST_CASE("pipeline backend failures and the failure-rate cap") {
    const auto corpus = fixtures::synthetic_corpus(10, 5);
    const auto dir = fixtures::scratch_dir("cli-failures");
    fixtures::write_dataset_file(dir / "dataset.jsonl", corpus.examples);
    fixtures::write_predictions_file(dir / "preds.jsonl", corpus.predictions);
    const std::vector<std::string> base = {"pipeline", "--dataset", (dir / "dataset.jsonl").string(),
                                           "--predictions", (dir / "preds.jsonl").string(), "--corrector-cmd",
                                           "identity", "--workers", "1", "--mode", "cls-only"};

    auto args = base;
    args.insert(args.end(), {"--classifier-cmd", std::string(FAKE_BACKEND_BIN) + " error", "--out",
                             (dir / "error").string()});
    auto r = acc_run(args);
    CHECK(r.code == 3);
    const auto trace = read_lines(dir / "error" / "trace.jsonl");
    REQUIRE(trace.size() == 10);
    for (const auto& t : trace) {
        CHECK(t.contains("error"));
    }

    args = base;
    args.insert(args.end(), {"--classifier-cmd", std::string(FAKE_BACKEND_BIN) + " error", "--max-failure-rate",
                             "1.0", "--out", (dir / "tolerated").string()});
    CHECK(acc_run(args).code == 0);

    args = base;
    args.insert(args.end(), {"--classifier-cmd", std::string(FAKE_BACKEND_BIN) + " wrong-id", "--out",
                             (dir / "mismatch").string()});
    CHECK(acc_run(args).code == 3);
}

TEST_CASE("silver split and build") {
    const auto corpus = fixtures::synthetic_corpus(9, 8);
    const auto dir = fixtures::scratch_dir("cli-silver");
    fixtures::write_dataset_file(dir / "dataset.jsonl", corpus.examples);
    const auto out = dir / "silver";
    auto r = acc_run({"silver", "--phase", "split", "--dataset", (dir / "dataset.jsonl").string(), "--k", "3",
                      "--out", out.string()});
    REQUIRE(r.code == 0);
    const auto folds = acc::Json::parse(fixtures::read_text(out / "folds.json"));
    REQUIRE(folds["folds"].size() == 3);
    for (const auto& f : folds["folds"]) {
        CHECK(f["heldout"].size() == 3);
    }
    const auto heldout = acc::read_dataset(out / "fold_0" / "heldout.jsonl");
    const auto train = acc::read_dataset(out / "fold_0" / "train.jsonl");
    CHECK(heldout.examples.size() == 3);
    CHECK(train.examples.size() == 6);

    // Missing fold predictions name the fold.
    r = acc_run({"silver", "--phase", "build", "--dataset", (dir / "dataset.jsonl").string(), "--out", out.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("fold 0") != std::string::npos);

    // All-gold predictions: no partially or wrong class, so the classifier set is empty.
    for (std::size_t f = 0; f < 3; ++f) {
        const auto part = acc::read_dataset(out / ("fold_" + std::to_string(f)) / "heldout.jsonl");
        std::vector<acc::PredictionRecord> preds;
        for (const auto& ex : part.examples) {
            preds.push_back({ex.id, ex.gold_texts()});
        }
        fixtures::write_predictions_file(out / ("fold_" + std::to_string(f)) / "predictions.jsonl", preds);
    }
    r = acc_run({"silver", "--phase", "build", "--dataset", (dir / "dataset.jsonl").string(), "--out", out.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("classifier,0") != std::string::npos);
    CHECK(r.err.find("diagnostic") != std::string::npos);
    const auto summary = acc::Json::parse(fixtures::read_text(out / "summary.json"));
    CHECK_FALSE(summary["diagnostics"].empty());
}

TEST_CASE("silver build balances a (10, 5, 3) mix to 9 classifier records") {
    // One question, gold "Maria Surname0x" in context: exact copies are correct,
    // "Surname0x" variants partially correct, unrelated words wrong.
    const auto ex = fixtures::make_example("m", "Who?", "ledger Maria Surname0x and Tomas Surname1x .",
                                           {"Maria Surname0x", "Tomas Surname1x"});
    std::vector<acc::Example> examples;
    std::vector<acc::PredictionRecord> preds;
    for (int i = 0; i < 18; ++i) {
        auto e = ex;
        e.id = "m" + std::to_string(100 + i);
        examples.push_back(e);
        std::string p = i < 10 ? "Maria Surname0x" : i < 15 ? "Surname0x" : "zzwrong";
        preds.push_back({e.id, {p}});
    }
    const auto dir = fixtures::scratch_dir("cli-silver-mix");
    fixtures::write_dataset_file(dir / "dataset.jsonl", examples);
    fixtures::write_predictions_file(dir / "all.jsonl", preds);
    fixtures::write_predictions_file(dir / "none1.jsonl", {});
    fixtures::write_predictions_file(dir / "none2.jsonl", {});
    const std::vector<std::string> args = {"silver", "--phase", "build", "--dataset", (dir / "dataset.jsonl").string(),
                                           "--predictions", (dir / "all.jsonl").string(), "--predictions",
                                           (dir / "none1.jsonl").string(), "--predictions",
                                           (dir / "none2.jsonl").string(), "--seed", "3", "--out",
                                           (dir / "a").string()};
    auto r = acc_run(args);
    REQUIRE(r.code == 0);
    CHECK(read_lines(dir / "a" / "classifier.jsonl").size() == 9);
    const auto summary = acc::Json::parse(fixtures::read_text(dir / "a" / "summary.json"));
    CHECK(summary["annotated"]["correct"] == 10);
    CHECK(summary["annotated"]["partially"] == 5);
    CHECK(summary["annotated"]["wrong"] == 3);
    CHECK(summary["corrector"]["modify"] == 4);
    CHECK(summary["corrector"]["no_modify"] == 2);
    CHECK(summary["header"]["seed"] == 3);

    // Same seed, same bytes.
    auto again = args;
    again.back() = (dir / "b").string();
    REQUIRE(acc_run(again).code == 0);
    for (const auto* name : {"classifier.jsonl", "corrector.jsonl", "summary.json"}) {
        CHECK(fixtures::read_text(dir / "a" / name) == fixtures::read_text(dir / "b" / name));
    }
}

TEST_CASE("annotate and report") {
    const auto dir = dhmis_dir("cli-report");
    auto r = acc_run({"annotate", "--dataset", (dir / "dataset.jsonl").string(), "--predictions",
                      (dir / "preds.jsonl").string(), "--out", (dir / "ann").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("correct,1\npartially,1\nwrong,1") != std::string::npos);
    const auto ann = read_lines(dir / "ann" / "annotated.jsonl");
    REQUIRE(ann.size() == 1);
    CHECK(ann[0]["best_golds"][1] == "Becky Sloan");

    r = acc_run({"pipeline", "--dataset", (dir / "dataset.jsonl").string(), "--predictions",
                 (dir / "preds.jsonl").string(), "--classifier-cmd", "oracle", "--corrector-cmd", "oracle", "--out",
                 (dir / "run").string()});
    REQUIRE(r.code == 0);

    r = acc_run({"report", "--dataset", (dir / "dataset.jsonl").string(), "--predictions",
                 (dir / "preds.jsonl").string(), "--final", (dir / "run" / "final.jsonl").string(), "--trace",
                 (dir / "run" / "trace.jsonl").string(), "--run", "reader=" + (dir / "ann" / "annotated.jsonl").string(),
                 "--seed", "5", "--out", (dir / "rep").string()});
    REQUIRE(r.code == 0);
    const auto report = acc::Json::parse(fixtures::read_text(dir / "rep" / "report.json"));
    CHECK(report["header"]["seed"] == 5);
    CHECK(report["metrics"]["after"]["em"]["f1"] == 1.0);
    CHECK(report["distribution"]["reader"]["partially"] == 1);
    CHECK(report["confusion"]["partially"]["partially"]["count"] == 1);
    CHECK(report["changes"]["incorrect"]["correct"]["count"] == 1);
    CHECK(report["quality"]["after"]["wo"] == 1.0);
    for (const auto* csv : {"metrics.csv", "quality.csv", "confusion.csv", "changes.csv", "distribution.csv"}) {
        CHECK(fs::exists(dir / "rep" / csv));
    }

    fixtures::write_text(dir / "bad-run.jsonl", "{\"labels\": [\"sorta\"]}\n");
    r = acc_run({"report", "--run", "x=" + (dir / "bad-run.jsonl").string(), "--out", (dir / "rep2").string()});
    CHECK(r.code == 2);
}

TEST_CASE("pipeline outputs are byte-identical across runs") {
    const auto corpus = fixtures::synthetic_corpus(30, 2);
    const auto dir = fixtures::scratch_dir("cli-determinism");
    fixtures::write_dataset_file(dir / "dataset.jsonl", corpus.examples);
    fixtures::write_predictions_file(dir / "preds.jsonl", corpus.predictions);
    for (const auto* workers : {"1", "4"}) {
        CHECK(acc_run({"pipeline", "--dataset", (dir / "dataset.jsonl").string(), "--predictions",
                       (dir / "preds.jsonl").string(), "--classifier-cmd", "oracle", "--corrector-cmd", "oracle",
                       "--workers", workers, "--out", (dir / (std::string("w") + workers)).string()})
                  .code == 0);
    }
    for (const auto* name : {"final.jsonl", "trace.jsonl", "report.json"}) {
        CHECK(fixtures::read_text(dir / "w1" / name) == fixtures::read_text(dir / "w4" / name));
    }
}

TEST_CASE("config file supplies defaults and flags win") {
    const auto dir = dhmis_dir("cli-config");
    fixtures::write_text(dir / "run.toml", "[pipeline]\nmode = \"cls-only\"\nclassifier-cmd = \"oracle\"\n"
                                           "corrector-cmd = \"oracle\"\n");
    auto r = acc_run({"--config", (dir / "run.toml").string(), "pipeline", "--dataset",
                      (dir / "dataset.jsonl").string(), "--predictions", (dir / "preds.jsonl").string(), "--out",
                      (dir / "a").string()});
    REQUIRE(r.code == 0);
    CHECK(final_of(dir / "a") == std::vector<std::string>{"Joseph Pelling", "Sloan"});

    r = acc_run({"--config", (dir / "run.toml").string(), "pipeline", "--dataset", (dir / "dataset.jsonl").string(),
                 "--predictions", (dir / "preds.jsonl").string(), "--mode", "standard", "--out", (dir / "b").string()});
    REQUIRE(r.code == 0);
    CHECK(final_of(dir / "b") == std::vector<std::string>{"Joseph Pelling", "Becky Sloan"});
}

TEST_CASE("import and validate") {
    const auto dir = fixtures::scratch_dir("cli-import");
    fixtures::write_text(dir / "bio.jsonl",
                         "{\"id\": \"a\", \"question\": \"Q\", \"context\": [\"x\", \"Becky\", \"Sloan\", \"y\"], "
                         "\"label\": [\"O\", \"B\", \"I\", \"O\"]}\n"
                         "{\"id\": \"b\", \"question\": \"Q\", \"context\": [\"p\", \"q\"], \"label\": [\"I\", \"O\"]}\n");
    auto r = acc_run({"import", "--bio", (dir / "bio.jsonl").string(), "--out", (dir / "ds.jsonl").string()});
    CHECK(r.code == 0);
    CHECK(r.err.find("warning") != std::string::npos);
    r = acc_run({"validate", "--dataset", (dir / "ds.jsonl").string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("examples,2") != std::string::npos);
    CHECK(r.out.find("avg_answers,1.0000") != std::string::npos);

    fixtures::write_text(dir / "bad.jsonl", "{\"id\": \"a\", \"question\": \"Q\", \"context\": [\"x\"], \"label\": [\"Q\"]}\n");
    CHECK(acc_run({"import", "--bio", (dir / "bad.jsonl").string(), "--out", (dir / "x.jsonl").string()}).code == 2);
}

TEST_CASE("the installed binary reports exit codes") {
    const auto dir = dhmis_dir("cli-binary");
    const std::string bin = ACC_BIN;
    const auto status = [](const std::string& cmd) {
        const int raw = std::system((cmd + " >/dev/null 2>&1").c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    CHECK(status(bin + " score --dataset " + (dir / "dataset.jsonl").string() + " --predictions " +
                 (dir / "preds.jsonl").string()) == 0);
    CHECK(status(bin + " score --dataset " + (dir / "nope.jsonl").string() + " --predictions x") == 2);
    CHECK(status(bin + " --bogus-flag") == 2);
}
