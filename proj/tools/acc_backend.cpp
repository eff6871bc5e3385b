// Reference model backend speaking the line protocol over stdio. It answers
// from a dataset with known golds, which makes it useful for wiring tests and
// for upper-bound runs of the pipeline.
#include <iostream>

#include "CLI11.hpp"
#include "acc/backend_server.hpp"
#include "acc/dataio.hpp"
#include "acc/error.hpp"

int main(int argc, char** argv) {
    std::string dataset;
    std::string predictions;
    acc::OracleServer::Options options;
    CLI::App app{"acc-backend: oracle reader/classifier/corrector/embedder over stdio"};
    app.add_option("--dataset", dataset)->required();
    app.add_option("--predictions", predictions, "Predictions served to read requests");
    app.add_option("--alpha", options.thresholds.alpha)->capture_default_str();
    app.add_option("--beta", options.thresholds.beta)->capture_default_str();
    app.add_flag("--pointer", options.pointer_scores, "Answer correct requests with st/ed scores");
    CLI11_PARSE(app, argc, argv);

    try {
        auto ds = acc::read_dataset(std::filesystem::path(dataset));
        std::map<std::string, std::vector<std::string>> preds;
        if (!predictions.empty()) {
            preds = acc::index_predictions(acc::read_predictions(std::filesystem::path(predictions)));
        }
        acc::OracleServer server(std::move(ds.examples), std::move(preds), acc::default_embedder(), options);
        std::ios::sync_with_stdio(false);
        server.serve(std::cin, std::cout);
    } catch (const acc::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
