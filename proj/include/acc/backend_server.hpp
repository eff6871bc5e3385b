#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "acc/example.hpp"
#include "acc/similarity.hpp"
#include "acc/taxonomy.hpp"

namespace acc {

/// Reference backend that answers protocol requests from a dataset with
/// known golds: reads come from a predictions table, classify and correct
/// use the taxonomy oracles, embed uses the provider. Requests are matched
/// to examples by their (question, context) pair.
class OracleServer {
public:
    struct Options {
        Thresholds thresholds;
        /// Answer correct requests with one-hot st/ed scores instead of span text.
        bool pointer_scores = false;
    };

    OracleServer(std::vector<Example> examples, std::map<std::string, std::vector<std::string>> predictions,
                 const EmbeddingProvider& provider, Options options);

    /// Answers one request line; never throws, malformed requests get an error response.
    std::string handle(const std::string& line) const;

    /// Serves until end of input, flushing after every response.
    void serve(std::istream& in, std::ostream& out) const;

private:
    const Example* lookup(const std::string& question, const std::string& context) const;

    std::vector<Example> examples_;
    std::map<std::string, std::vector<std::string>> predictions_;
    std::map<std::string, std::size_t> by_key_;
    const EmbeddingProvider& provider_;
    Options options_;
};

}  // namespace acc
