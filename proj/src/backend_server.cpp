#include "acc/backend_server.hpp"

#include <istream>
#include <ostream>

#include "acc/backends.hpp"
#include "acc/error.hpp"
#include "acc/jsonl.hpp"
#include "acc/wire.hpp"

namespace acc {
namespace {

std::string key_of(const std::string& question, const std::string& context) {
    return question + '\x1f' + context;
}

}  // namespace

OracleServer::OracleServer(std::vector<Example> examples, std::map<std::string, std::vector<std::string>> predictions,
                           const EmbeddingProvider& provider, Options options)
    : examples_(std::move(examples)),
      predictions_(std::move(predictions)),
      provider_(provider),
      options_(options) {
    for (std::size_t i = 0; i < examples_.size(); ++i) {
        by_key_.emplace(key_of(examples_[i].question, examples_[i].context_text()), i);
    }
}

const Example* OracleServer::lookup(const std::string& question, const std::string& context) const {
    const auto it = by_key_.find(key_of(question, context));
    return it == by_key_.end() ? nullptr : &examples_[it->second];
}

std::string OracleServer::handle(const std::string& line) const {
    wire::Request req;
    try {
        req = wire::decode_request(line);
    } catch (const ProtocolError& e) {
        // Echo the id when one can be recovered so the client sees a matched failure.
        std::uint64_t id = 0;
        try {
            const auto j = Json::parse(line);
            if (j.is_object() && j.contains("id") && j["id"].is_number_unsigned()) {
                id = j["id"].get<std::uint64_t>();
            }
        } catch (const Json::exception&) {
        }
        return wire::encode(wire::Response::failure(id, e.what()));
    }

    wire::Response resp{req.id, std::nullopt, std::nullopt};
    if (req.op == wire::Op::Embed) {
        resp.payload = wire::Vectors{provider_.embed(req.tokens)};
        return wire::encode(resp);
    }
    const Example* ex = lookup(req.question, req.context);
    if (ex == nullptr) {
        return wire::encode(wire::Response::failure(req.id, "unknown question/context pair"));
    }
    switch (req.op) {
        case wire::Op::Read: {
            const auto it = predictions_.find(ex->id);
            resp.payload = wire::Spans{it == predictions_.end() ? std::vector<std::string>{} : it->second};
            break;
        }
        case wire::Op::Classify:
            resp.payload = wire::LabelPayload{oracle_classify(*req.prediction, *ex, options_.thresholds, provider_)};
            break;
        case wire::Op::Correct: {
            const auto target = oracle_correct(*req.prediction, *ex, provider_);
            if (!options_.pointer_scores) {
                resp.payload = wire::SpanText{target};
                break;
            }
            const auto occ = find_span_occurrences(target, ex->context_words);
            if (occ.empty()) {
                // Nothing to point at; fall back to text.
                resp.payload = wire::SpanText{target};
                break;
            }
            SpanScores s;
            s.st.assign(ex->context_words.size(), -10.0);
            s.ed.assign(ex->context_words.size(), -10.0);
            s.st[occ.front().first] = 10.0;
            s.ed[occ.front().last] = 10.0;
            resp.payload = std::move(s);
            break;
        }
        case wire::Op::Embed:
            break;
    }
    return wire::encode(resp);
}

void OracleServer::serve(std::istream& in, std::ostream& out) const {
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        out << handle(line) << '\n';
        out.flush();
    }
}

}  // namespace acc
