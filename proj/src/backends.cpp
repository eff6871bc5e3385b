#include "acc/backends.hpp"

#include <cstdlib>
#include <tuple>

#include "acc/error.hpp"
#include "acc/norm.hpp"

namespace acc {

Label oracle_classify(const std::string& pred, const Example& ex, const Thresholds& t,
                      const EmbeddingProvider& provider) {
    const auto golds = ex.gold_texts();
    return classify_prediction(pred, golds, t, provider).label;
}

std::string oracle_correct(const std::string& pred, const Example& ex, const EmbeddingProvider& provider) {
    const Gold* best = nullptr;
    std::tuple<double, double> best_key{0.0, 0.0};
    std::string best_norm;
    for (const auto& g : ex.golds) {
        if (find_span_occurrences(g.text, ex.context_words).empty()) {
            continue;
        }
        const std::tuple<double, double> key{word_overlap(pred, g.text), bertscore(pred, g.text, provider)};
        std::string norm = normalize_answer(g.text);
        if (best == nullptr || key > best_key ||
            (key == best_key && std::tie(norm, g.text) < std::tie(best_norm, best->text))) {
            best = &g;
            best_key = key;
            best_norm = std::move(norm);
        }
    }
    return best != nullptr ? best->text : pred;
}

std::vector<std::string> StaticReader::read(const Example& ex) {
    const auto it = preds_->find(ex.id);
    return it != preds_->end() ? it->second : std::vector<std::string>{};
}

std::chrono::milliseconds default_backend_timeout() {
    if (const char* env = std::getenv("ACC_BACKEND_TIMEOUT_SECS")) {
        char* end = nullptr;
        const double secs = std::strtod(env, &end);
        if (end != env && secs > 0.0) {
            return std::chrono::milliseconds(static_cast<long long>(secs * 1000.0));
        }
    }
    return kDefaultBackendTimeout;
}

std::unique_ptr<LineTransport> open_transport(const std::string& spec) {
    constexpr std::string_view kTcp = "tcp://";
    if (spec.rfind(kTcp, 0) == 0) {
        const std::string rest = spec.substr(kTcp.size());
        const auto colon = rest.rfind(':');
        if (colon == std::string::npos) {
            throw InputError("tcp backend must be tcp://host:port");
        }
        int port = 0;
        try {
            port = std::stoi(rest.substr(colon + 1));
        } catch (const std::exception&) {
            port = -1;
        }
        if (port <= 0 || port > 65535) {
            throw InputError("bad port in " + spec);
        }
        return std::make_unique<TcpTransport>(rest.substr(0, colon), static_cast<std::uint16_t>(port));
    }
    return std::make_unique<ProcessTransport>(spec);
}

namespace {

// Second member is true when the failure happened locally (timeout, closed
// transport, unparseable line) rather than being reported by the backend.
std::pair<wire::Response, bool> exchange(const wire::Request& req, LineTransport& transport,
                                         std::chrono::milliseconds timeout) {
    std::optional<std::string> line;
    try {
        transport.send_line(wire::encode(req));
        line = transport.receive_line(timeout);
    } catch (const ProtocolError& e) {
        return {wire::Response::failure(req.id, e.what()), true};
    }
    if (!line) {
        return {wire::Response::failure(req.id, "timed out after " + std::to_string(timeout.count()) + " ms"),
                true};
    }
    wire::Response resp;
    try {
        resp = wire::decode_response(*line, req.op);
    } catch (const ProtocolError& e) {
        return {wire::Response::failure(req.id, e.what()), true};
    }
    if (resp.id != req.id) {
        throw ProtocolError("response id " + std::to_string(resp.id) + " does not match request id " +
                            std::to_string(req.id));
    }
    return {std::move(resp), false};
}

}  // namespace

wire::Response backend_roundtrip(const wire::Request& req, LineTransport& transport,
                                 std::chrono::milliseconds timeout) {
    return exchange(req, transport, timeout).first;
}

BackendConnection::BackendConnection(std::unique_ptr<LineTransport> transport,
                                     std::chrono::milliseconds timeout)
    : transport_(std::move(transport)), timeout_(timeout) {}

wire::Response BackendConnection::roundtrip(wire::Request req) {
    if (broken_) {
        return wire::Response::failure(0, "connection unusable after an earlier failure");
    }
    req.id = next_id_++;
    try {
        auto [resp, local_failure] = exchange(req, *transport_, timeout_);
        broken_ = local_failure;
        return std::move(resp);
    } catch (const ProtocolError&) {
        broken_ = true;
        throw;
    }
}

wire::Payload BackendConnection::call(wire::Request req) {
    const auto op = req.op;
    auto resp = roundtrip(std::move(req));
    if (resp.error) {
        throw ProtocolError(std::string(wire::to_string(op)) + " backend error: " + *resp.error);
    }
    return std::move(*resp.payload);
}

namespace {

wire::Request request_for(wire::Op op, const Example& ex) {
    wire::Request req;
    req.op = op;
    req.question = ex.question;
    req.context = ex.context_text();
    return req;
}

}  // namespace

std::vector<std::string> RemoteReader::read(const Example& ex) {
    return std::get<wire::Spans>(conn_.call(request_for(wire::Op::Read, ex))).spans;
}

Label RemoteClassifier::classify(const Example& ex, const std::string& prediction) {
    auto req = request_for(wire::Op::Classify, ex);
    req.prediction = prediction;
    return std::get<wire::LabelPayload>(conn_.call(std::move(req))).label;
}

std::string RemoteCorrector::correct(const Example& ex, const std::string& prediction) {
    auto req = request_for(wire::Op::Correct, ex);
    req.prediction = prediction;
    auto payload = conn_.call(std::move(req));
    if (auto* text = std::get_if<wire::SpanText>(&payload)) {
        return std::move(text->span);
    }
    const auto& scores = std::get<SpanScores>(payload);
    if (scores.st.size() != ex.context_words.size()) {
        throw ProtocolError("corrector returned " + std::to_string(scores.st.size()) +
                            " start scores for " + std::to_string(ex.context_words.size()) +
                            " context words");
    }
    const auto best = select_best_span(scores, max_span_words_);
    return join_words(ex.context_words, best.span);
}

std::vector<Embedding> RemoteEmbeddingProvider::embed(std::span<const std::string> tokens) const {
    wire::Request req;
    req.op = wire::Op::Embed;
    req.tokens.assign(tokens.begin(), tokens.end());
    std::vector<Embedding> vectors;
    {
        std::lock_guard<std::mutex> lock(mu_);
        vectors = std::get<wire::Vectors>(conn_.call(std::move(req))).vectors;
    }
    if (vectors.size() != tokens.size()) {
        throw ProtocolError("embedder returned " + std::to_string(vectors.size()) + " vectors for " +
                            std::to_string(tokens.size()) + " tokens");
    }
    for (const auto& v : vectors) {
        if (v.empty() || v.size() != vectors.front().size()) {
            throw ProtocolError("embedder vectors must share one positive dimension");
        }
    }
    return vectors;
}

}  // namespace acc
