#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "acc/example.hpp"
#include "acc/span_select.hpp"
#include "acc/taxonomy.hpp"
#include "acc/transport.hpp"
#include "acc/wire.hpp"

namespace acc {

// Model roles. Instances are used by one worker at a time.
class Reader {
public:
    virtual ~Reader() = default;
    virtual std::vector<std::string> read(const Example& ex) = 0;
};

class Classifier {
public:
    virtual ~Classifier() = default;
    virtual Label classify(const Example& ex, const std::string& prediction) = 0;
};

class Corrector {
public:
    virtual ~Corrector() = default;
    virtual std::string correct(const Example& ex, const std::string& prediction) = 0;
};

// --- built-in backends -------------------------------------------------------

/// The taxonomy itself, used as a perfect classifier.
Label oracle_classify(const std::string& pred, const Example& ex, const Thresholds& t,
                      const EmbeddingProvider& provider);

/// Snaps a prediction to the context-resident gold with the highest
/// (WO, BS), ties to the smaller normalized text. Returns the prediction
/// unchanged when no gold occurs in the context.
std::string oracle_correct(const std::string& pred, const Example& ex, const EmbeddingProvider& provider);

class OracleClassifier final : public Classifier {
public:
    OracleClassifier(Thresholds t, const EmbeddingProvider& provider) : t_(t), provider_(provider) {}
    Label classify(const Example& ex, const std::string& prediction) override {
        return oracle_classify(prediction, ex, t_, provider_);
    }

private:
    Thresholds t_;
    const EmbeddingProvider& provider_;
};

class OracleCorrector final : public Corrector {
public:
    explicit OracleCorrector(const EmbeddingProvider& provider) : provider_(provider) {}
    std::string correct(const Example& ex, const std::string& prediction) override {
        return oracle_correct(prediction, ex, provider_);
    }

private:
    const EmbeddingProvider& provider_;
};

/// Labels every prediction correct.
class IdentityClassifier final : public Classifier {
public:
    Label classify(const Example&, const std::string&) override { return Label::Correct; }
};

/// Returns every prediction unchanged.
class IdentityCorrector final : public Corrector {
public:
    std::string correct(const Example&, const std::string& prediction) override { return prediction; }
};

/// Serves precomputed predictions; examples without a record read as empty.
class StaticReader final : public Reader {
public:
    explicit StaticReader(std::shared_ptr<const std::map<std::string, std::vector<std::string>>> preds)
        : preds_(std::move(preds)) {}
    std::vector<std::string> read(const Example& ex) override;

private:
    std::shared_ptr<const std::map<std::string, std::vector<std::string>>> preds_;
};

// --- remote backends ---------------------------------------------------------

inline constexpr std::chrono::seconds kDefaultBackendTimeout{30};

/// kDefaultBackendTimeout unless ACC_BACKEND_TIMEOUT_SECS holds a positive number.
std::chrono::milliseconds default_backend_timeout();

/// "tcp://host:port" connects over TCP; anything else is a shell command.
std::unique_ptr<LineTransport> open_transport(const std::string& spec);

/// Writes one request line and reads one response line. Timeouts, a closed
/// transport and unparseable lines come back as error responses; a response
/// whose id differs from the request's throws ProtocolError.
wire::Response backend_roundtrip(const wire::Request& req, LineTransport& transport,
                                 std::chrono::milliseconds timeout);

/// One sequential conversation with ids 1, 2, 3, ... After a transport-level
/// failure the connection refuses further requests, since a late reply would
/// desynchronize it.
class BackendConnection {
public:
    explicit BackendConnection(std::unique_ptr<LineTransport> transport,
                               std::chrono::milliseconds timeout = default_backend_timeout());

    wire::Response roundtrip(wire::Request req);

    /// roundtrip, then throws ProtocolError if the backend answered with an error.
    wire::Payload call(wire::Request req);

private:
    std::unique_ptr<LineTransport> transport_;
    std::chrono::milliseconds timeout_;
    std::uint64_t next_id_ = 1;
    bool broken_ = false;
};

class RemoteReader final : public Reader {
public:
    explicit RemoteReader(std::unique_ptr<LineTransport> transport) : conn_(std::move(transport)) {}
    std::vector<std::string> read(const Example& ex) override;

private:
    BackendConnection conn_;
};

class RemoteClassifier final : public Classifier {
public:
    explicit RemoteClassifier(std::unique_ptr<LineTransport> transport) : conn_(std::move(transport)) {}
    Label classify(const Example& ex, const std::string& prediction) override;

private:
    BackendConnection conn_;
};

/// Accepts either a span string or start/end score arrays; scores are decoded
/// with select_best_span over the example's context words.
class RemoteCorrector final : public Corrector {
public:
    explicit RemoteCorrector(std::unique_ptr<LineTransport> transport,
                             std::size_t max_span_words = kDefaultMaxSpanWords)
        : conn_(std::move(transport)), max_span_words_(max_span_words) {}
    std::string correct(const Example& ex, const std::string& prediction) override;

private:
    BackendConnection conn_;
    std::size_t max_span_words_;
};

/// Embeddings from a backend. Calls are serialized over one connection.
class RemoteEmbeddingProvider final : public EmbeddingProvider {
public:
    explicit RemoteEmbeddingProvider(std::unique_ptr<LineTransport> transport)
        : conn_(std::move(transport)) {}
    std::vector<Embedding> embed(std::span<const std::string> tokens) const override;

private:
    mutable std::mutex mu_;
    mutable BackendConnection conn_;
};

}  // namespace acc
