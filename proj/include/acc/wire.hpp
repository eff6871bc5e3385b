#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "acc/similarity.hpp"
#include "acc/span_select.hpp"
#include "acc/taxonomy.hpp"

// Newline-delimited JSON protocol spoken with model backends.
//
//   request:  {"id": 7, "op": "classify", "question": "...", "context": "...", "prediction": "..."}
//             {"id": 8, "op": "embed", "tokens": ["becky", "sloan"]}
//   response: {"id": 7, "label": "partially"}
//             {"id": 8, "vectors": [[...], [...]]}
//             {"id": 9, "spans": ["...", ...]}                 (read)
//             {"id": 10, "span": "..."} or {"id": 10, "st": [...], "ed": [...]}   (correct)
//             {"id": 11, "error": "..."}
namespace acc::wire {

enum class Op { Read, Classify, Correct, Embed };

std::string_view to_string(Op op);
std::optional<Op> parse_op(std::string_view text);

struct Request {
    std::uint64_t id = 0;
    Op op = Op::Read;
    std::string question;
    std::string context;
    std::optional<std::string> prediction;
    std::vector<std::string> tokens;
};

struct Spans {
    std::vector<std::string> spans;
};
struct LabelPayload {
    Label label = Label::Wrong;
};
struct SpanText {
    std::string span;
};
struct Vectors {
    std::vector<Embedding> vectors;
};

using Payload = std::variant<Spans, LabelPayload, SpanText, SpanScores, Vectors>;

struct Response {
    std::uint64_t id = 0;
    std::optional<Payload> payload;
    std::optional<std::string> error;

    static Response failure(std::uint64_t id, std::string message) {
        return {id, std::nullopt, std::move(message)};
    }
};

/// Encoders never emit a trailing newline.
std::string encode(const Request& req);
std::string encode(const Response& resp);

/// Throws ProtocolError on malformed lines or missing op-specific fields.
Request decode_request(std::string_view line);

/// Decodes a response to a request of kind `op`: the payload must be the one
/// that op calls for, and exactly one of payload/error must be present.
Response decode_response(std::string_view line, Op op);

/// Whether `payload` is the kind of answer `op` calls for.
bool payload_matches(Op op, const Payload& payload);

}  // namespace acc::wire
