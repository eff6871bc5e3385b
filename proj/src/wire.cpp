#include "acc/wire.hpp"

#include "acc/error.hpp"
#include "acc/jsonl.hpp"

namespace acc::wire {

std::string_view to_string(Op op) {
    switch (op) {
        case Op::Read:
            return "read";
        case Op::Classify:
            return "classify";
        case Op::Correct:
            return "correct";
        case Op::Embed:
            return "embed";
    }
    return "read";
}

std::optional<Op> parse_op(std::string_view text) {
    for (const Op op : {Op::Read, Op::Classify, Op::Correct, Op::Embed}) {
        if (text == to_string(op)) {
            return op;
        }
    }
    return std::nullopt;
}

namespace {

std::string dump(const Json& j) {
    return j.dump(-1, ' ', false, Json::error_handler_t::replace);
}

Json parse_object(std::string_view line) {
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw ProtocolError("malformed protocol line: " + std::string(line.substr(0, 200)));
    }
    return j;
}

std::uint64_t parse_id(const Json& j) {
    const auto it = j.find("id");
    if (it == j.end() || !it->is_number_unsigned()) {
        throw ProtocolError("protocol line lacks a non-negative integer id");
    }
    return it->get<std::uint64_t>();
}

std::string string_field(const Json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_string()) {
        throw ProtocolError(std::string("protocol field \"") + key + "\" missing or not a string");
    }
    return it->get<std::string>();
}

std::vector<double> number_list(const Json& j, const char* key) {
    if (!j.is_array()) {
        throw ProtocolError(std::string("protocol field \"") + key + "\" must be a list of numbers");
    }
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number()) {
            throw ProtocolError(std::string("protocol field \"") + key + "\" must be a list of numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<std::string> text_list(const Json& j, const char* key) {
    if (!j.is_array()) {
        throw ProtocolError(std::string("protocol field \"") + key + "\" must be a list of strings");
    }
    std::vector<std::string> out;
    for (const auto& v : j) {
        if (!v.is_string()) {
            throw ProtocolError(std::string("protocol field \"") + key + "\" must be a list of strings");
        }
        out.push_back(v.get<std::string>());
    }
    return out;
}

}  // namespace

std::string encode(const Request& req) {
    Json j = {{"id", req.id}, {"op", to_string(req.op)}};
    if (req.op == Op::Embed) {
        j["tokens"] = req.tokens;
    } else {
        j["question"] = req.question;
        j["context"] = req.context;
        if (req.prediction) {
            j["prediction"] = *req.prediction;
        }
    }
    return dump(j);
}

Request decode_request(std::string_view line) {
    const Json j = parse_object(line);
    Request req;
    req.id = parse_id(j);
    const auto op = parse_op(string_field(j, "op"));
    if (!op) {
        throw ProtocolError("unknown op");
    }
    req.op = *op;
    if (req.op == Op::Embed) {
        const auto it = j.find("tokens");
        if (it == j.end()) {
            throw ProtocolError("embed request lacks tokens");
        }
        req.tokens = text_list(*it, "tokens");
        return req;
    }
    req.question = string_field(j, "question");
    req.context = string_field(j, "context");
    if (req.op == Op::Classify || req.op == Op::Correct) {
        req.prediction = string_field(j, "prediction");
    }
    return req;
}

std::string encode(const Response& resp) {
    Json j = {{"id", resp.id}};
    if (resp.error) {
        j["error"] = *resp.error;
        return dump(j);
    }
    if (!resp.payload) {
        j["error"] = "empty response";
        return dump(j);
    }
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Spans>) {
                j["spans"] = p.spans;
            } else if constexpr (std::is_same_v<T, LabelPayload>) {
                j["label"] = to_string(p.label);
            } else if constexpr (std::is_same_v<T, SpanText>) {
                j["span"] = p.span;
            } else if constexpr (std::is_same_v<T, SpanScores>) {
                j["st"] = p.st;
                j["ed"] = p.ed;
            } else {
                j["vectors"] = p.vectors;
            }
        },
        *resp.payload);
    return dump(j);
}

bool payload_matches(Op op, const Payload& payload) {
    switch (op) {
        case Op::Read:
            return std::holds_alternative<Spans>(payload);
        case Op::Classify:
            return std::holds_alternative<LabelPayload>(payload);
        case Op::Correct:
            return std::holds_alternative<SpanText>(payload) || std::holds_alternative<SpanScores>(payload);
        case Op::Embed:
            return std::holds_alternative<Vectors>(payload);
    }
    return false;
}

Response decode_response(std::string_view line, Op op) {
    const Json j = parse_object(line);
    Response resp;
    resp.id = parse_id(j);

    const bool has_error = j.contains("error");
    const bool has_payload = j.contains("spans") || j.contains("label") || j.contains("span") ||
                             j.contains("st") || j.contains("ed") || j.contains("vectors");
    if (has_error == has_payload) {
        throw ProtocolError("response must carry exactly one of payload or error");
    }
    if (has_error) {
        resp.error = j["error"].is_string() ? j["error"].get<std::string>() : j["error"].dump();
        return resp;
    }

    switch (op) {
        case Op::Read:
            if (!j.contains("spans")) {
                throw ProtocolError("read response lacks spans");
            }
            resp.payload = Spans{text_list(j["spans"], "spans")};
            break;
        case Op::Classify: {
            const auto label = parse_label(string_field(j, "label"));
            if (!label) {
                throw ProtocolError("label must be one of correct, partially, wrong");
            }
            resp.payload = LabelPayload{*label};
            break;
        }
        case Op::Correct:
            if (j.contains("span")) {
                resp.payload = SpanText{string_field(j, "span")};
            } else if (j.contains("st") && j.contains("ed")) {
                resp.payload = SpanScores{number_list(j["st"], "st"), number_list(j["ed"], "ed")};
            } else {
                throw ProtocolError("correct response needs span, or st and ed");
            }
            break;
        case Op::Embed: {
            if (!j.contains("vectors") || !j["vectors"].is_array()) {
                throw ProtocolError("embed response lacks vectors");
            }
            Vectors v;
            for (const auto& row : j["vectors"]) {
                v.vectors.push_back(number_list(row, "vectors"));
            }
            resp.payload = std::move(v);
            break;
        }
    }
    return resp;
}

}  // namespace acc::wire
