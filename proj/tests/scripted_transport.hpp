#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "acc/error.hpp"
#include "acc/jsonl.hpp"
#include "acc/transport.hpp"

namespace testutil {

// In-memory peer: every sent line is recorded and handed to `reply`, whose
// result is queued for the next receive. Returning nullopt simulates a hang.
class ScriptedTransport final : public acc::LineTransport {
public:
    using Reply = std::function<std::optional<std::string>(const acc::Json& request)>;

    explicit ScriptedTransport(Reply reply) : reply_(std::move(reply)) {}

    void send_line(std::string_view line) override {
        if (closed) {
            throw acc::ProtocolError("peer closed");
        }
        sent.emplace_back(line);
        pending_.push_back(reply_(acc::Json::parse(line)));
    }

    std::optional<std::string> receive_line(std::chrono::milliseconds) override {
        if (closed) {
            throw acc::ProtocolError("peer closed");
        }
        if (pending_.empty()) {
            return std::nullopt;
        }
        auto next = pending_.front();
        pending_.pop_front();
        return next;
    }

    std::vector<std::string> sent;
    bool closed = false;

private:
    Reply reply_;
    std::deque<std::optional<std::string>> pending_;
};

inline std::string reply_with(const acc::Json& request, acc::Json body) {
    body["id"] = request["id"];
    return body.dump();
}

}  // namespace testutil
