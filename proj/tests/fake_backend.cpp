// Misbehaving protocol peer for transport and failure-path tests.
//   fake_backend echo-label LABEL   answer every request with {"label": LABEL}
//   fake_backend wrong-id           reply with id + 1000
//   fake_backend garbage            reply with a non-JSON line
//   fake_backend hang               read requests, never reply
//   fake_backend exit               exit on the first request
//   fake_backend error              reply with an error field
//   fake_backend flaky N            answer correctly except every N-th request
#include <iostream>
#include <string>
#include <thread>

#include "acc/jsonl.hpp"

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: fake_backend MODE [ARG]\n";
        return 2;
    }
    const std::string mode = argv[1];
    const std::string arg = argc > 2 ? argv[2] : "";
    std::string line;
    std::size_t seen = 0;
    while (std::getline(std::cin, line)) {
        ++seen;
        const auto req = acc::Json::parse(line, nullptr, false);
        const auto id = req.is_object() ? req.value("id", 0ULL) : 0ULL;
        const auto op = req.is_object() ? req.value("op", std::string()) : std::string();
        acc::Json resp = {{"id", id}};
        if (mode == "hang") {
            continue;
        }
        if (mode == "exit") {
            return 0;
        }
        if (mode == "garbage") {
            std::cout << "this is not json" << std::endl;
            continue;
        }
        if (mode == "wrong-id") {
            resp["id"] = id + 1000;
        }
        if (mode == "error" || (mode == "flaky" && seen % std::stoul(arg) == 0)) {
            resp["error"] = "model exploded";
        } else if (op == "classify") {
            resp["label"] = mode == "echo-label" ? arg : "correct";
        } else if (op == "correct") {
            resp["span"] = req.value("prediction", std::string());
        } else if (op == "read") {
            resp["spans"] = acc::Json::array();
        } else if (op == "embed") {
            resp["vectors"] = acc::Json::array();
            for (std::size_t i = 0; i < req["tokens"].size(); ++i) {
                resp["vectors"].push_back({1.0, 0.0});
            }
        }
        std::cout << resp.dump() << std::endl;
    }
    return 0;
}
