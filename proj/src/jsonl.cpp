#include "acc/jsonl.hpp"

#include <istream>
#include <ostream>

#include "acc/error.hpp"

namespace acc {

void for_each_json_line(std::istream& in, const std::string& source,
                        const std::function<void(const Json&, std::size_t)>& fn) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        Json record;
        try {
            record = Json::parse(line);
        } catch (const Json::exception& e) {
            throw InputError(source + ":" + std::to_string(line_no) + ": malformed JSON: " + e.what());
        }
        try {
            fn(record, line_no);
        } catch (const InputError& e) {
            throw InputError(source + ":" + std::to_string(line_no) + ": " + e.what());
        } catch (const Json::exception& e) {
            throw InputError(source + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

void write_json_line(std::ostream& out, const Json& record) {
    out << record.dump(-1, ' ', false, Json::error_handler_t::replace) << '\n';
}

const Json& require_field(const Json& record, const char* key) {
    if (!record.is_object()) {
        throw InputError("expected a JSON object");
    }
    const auto it = record.find(key);
    if (it == record.end()) {
        throw InputError(std::string("missing field \"") + key + "\"");
    }
    return *it;
}

std::string require_string(const Json& record, const char* key) {
    const Json& v = require_field(record, key);
    if (!v.is_string()) {
        throw InputError(std::string("field \"") + key + "\" must be a string");
    }
    return v.get<std::string>();
}

}  // namespace acc
