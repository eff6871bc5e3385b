#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>

#include "json.hpp"

namespace acc {

using Json = nlohmann::json;

/// Calls fn(record, line_number) for every non-blank line. Parse failures and
/// exceptions escaping fn become InputError tagged with source:line.
void for_each_json_line(std::istream& in, const std::string& source,
                        const std::function<void(const Json&, std::size_t)>& fn);

/// Compact single-line dump followed by '\n'.
void write_json_line(std::ostream& out, const Json& record);

/// Field accessors that throw InputError naming the missing or mistyped key.
const Json& require_field(const Json& record, const char* key);
std::string require_string(const Json& record, const char* key);

}  // namespace acc
