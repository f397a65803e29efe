#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace singtrace {

using Json = nlohmann::ordered_json;

/// Doubles as %.17g; ±inf and nan as the strings "inf", "-inf", "nan".
Json number(double v);
/// Pretty-printed text with 17 significant digits for every float.
std::string dump_json(const Json& j, int indent = 2);
/// Reads a double written by number(): a JSON number or one of the strings.
double read_number(const Json& j);

}  // namespace singtrace
