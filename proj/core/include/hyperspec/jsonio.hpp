#pragma once

// Deterministic serialization: floating-point values rendered with 17
// significant digits (round-trip exact), keys in insertion order, no
// locale dependence.  Two runs on the same data produce identical bytes.

#include <string>

#include <nlohmann/json.hpp>

namespace hyperspec {

// %.17g rendering of a double; NaN and infinities map to "null".
std::string fmt17(double value);

// Pretty-printed JSON with fmt17 for every floating-point scalar.
std::string dump_deterministic(const nlohmann::ordered_json& doc, int indent = 2);

// dump_deterministic plus a trailing newline, written atomically enough for
// our purposes (single write).  Throws std::runtime_error when unwritable.
void write_json_file(const std::string& path, const nlohmann::ordered_json& doc);

}  // namespace hyperspec
