#pragma once

#include <string>

#include <json.hpp>

namespace gaudin {

/// 17 significant digits: enough to round-trip any double, and stable across
/// reruns so output files diff cleanly.
std::string format_double(double value);

/// Serialize with insertion-ordered keys and format_double for every float,
/// independent of library defaults.
std::string dump_json(const nlohmann::ordered_json& value, int indent = 2);

void write_text_file(const std::string& path, const std::string& content);

} // namespace gaudin
