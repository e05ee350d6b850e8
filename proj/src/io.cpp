#include "gaudin/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gaudin/errors.hpp"

namespace gaudin {

namespace {

void dump_value(const nlohmann::ordered_json& v, std::ostringstream& out, int indent,
                int depth) {
    const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent) * depth, ' ');
    switch (v.type()) {
        case nlohmann::ordered_json::value_t::object: {
            if (v.empty()) {
                out << "{}";
                return;
            }
            out << "{\n";
            bool first = true;
            for (const auto& [key, item] : v.items()) {
                if (!first) out << ",\n";
                first = false;
                out << pad << nlohmann::ordered_json(key).dump() << ": ";
                dump_value(item, out, indent, depth + 1);
            }
            out << "\n" << close_pad << "}";
            return;
        }
        case nlohmann::ordered_json::value_t::array: {
            if (v.empty()) {
                out << "[]";
                return;
            }
            out << "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) out << ",\n";
                out << pad;
                dump_value(v[i], out, indent, depth + 1);
            }
            out << "\n" << close_pad << "]";
            return;
        }
        case nlohmann::ordered_json::value_t::number_float:
            out << format_double(v.get<double>());
            return;
        default:
            out << v.dump();
            return;
    }
}

} // namespace

std::string format_double(double value) {
    if (!std::isfinite(value)) return "null";
    char buffer[48];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

std::string dump_json(const nlohmann::ordered_json& value, int indent) {
    std::ostringstream out;
    dump_value(value, out, indent, 0);
    out << "\n";
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(errc::config_error, "cannot open output file " + path);
    out << content;
    if (!out) raise(errc::config_error, "failed writing " + path);
}

} // namespace gaudin
