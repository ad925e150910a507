#include "vbesov/json_out.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "vbesov/error.hpp"

namespace vbesov {

namespace {

void emit(const nlohmann::json& j, int indent, int depth, std::string& out) {
    const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
    const std::string pad_close = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
    const char* nl = indent > 0 ? "\n" : "";
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{";
            out += nl;
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {   // nlohmann::json keeps keys sorted
                if (!first) {
                    out += ",";
                    out += nl;
                }
                first = false;
                out += pad;
                out += nlohmann::json(it.key()).dump();
                out += indent > 0 ? ": " : ":";
                emit(it.value(), indent, depth + 1, out);
            }
            out += nl;
            out += pad_close;
            out += "}";
            return;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[";
            out += nl;
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) {
                    out += ",";
                    out += nl;
                }
                out += pad;
                emit(j[i], indent, depth + 1, out);
            }
            out += nl;
            out += pad_close;
            out += "]";
            return;
        }
        case nlohmann::json::value_t::number_float: {
            const double v = j.get<double>();
            if (std::isfinite(v)) out += format_number(v);
            else out += "\"" + format_number(v) + "\"";
            return;
        }
        default:
            out += j.dump();
    }
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string short_number(double v) {
    if (!std::isfinite(v)) return format_number(v);
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string dump_json(const nlohmann::json& j, int indent) {
    std::string out;
    emit(j, indent, 0, out);
    return out;
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
    write_text_file(path, dump_json(j) + "\n");
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path);
    require(static_cast<bool>(os), ErrorKind::io, "cannot open " + path.string() + " for writing");
    os << text;
    require(static_cast<bool>(os), ErrorKind::io, "write failed for " + path.string());
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    require(static_cast<bool>(is), ErrorKind::io, "cannot open " + path.string());
    try {
        return nlohmann::json::parse(is);
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorKind::parse, path.string() + ": " + e.what());
    }
}

}  // namespace vbesov
