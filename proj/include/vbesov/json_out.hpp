#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

namespace vbesov {

// "%.17g"; non-finite values print as inf, -inf, nan.
[[nodiscard]] std::string format_number(double v);

// Shortest text that reads back to v; for names, labels and messages.
[[nodiscard]] std::string short_number(double v);

// JSON text with every floating-point number at 17 significant digits and
// object keys in sorted order, so equal documents serialise to equal bytes.
// Non-finite numbers become the strings "inf", "-inf", "nan".
[[nodiscard]] std::string dump_json(const nlohmann::json& j, int indent = 2);

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);
// Throws ErrorKind::io when unreadable, ErrorKind::parse when malformed.
[[nodiscard]] nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace vbesov
