#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace crn {

using json = nlohmann::json;

/// Throws SchemaError naming the file when it is unreadable or not JSON.
json read_json_file(const std::filesystem::path& path);
/// Two-space indented, trailing newline, keys sorted; byte-stable for equal input.
void write_json_file(const std::filesystem::path& path, const json& doc);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Schema helpers: each throws SchemaError whose message names `path.key`.
const json& require_field(const json& obj, std::string_view key, std::string_view path);
std::string require_string(const json& obj, std::string_view key, std::string_view path);
double require_number(const json& obj, std::string_view key, std::string_view path);
const json& require_array(const json& obj, std::string_view key, std::string_view path);
bool optional_bool(const json& obj, std::string_view key, std::string_view path, bool fallback);

}  // namespace crn
