#include "crn/util/json_io.hpp"

#include "crn/errors.hpp"

#include <fstream>
#include <sstream>

namespace crn {
namespace {

std::string field_path(std::string_view path, std::string_view key) {
  if (path.empty()) return std::string(key);
  return std::string(path) + "." + std::string(key);
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot read file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write file " + path.string());
  out << text;
}

json read_json_file(const std::filesystem::path& path) {
  auto text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string() + ": not valid JSON: " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
}

const json& require_field(const json& obj, std::string_view key, std::string_view path) {
  if (!obj.is_object()) throw SchemaError(std::string(path.empty() ? "document" : path) + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(field_path(path, key) + ": missing field");
  return *it;
}

std::string require_string(const json& obj, std::string_view key, std::string_view path) {
  const auto& v = require_field(obj, key, path);
  if (!v.is_string()) throw SchemaError(field_path(path, key) + ": expected a string");
  return v.get<std::string>();
}

double require_number(const json& obj, std::string_view key, std::string_view path) {
  const auto& v = require_field(obj, key, path);
  if (!v.is_number()) throw SchemaError(field_path(path, key) + ": expected a number");
  return v.get<double>();
}

const json& require_array(const json& obj, std::string_view key, std::string_view path) {
  const auto& v = require_field(obj, key, path);
  if (!v.is_array()) throw SchemaError(field_path(path, key) + ": expected an array");
  return v;
}

bool optional_bool(const json& obj, std::string_view key, std::string_view path, bool fallback) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  if (!it->is_boolean()) throw SchemaError(field_path(path, key) + ": expected a boolean");
  return it->get<bool>();
}

}  // namespace crn
