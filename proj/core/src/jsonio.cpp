#include "hyperspec/jsonio.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace hyperspec {

std::string fmt17(double value) {
  if (!std::isfinite(value)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

void dump_value(const nlohmann::ordered_json& v, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent) * depth, ' ');
  switch (v.type()) {
    case nlohmann::json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, child] : v.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        out += nlohmann::json(key).dump();  // escaped key
        out += ": ";
        dump_value(child, out, indent, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& child : v) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        dump_value(child, out, indent, depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case nlohmann::json::value_t::number_float:
      out += fmt17(v.get<double>());
      return;
    default:
      // Integers, booleans, strings, null: nlohmann's own rendering is
      // already deterministic.
      out += v.dump();
      return;
  }
}

}  // namespace

std::string dump_deterministic(const nlohmann::ordered_json& doc, int indent) {
  std::string out;
  dump_value(doc, out, indent, 0);
  return out;
}

void write_json_file(const std::string& path, const nlohmann::ordered_json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << dump_deterministic(doc) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace hyperspec
