#pragma once
// JSON writer that prints every number with 17 significant digits (nlohmann's
// own dump uses the shortest round-trip form) and infinities as "Infinity".

#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

namespace gdd::detail {

inline void dump17(const nlohmann::json& j, std::string& out, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) { out += "{}"; return; }
      out += '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += nlohmann::json(k).dump();
        out += indent < 0 ? ":" : ": ";
        dump17(v, out, indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) { out += "[]"; return; }
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        newline(depth + 1);
        dump17(j[i], out, indent, depth + 1);
      }
      newline(depth);
      out += ']';
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isinf(v)) {
        out += v > 0 ? "\"Infinity\"" : "\"-Infinity\"";
      } else if (std::isnan(v)) {
        out += "null";
      } else {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out += buf;
      }
      return;
    }
    default:
      out += j.dump();
  }
}

inline std::string dump17(const nlohmann::json& j, int indent = 2) {
  std::string out;
  dump17(j, out, indent, 0);
  return out;
}

}  // namespace gdd::detail
