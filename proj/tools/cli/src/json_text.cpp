#include "mwk_cli/json_text.hpp"

#include <cmath>
#include <cstdio>

namespace mwk::cli {

std::string format17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

bool is_scalar(const nlohmann::json& j) { return !j.is_object() && !j.is_array(); }

void emit(const nlohmann::json& j, int indent, int depth, std::string& s) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  if (j.is_number_float()) {
    const double x = j.get<double>();
    s += std::isfinite(x) ? format17(x) : "null";
  } else if (is_scalar(j)) {
    s += j.dump();
  } else if (j.is_array()) {
    if (j.empty()) {
      s += "[]";
      return;
    }
    bool flat = true;
    for (const auto& e : j) flat = flat && is_scalar(e);
    s += '[';
    bool first = true;
    for (const auto& e : j) {
      if (!first) s += flat ? ", " : ",";
      if (!flat) s += '\n' + pad;
      emit(e, indent, depth + 1, s);
      first = false;
    }
    if (!flat) s += '\n' + close_pad;
    s += ']';
  } else {
    if (j.empty()) {
      s += "{}";
      return;
    }
    s += '{';
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) s += ',';
      s += '\n' + pad + nlohmann::json(it.key()).dump() + ": ";
      emit(it.value(), indent, depth + 1, s);
      first = false;
    }
    s += '\n' + close_pad + '}';
  }
}

}  // namespace

std::string dump17(const nlohmann::json& j, int indent) {
  std::string s;
  emit(j, indent, 0, s);
  return s;
}

}  // namespace mwk::cli
