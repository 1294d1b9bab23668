#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace snf {

/// Doubles in output files carry 17 significant digits (round-trip exact).
inline std::string fmt17(double x) {
  if (std::isnan(x)) return "null";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

/// Minimal streaming JSON writer with caller-controlled field order, so
/// outputs are byte-deterministic.
class JsonWriter {
 public:
  JsonWriter& begin_object() { return token("{", true); }
  JsonWriter& end_object() { return close("}"); }
  JsonWriter& begin_array() { return token("[", true); }
  JsonWriter& end_array() { return close("]"); }

  JsonWriter& key(std::string_view k) {
    comma();
    quote(k);
    out_ += ':';
    pending_value_ = true;
    return *this;
  }

  JsonWriter& value(double x) { return raw(fmt17(x)); }
  JsonWriter& value(bool b) { return raw(b ? "true" : "false"); }
  JsonWriter& value(std::uint64_t v) { return raw(std::to_string(v)); }
  JsonWriter& value(std::int64_t v) { return raw(std::to_string(v)); }
  JsonWriter& value(int v) { return raw(std::to_string(v)); }
  JsonWriter& value(std::string_view s) {
    comma();
    quote(s);
    return *this;
  }
  JsonWriter& null() { return raw("null"); }
  /// Splice pre-serialized JSON as one value.
  JsonWriter& raw_json(std::string_view s) { return raw(s); }

  const std::string& str() const { return out_; }

 private:
  JsonWriter& raw(std::string_view s) {
    comma();
    out_ += s;
    return *this;
  }
  JsonWriter& token(std::string_view t, bool push) {
    comma();
    out_ += t;
    if (push) stack_.push_back(true);
    return *this;
  }
  JsonWriter& close(std::string_view t) {
    out_ += t;
    stack_.pop_back();
    return *this;
  }
  void comma() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (!stack_.empty()) {
      if (!stack_.back())
        out_ += ',';
      else
        stack_.back() = false;
    }
  }
  void quote(std::string_view s) {
    out_ += '"';
    for (char ch : s) {
      switch (ch) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        default:
          if ((unsigned char)ch < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
            out_ += buf;
          } else {
            out_ += ch;
          }
      }
    }
    out_ += '"';
  }

  std::string out_;
  std::vector<bool> stack_;  // true = next element is the first in scope
  bool pending_value_ = false;
};

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : s) {
    h ^= (unsigned char)c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace snf
