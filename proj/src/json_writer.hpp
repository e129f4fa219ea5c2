#pragma once

// Minimal streaming JSON emitter. Doubles are written with 17 significant
// digits so identical runs produce byte-identical documents; non-finite
// values become null.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace halflap::cli {

class JsonWriter {
 public:
  explicit JsonWriter(std::ostream& os) : os_(os) {}

  JsonWriter& begin_object() { return open('{'); }
  JsonWriter& end_object() { return close('}'); }
  JsonWriter& begin_array() { return open('['); }
  JsonWriter& end_array() { return close(']'); }

  JsonWriter& key(std::string_view k) {
    separate();
    write_string(k);
    os_ << ": ";
    pending_key_ = true;
    return *this;
  }

  JsonWriter& value(double v) {
    prefix();
    if (!std::isfinite(v)) {
      os_ << "null";
    } else {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      os_ << buf;
    }
    return *this;
  }
  JsonWriter& value(int v) {
    prefix();
    os_ << v;
    return *this;
  }
  JsonWriter& value(bool v) {
    prefix();
    os_ << (v ? "true" : "false");
    return *this;
  }
  JsonWriter& value(std::string_view v) {
    prefix();
    write_string(v);
    return *this;
  }
  JsonWriter& value(const char* v) { return value(std::string_view(v)); }
  JsonWriter& value(std::span<const double> v) {
    prefix();
    os_ << '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) os_ << ", ";
      // Reuse scalar formatting without the separator bookkeeping.
      if (!std::isfinite(v[i])) {
        os_ << "null";
      } else {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v[i]);
        os_ << buf;
      }
    }
    os_ << ']';
    return *this;
  }

  template <typename T>
  JsonWriter& field(std::string_view k, const T& v) {
    key(k);
    return value(v);
  }

  void finish() { os_ << '\n'; }

 private:
  JsonWriter& open(char c) {
    prefix();
    os_ << c;
    first_.push_back(true);
    return *this;
  }
  JsonWriter& close(char c) {
    const bool empty = first_.back();
    first_.pop_back();
    if (!empty) newline();
    os_ << c;
    return *this;
  }
  void newline() {
    os_ << '\n';
    for (std::size_t i = 0; i < first_.size(); ++i) os_ << "  ";
  }
  // Comma and indentation before an array element or object key.
  void separate() {
    if (first_.empty()) return;
    if (!first_.back()) os_ << ',';
    first_.back() = false;
    newline();
  }
  void prefix() {
    if (pending_key_) {
      pending_key_ = false;
      return;
    }
    separate();
  }
  void write_string(std::string_view s) {
    os_ << '"';
    for (char c : s) {
      switch (c) {
        case '"': os_ << "\\\""; break;
        case '\\': os_ << "\\\\"; break;
        case '\n': os_ << "\\n"; break;
        case '\t': os_ << "\\t"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            os_ << buf;
          } else {
            os_ << c;
          }
      }
    }
    os_ << '"';
  }

  std::ostream& os_;
  std::vector<bool> first_;
  bool pending_key_ = false;
};

}  // namespace halflap::cli
