#include "cli/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "wavestab/errors.hpp"

namespace wavestab::cli {

std::string fmt17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string json_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

void JsonWriter::indent() {
  buf_ += '\n';
  buf_.append(2 * has_items_.size(), ' ');
}

void JsonWriter::separate() {
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (has_items_.empty()) return;
  if (has_items_.back()) buf_ += ',';
  has_items_.back() = true;
  indent();
}

JsonWriter& JsonWriter::begin_object() {
  separate();
  buf_ += '{';
  has_items_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  bool had = has_items_.back();
  has_items_.pop_back();
  if (had) indent();
  buf_ += '}';
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  separate();
  buf_ += '[';
  has_items_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  bool had = has_items_.back();
  has_items_.pop_back();
  if (had) indent();
  buf_ += ']';
  return *this;
}

JsonWriter& JsonWriter::key(std::string_view k) {
  separate();
  buf_ += '"';
  buf_ += json_escape(k);
  buf_ += "\": ";
  pending_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double x) {
  separate();
  buf_ += std::isfinite(x) ? fmt17(x) : "null";
  return *this;
}

JsonWriter& JsonWriter::value(int x) {
  separate();
  buf_ += std::to_string(x);
  return *this;
}

JsonWriter& JsonWriter::value(bool b) {
  separate();
  buf_ += b ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::value(std::string_view s) {
  separate();
  buf_ += '"';
  buf_ += json_escape(s);
  buf_ += '"';
  return *this;
}

JsonWriter& JsonWriter::null() {
  separate();
  buf_ += "null";
  return *this;
}

std::string csv_field(std::string_view raw) {
  if (raw.find_first_of(",\"\n\r") == std::string_view::npos)
    return std::string(raw);
  std::string out = "\"";
  for (char c : raw) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string row;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) row += ',';
    row += csv_field(fields[i]);
  }
  row += '\n';
  return row;
}

std::string iso8601_utc_now() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string error_json(std::string_view code, std::string_view message,
                       std::string_view command, int exit_code) {
  JsonWriter w;
  w.begin_object();
  w.key("error").begin_object();
  w.kv("code", code);
  w.kv("message", message);
  w.kv("command", command);
  w.kv("exit_code", exit_code);
  w.end_object();
  w.end_object();
  return w.str() + "\n";
}

void write_file(const std::filesystem::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::ConfigError, "cannot open " + path.string() + " for writing");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) fail(ErrorCode::ConfigError, "short write to " + path.string());
}

}  // namespace wavestab::cli
