#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace wavestab::cli {

// Every float in CSV and JSON output goes through this formatter (17
// significant digits, C locale), so reruns are byte-identical.
std::string fmt17(double x);

// Minimal streaming JSON emitter preserving insertion order and pretty
// printing with two-space indent. The vendored reader is only used for
// parsing configs; its writer re-rounds doubles.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view k);
  JsonWriter& value(double x);  // non-finite values serialize as null
  JsonWriter& value(int x);
  JsonWriter& value(bool b);
  JsonWriter& value(std::string_view s);
  // const char* would otherwise take the bool overload
  JsonWriter& value(const char* s) { return value(std::string_view(s)); }
  JsonWriter& null();

  JsonWriter& kv(std::string_view k, double x) { return key(k).value(x); }
  JsonWriter& kv(std::string_view k, int x) { return key(k).value(x); }
  JsonWriter& kv(std::string_view k, bool b) { return key(k).value(b); }
  JsonWriter& kv(std::string_view k, std::string_view s) {
    return key(k).value(s);
  }
  JsonWriter& kv(std::string_view k, const char* s) {
    return key(k).value(std::string_view(s));
  }

  const std::string& str() const { return buf_; }

 private:
  void separate();
  void indent();

  std::string buf_;
  std::vector<bool> has_items_;
  bool pending_key_ = false;
};

std::string json_escape(std::string_view s);

// RFC 4180 quoting: the field is wrapped in double quotes when it
// contains a comma, a quote or a line break.
std::string csv_field(std::string_view raw);
std::string csv_row(const std::vector<std::string>& fields);

std::string iso8601_utc_now();

// One-object error document shared by stderr and <out>/error.json.
std::string error_json(std::string_view code, std::string_view message,
                       std::string_view command, int exit_code);

void write_file(const std::filesystem::path& path, const std::string& data);

}  // namespace wavestab::cli
