#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace andlab {

/// 17 significant digits: round-trips every double and keeps outputs
/// byte-stable across runs.
std::string format_double(double v);

/// Minimal JSON value emitter for the JSONL outputs (objects with string,
/// integer, double, bool and flat-array values; no parsing).
class JsonObject {
 public:
  JsonObject& put(const std::string& key, const std::string& v);
  JsonObject& put(const std::string& key, const char* v);
  JsonObject& put(const std::string& key, double v);
  JsonObject& put(const std::string& key, long long v);
  JsonObject& put(const std::string& key, int v) { return put(key, static_cast<long long>(v)); }
  JsonObject& put(const std::string& key, std::uint64_t v);
  JsonObject& put(const std::string& key, bool v);
  JsonObject& put_raw(const std::string& key, const std::string& raw_json);
  JsonObject& put(const std::string& key, const std::vector<double>& v);
  JsonObject& put(const std::string& key, const std::vector<long long>& v);

  std::string str() const;  // one-line JSON object

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

std::string json_escape(const std::string& s);

/// Flat key=value configuration, one pair per line, '#' starts a comment.
struct Config {
  std::map<std::string, std::string> kv;

  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return kv.count(key) > 0; }
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  double get_real(const std::string& key) const;
  double get_real(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<long long> get_int_list(const std::string& key) const;  // comma separated

  /// Render back to canonical text (sorted keys), for output headers.
  std::string canonical() const;
};

void write_text_file(const std::string& path, const std::string& content);
std::optional<std::string> read_text_file(const std::string& path);

}  // namespace andlab
