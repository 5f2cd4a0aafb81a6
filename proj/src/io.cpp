#include "andlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace andlab {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

JsonObject& JsonObject::put(const std::string& key, const std::string& v) {
  items_.emplace_back(key, "\"" + json_escape(v) + "\"");
  return *this;
}
JsonObject& JsonObject::put(const std::string& key, const char* v) {
  return put(key, std::string(v));
}
JsonObject& JsonObject::put(const std::string& key, double v) {
  // JSON has no nan/inf literals; quote them
  if (std::isnan(v) || std::isinf(v)) return put(key, format_double(v));
  items_.emplace_back(key, format_double(v));
  return *this;
}
JsonObject& JsonObject::put(const std::string& key, long long v) {
  items_.emplace_back(key, std::to_string(v));
  return *this;
}
JsonObject& JsonObject::put(const std::string& key, std::uint64_t v) {
  items_.emplace_back(key, std::to_string(v));
  return *this;
}
JsonObject& JsonObject::put(const std::string& key, bool v) {
  items_.emplace_back(key, v ? "true" : "false");
  return *this;
}
JsonObject& JsonObject::put_raw(const std::string& key, const std::string& raw) {
  items_.emplace_back(key, raw);
  return *this;
}
JsonObject& JsonObject::put(const std::string& key, const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += format_double(v[i]);
  }
  s += "]";
  return put_raw(key, s);
}
JsonObject& JsonObject::put(const std::string& key, const std::vector<long long>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  s += "]";
  return put_raw(key, s);
}

std::string JsonObject::str() const {
  std::string s = "{";
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (i) s += ",";
    s += "\"" + json_escape(items_[i].first) + "\":" + items_[i].second;
  }
  s += "}";
  return s;
}

Config Config::parse(const std::string& text) {
  Config c;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    line = strip(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = strip(line.substr(0, eq));
    const std::string val = strip(line.substr(eq + 1));
    if (key.empty()) throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key");
    c.kv[key] = val;
  }
  return c;
}

Config Config::load(const std::string& path) {
  auto text = read_text_file(path);
  if (!text) throw std::runtime_error("cannot read config file: " + path);
  return parse(*text);
}

std::string Config::get_string(const std::string& key) const {
  auto it = kv.find(key);
  if (it == kv.end()) throw std::runtime_error("missing required config key: " + key);
  return it->second;
}
std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}
long long Config::get_int(const std::string& key) const {
  const std::string s = get_string(key);
  std::size_t pos = 0;
  const long long v = std::stoll(s, &pos);
  if (pos != s.size()) throw std::runtime_error("config key " + key + ": not an integer: " + s);
  return v;
}
long long Config::get_int(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}
std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string s = get_string(key);
  std::size_t pos = 0;
  const std::uint64_t v = std::stoull(s, &pos);
  if (pos != s.size()) throw std::runtime_error("config key " + key + ": not an integer: " + s);
  return v;
}
double Config::get_real(const std::string& key) const {
  const std::string s = get_string(key);
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::runtime_error("config key " + key + ": not a number: " + s);
  return v;
}
double Config::get_real(const std::string& key, double fallback) const {
  return has(key) ? get_real(key) : fallback;
}
bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string s = get_string(key);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw std::runtime_error("config key " + key + ": not a boolean: " + s);
}
std::vector<long long> Config::get_int_list(const std::string& key) const {
  std::vector<long long> out;
  std::istringstream is(get_string(key));
  std::string tok;
  while (std::getline(is, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stoll(tok));
  }
  if (out.empty()) throw std::runtime_error("config key " + key + ": empty list");
  return out;
}

std::string Config::canonical() const {
  std::string s;
  for (const auto& [k, v] : kv) s += k + "=" + v + "\n";
  return s;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << content;
  if (!os) throw std::runtime_error("write failed: " + path);
}

std::optional<std::string> read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return std::nullopt;
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace andlab
