#include "xsblab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "xsblab/errors.hpp"
#include "xsblab/format.hpp"
#include "xsblab/lattice.hpp"

namespace xsb {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_key(std::string_view k) {
  if (k.empty()) return false;
  return std::all_of(k.begin(), k.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

ConfigError bad(std::string_view key, std::string_view value, const char* what) {
  return ConfigError("key '" + std::string(key) + "': " + what + ", got '" + std::string(value) + "'");
}

std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < v.size()) {
    while (i < v.size() && (v[i] == ',' || v[i] == ' ' || v[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < v.size() && v[j] != ',' && v[j] != ' ' && v[j] != '\t') ++j;
    if (j > i) out.push_back(v.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

double parse_double(std::string_view key, std::string_view value) {
  const std::string_view v = trim(value);
  double x = 0.0;
  const char* end = v.data() + v.size();
  const char* begin = v.data();
  if (!v.empty() && v.front() == '+') ++begin;
  auto [p, ec] = std::from_chars(begin, end, x);
  if (ec != std::errc() || p != end || v.empty()) throw bad(key, value, "expected a number");
  if (!std::isfinite(x)) throw bad(key, value, "expected a finite number");
  return x;
}

int parse_int(std::string_view key, std::string_view value) {
  const std::string_view v = trim(value);
  int x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty()) throw bad(key, value, "expected an integer");
  return x;
}

std::uint64_t parse_u64(std::string_view key, std::string_view value) {
  const std::string_view v = trim(value);
  std::uint64_t x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty())
    throw bad(key, value, "expected a non-negative integer");
  return x;
}

bool parse_bool(std::string_view key, std::string_view value) {
  const std::string_view v = trim(value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw bad(key, value, "expected true or false");
}

std::vector<int> parse_int_list(std::string_view key, std::string_view value) {
  std::vector<int> out;
  for (auto part : split_list(value)) out.push_back(parse_int(key, part));
  if (out.empty()) throw bad(key, value, "expected a list of integers");
  return out;
}

std::vector<double> parse_double_list(std::string_view key, std::string_view value) {
  std::vector<double> out;
  for (auto part : split_list(value)) out.push_back(parse_double(key, part));
  if (out.empty()) throw bad(key, value, "expected a list of numbers");
  return out;
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  std::string block;  // "" at top level
  std::map<std::string, std::string>* target = nullptr;
  bool seen_geometry = false, seen_params = false, seen_kind = false, seen_output = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    line = trim(line);
    if (line.empty()) continue;
    if (line == "}") {
      if (block.empty()) throw ConfigError(where + "unmatched '}'");
      block.clear();
      target = nullptr;
      continue;
    }
    if (line.back() == '{') {
      const std::string name(trim(line.substr(0, line.size() - 1)));
      if (!block.empty()) throw ConfigError(where + "nested block '" + name + "' inside '" + block + "'");
      if (name == "geometry") {
        if (seen_geometry) throw ConfigError(where + "duplicate block 'geometry'");
        seen_geometry = true;
        c.geometry.emplace();
        target = &c.geometry->keys;
      } else if (name == "params") {
        if (seen_params) throw ConfigError(where + "duplicate block 'params'");
        seen_params = true;
        target = &c.params;
      } else {
        throw ConfigError(where + "unknown block '" + name + "'");
      }
      block = name;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value', got '" + std::string(line) + "'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!valid_key(key)) throw ConfigError(where + "invalid key '" + key + "'");
    if (value.empty()) throw ConfigError(where + "key '" + key + "' has an empty value");
    if (block == "geometry") {
      if (std::find(geometry_keys().begin(), geometry_keys().end(), key) == geometry_keys().end())
        throw ConfigError(where + "unknown geometry key '" + key + "'");
    }
    if (target) {
      if (!target->emplace(key, value).second) throw ConfigError(where + "duplicate key '" + key + "'");
      continue;
    }
    if (key == "kind") {
      if (seen_kind) throw ConfigError(where + "duplicate key 'kind'");
      seen_kind = true;
      c.kind = value;
    } else if (key == "seed") {
      if (c.seed) throw ConfigError(where + "duplicate key 'seed'");
      c.seed = parse_u64(key, value);
    } else if (key == "output") {
      if (seen_output) throw ConfigError(where + "duplicate key 'output'");
      seen_output = true;
      c.output = value;
    } else {
      throw ConfigError(where + "unknown key '" + key + "'");
    }
  }
  if (!block.empty()) throw ConfigError("unterminated block '" + block + "'");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_config_text(const ExperimentConfig& c) {
  std::string out;
  if (!c.kind.empty()) out += "kind = " + c.kind + "\n";
  if (c.seed) out += "seed = " + std::to_string(*c.seed) + "\n";
  if (!c.output.empty()) out += "output = " + c.output + "\n";
  if (c.geometry) {
    out += "geometry {\n";
    for (const auto& k : geometry_keys())
      if (auto it = c.geometry->keys.find(k); it != c.geometry->keys.end()) out += "  " + k + " = " + it->second + "\n";
    out += "}\n";
  }
  if (!c.params.empty()) {
    out += "params {\n";
    for (const auto& [k, v] : c.params) out += "  " + k + " = " + v + "\n";
    out += "}\n";
  }
  return out;
}

GeometrySpec geometry_from_block(const GeometryBlock& b, bool spatial_only) {
  auto need = [&](const std::string& k) -> const std::string& {
    auto it = b.keys.find(k);
    if (it == b.keys.end()) throw ConfigError("geometry block is missing key '" + k + "'");
    return it->second;
  };
  GeometrySpec g;
  g.kind = parse_domain_kind(need("domain_kind"));
  g.modes = parse_int("modes_per_axis", need("modes_per_axis"));
  g.xi_spacing = parse_double("xi_spacing", need("xi_spacing"));
  if (spatial_only && !b.keys.count("tau_count") && !b.keys.count("tau_spacing")) {
    g.tau_count = 2;
    g.tau_spacing = 1.0;
  } else {
    g.tau_count = parse_int("tau_count", need("tau_count"));
    g.tau_spacing = parse_double("tau_spacing", need("tau_spacing"));
  }
  return g;
}

GeometryBlock geometry_to_block(const GeometrySpec& g) {
  GeometryBlock b;
  b.keys["domain_kind"] = std::string(to_string(g.kind));
  b.keys["modes_per_axis"] = std::to_string(g.modes);
  b.keys["xi_spacing"] = format_short(g.xi_spacing);
  b.keys["tau_count"] = std::to_string(g.tau_count);
  b.keys["tau_spacing"] = format_short(g.tau_spacing);
  return b;
}

}  // namespace xsb
