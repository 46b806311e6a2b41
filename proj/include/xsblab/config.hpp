#pragma once

// Experiment configuration files.
//
//   # comment
//   kind = quotient
//   seed = 7
//   output = thm41.csv
//   geometry {
//     domain_kind = torus_1d
//     modes_per_axis = 16
//     xi_spacing = 1
//     tau_count = 260
//     tau_spacing = 0.5
//   }
//   params {
//     case = thm41
//     s = -0.3
//   }
//
// One `key = value` per line, blocks opened by `name {` and closed by `}`.
// Top-level keys: kind, seed, output. Blocks: geometry, params. Values run to
// the end of the line (a trailing # comment is stripped). Duplicate and
// unknown keys are errors. A counterexample run may give the geometry block
// as `schedule = minimal` to use the smallest lattice per family member.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xsblab/estimates.hpp"

namespace xsb {

struct GeometryBlock {
  std::map<std::string, std::string> keys;  ///< raw values as written
};

struct ExperimentConfig {
  std::string kind;
  std::optional<GeometryBlock> geometry;
  std::map<std::string, std::string> params;
  std::optional<std::uint64_t> seed;
  std::string output;
};

inline const std::vector<std::string>& geometry_keys() {
  static const std::vector<std::string> k = {"domain_kind", "modes_per_axis", "xi_spacing", "tau_count",
                                             "tau_spacing", "schedule"};
  return k;
}

/// Throws ConfigError naming the line and key.
ExperimentConfig parse_config(std::string_view text);
/// Reads and parses a file; unreadable files are ConfigError.
ExperimentConfig load_config(const std::string& path);

/// Canonical text form; parse_config(to_config_text(c)) == c.
std::string to_config_text(const ExperimentConfig& c);

/// GeometrySpec from a block. With `spatial_only` the tau keys may be omitted.
GeometrySpec geometry_from_block(const GeometryBlock& b, bool spatial_only = false);
GeometryBlock geometry_to_block(const GeometrySpec& g);

// Strict scalar parsing; `key` names the offending entry in errors.
double parse_double(std::string_view key, std::string_view value);
int parse_int(std::string_view key, std::string_view value);
std::uint64_t parse_u64(std::string_view key, std::string_view value);
bool parse_bool(std::string_view key, std::string_view value);
/// Comma- or space-separated integers.
std::vector<int> parse_int_list(std::string_view key, std::string_view value);
std::vector<double> parse_double_list(std::string_view key, std::string_view value);

}  // namespace xsb
