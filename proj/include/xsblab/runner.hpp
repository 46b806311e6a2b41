#pragma once

// Config-driven experiment runner behind the xsblab command line tool.
// Every kind validates all of its inputs before computing anything, and
// `run` writes nothing unless the whole experiment completed.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "xsblab/config.hpp"
#include "xsblab/counterexamples.hpp"
#include "xsblab/estimates.hpp"

namespace xsb {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_config = 2;
inline constexpr int exit_geometry = 3;

const char* tool_version();

/// Allowed keys of the params block for each kind; unknown kinds throw ConfigError.
const std::vector<std::string>& param_keys(const std::string& kind);
const std::vector<std::string>& experiment_kinds();

struct PresetJob {
  std::map<std::string, std::string> params;
  std::optional<GeometryBlock> geometry;
};

struct Preset {
  std::string id;
  std::string anchor;
  std::string kind;
  std::vector<PresetJob> jobs;
};

/// Sorted by id.
const std::vector<Preset>& presets();
/// Throws ConfigError for unknown ids.
const Preset& find_preset(const std::string& id);
/// One line per preset: id, two spaces, anchor. Lexicographic.
std::string list_presets();

struct Report {
  std::string csv;
  std::string json;
  std::string default_output;
};

/// Validates and runs the experiment. Throws ConfigError, GeometryError or
/// other exceptions; never touches the filesystem.
/// With `require_geometry` (config files) a missing geometry block is a
/// ConfigError for every kind except preset.
Report execute(const ExperimentConfig& c, bool require_geometry = false);

/// execute + write CSV and JSON sidecar. Returns the exit code; messages go to `err`.
int run(const ExperimentConfig& c, std::ostream& err, bool require_geometry = false);

/// report.csv -> report.json; other names get ".json" appended.
std::string sidecar_path(const std::string& csv_path);

// CSV rows, "%.17g" numbers, fixed column order.
std::string quotient_csv_header();
std::string quotient_csv_row(const QuotientReport& r);
std::string growth_csv_header();
/// One row per member plus a summary row carrying the slopes.
std::string growth_csv_rows(const GrowthReport& r, std::uint64_t seed);

struct SolveSummary {
  std::string nonlinearity;
  double s = 0.0;
  double amplitude = 0.0;
  double T = 0.0;
  int steps = 0;
  int iters = 0;
  bool converged = false;
  double final_residual = 0.0;
  double max_growth = 0.0;
  std::optional<double> lipschitz_quotient;
  std::string fingerprint;
  std::uint64_t seed = 0;
};

std::string solve_csv_header();
std::string solve_csv_row(const SolveSummary& r);

}  // namespace xsb
