#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "xsblab/errors.hpp"
#include "xsblab/runner.hpp"

namespace {

// flag name -> params key
const std::vector<std::pair<std::string, std::string>> kParamFlags = {
    {"--case", "case"},         {"--family", "family"},       {"--s", "s"},
    {"--b", "b"},               {"--bprime", "bprime"},       {"--sigma", "sigma"},
    {"--eps", "eps"},           {"--budget", "budget"},       {"--hill-steps", "hill_steps"},
    {"--alpha", "alpha"},       {"--refine", "refine"},       {"--n", "n"},
    {"--nonlinearity", "nonlinearity"}, {"--amplitude", "amplitude"}, {"--excess", "excess"},
    {"--T", "T"},               {"--steps", "steps"},         {"--max-iters", "max_iters"},
    {"--tol", "tol"},           {"--delta", "delta"},         {"--trials", "trials"},
    {"--bisect", "bisect"},     {"--xsb-b", "xsb_b"},         {"--symbol", "symbol"},
    {"--pairs", "pairs"},       {"--samples", "samples"},     {"--sign", "sign"},
    {"--name", "name"},
};

const std::vector<std::pair<std::string, std::string>> kGeometryFlags = {
    {"--domain-kind", "domain_kind"}, {"--modes-per-axis", "modes_per_axis"}, {"--xi-spacing", "xi_spacing"},
    {"--tau-count", "tau_count"},     {"--tau-spacing", "tau_spacing"},       {"--schedule", "schedule"},
};

struct Flags {
  std::string kind;  // fixed by the subcommand, or positional for `run`
  std::string config;
  std::string output;
  std::string seed;
  std::map<std::string, std::string> params;
  std::map<std::string, std::string> geometry;
  std::vector<std::string> extra;  // --param key=value
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config,-c", f.config, "config file");
  app->add_option("--output,-o", f.output, "CSV report path (JSON sidecar next to it)");
  app->add_option("--seed", f.seed, "RNG seed");
  for (const auto& [flag, key] : kParamFlags) app->add_option(flag, f.params[key], "params." + key);
  for (const auto& [flag, key] : kGeometryFlags) app->add_option(flag, f.geometry[key], "geometry." + key);
  app->add_option("--param", f.extra, "extra params entry key=value");
}

int dispatch(const Flags& f) {
  xsb::ExperimentConfig c;
  bool from_file = false;
  try {
    if (!f.config.empty()) {
      c = xsb::load_config(f.config);
      from_file = true;
    }
    if (!f.kind.empty()) {
      if (!c.kind.empty() && c.kind != f.kind)
        throw xsb::ConfigError("config kind '" + c.kind + "' does not match subcommand '" + f.kind + "'");
      c.kind = f.kind;
    }
    if (!f.output.empty()) c.output = f.output;
    if (!f.seed.empty()) c.seed = xsb::parse_u64("seed", f.seed);
    for (const auto& [k, v] : f.params)
      if (!v.empty()) c.params[k] = v;
    for (const auto& kv : f.extra) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw xsb::ConfigError("--param expects key=value, got '" + kv + "'");
      c.params[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    for (const auto& [k, v] : f.geometry) {
      if (v.empty()) continue;
      if (!c.geometry) c.geometry.emplace();
      c.geometry->keys[k] = v;
    }
  } catch (const xsb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return xsb::exit_config;
  }
  return xsb::run(c, std::cerr, from_file);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for X^{s,b} norms, multilinear estimates and NLS Picard iteration"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(xsb::tool_version()));

  std::vector<std::unique_ptr<Flags>> flags;
  const Flags* chosen = nullptr;
  for (const std::string kind : {"norm", "bilinear-check", "quotient", "counterexample", "solve", "preset"}) {
    flags.push_back(std::make_unique<Flags>());
    Flags* f = flags.back().get();
    f->kind = kind;
    CLI::App* sub = app.add_subcommand(kind, "run a " + kind + " experiment");
    add_common(sub, *f);
    if (kind == "preset") sub->add_option("preset_name", f->params["name"], "preset id (see list-presets)");
    sub->callback([f, &chosen] { chosen = f; });
  }
  flags.push_back(std::make_unique<Flags>());
  Flags* runf = flags.back().get();
  CLI::App* run = app.add_subcommand("run", "run an experiment kind, or the kind given by --config");
  run->add_option("kind", runf->kind, "experiment kind");
  add_common(run, *runf);
  run->callback([runf, &chosen] { chosen = runf; });

  bool listed = false;
  app.add_subcommand("list-presets", "print preset ids with one-line anchors")->callback([&listed] {
    std::cout << xsb::list_presets();
    listed = true;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : xsb::exit_config;
  }
  if (listed) return xsb::exit_ok;
  return chosen ? dispatch(*chosen) : xsb::exit_config;
}
