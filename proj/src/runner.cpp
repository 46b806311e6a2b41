#include "xsblab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <set>

#include <json.hpp>

#include "xsblab/bilinear.hpp"
#include "xsblab/errors.hpp"
#include "xsblab/format.hpp"
#include "xsblab/norms.hpp"
#include "xsblab/solver.hpp"

namespace xsb {

using nlohmann::json;

const char* tool_version() { return "0.1.0"; }

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> k = {"bilinear-check", "counterexample", "norm", "preset", "quotient",
                                             "solve"};
  return k;
}

const std::vector<std::string>& param_keys(const std::string& kind) {
  static const std::map<std::string, std::vector<std::string>> keys = {
      {"norm", {"s", "b", "sign", "alpha", "samples"}},
      {"bilinear-check", {"symbol", "s", "pairs", "alpha"}},
      {"quotient", {"case", "s", "b", "bprime", "sigma", "eps", "budget", "hill_steps", "alpha", "refine"}},
      {"counterexample", {"family", "s", "b", "bprime", "n"}},
      {"solve",
       {"nonlinearity", "s", "amplitude", "excess", "T", "steps", "max_iters", "tol", "delta", "trials", "bisect",
        "xsb_b"}},
      {"preset", {"name"}},
  };
  auto it = keys.find(kind);
  if (it == keys.end()) throw ConfigError("unknown experiment kind '" + kind + "'");
  return it->second;
}

namespace {

using Params = std::map<std::string, std::string>;

std::string g17(double x) { return format_g17(x); }

void check_keys(const std::string& kind, const Params& p) {
  const auto& allowed = param_keys(kind);
  for (const auto& [k, v] : p)
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw ConfigError("unknown params key '" + k + "' for kind '" + kind + "'");
}

const std::string* get(const Params& p, const std::string& k) {
  auto it = p.find(k);
  return it == p.end() ? nullptr : &it->second;
}

const std::string& need(const Params& p, const std::string& k, const std::string& kind) {
  auto v = get(p, k);
  if (!v) throw ConfigError("kind '" + kind + "' requires params key '" + k + "'");
  return *v;
}

double num(const Params& p, const std::string& k, double dflt) {
  auto v = get(p, k);
  return v ? parse_double(k, *v) : dflt;
}

int integer(const Params& p, const std::string& k, int dflt) {
  auto v = get(p, k);
  return v ? parse_int(k, *v) : dflt;
}

void require_positive(const std::string& k, double x) {
  if (!(x > 0.0)) throw ConfigError("key '" + k + "' must be positive, got " + format_short(x));
}

void require_at_least(const std::string& k, int x, int lo) {
  if (x < lo) throw ConfigError("key '" + k + "' must be >= " + std::to_string(lo) + ", got " + std::to_string(x));
}

LatticeGeometry full_geometry(const std::optional<GeometryBlock>& b, const std::string& kind) {
  if (!b) throw ConfigError("kind '" + kind + "' requires a geometry block");
  if (b->keys.count("schedule")) throw ConfigError("geometry key 'schedule' is only valid for counterexample runs");
  return geometry_from_block(*b).build();
}

BilinearSymbol parse_symbol(const std::string& name, double s) {
  if (name == "I_minus") return I_minus(s);
  if (name == "J_minus") return J_minus(s);
  if (name == "I_plus") return I_plus(s);
  if (name == "J_plus") return J_plus(s);
  throw ConfigError("key 'symbol': expected I_minus, J_minus, I_plus or J_plus, got '" + name + "'");
}

// Every job turns into a header, CSV rows and a JSON detail record.
struct JobOutput {
  std::string rows;
  json detail;
  std::vector<std::string> fingerprints;
};

struct Job {
  std::string kind;
  Params params;
  std::optional<GeometryBlock> geometry;
};

// ------------------------------------------------------------------ norm

struct NormPlan {
  LatticeGeometry geo;
  WeightSpec w;
  double alpha;
  int samples;
};

NormPlan plan_norm(const Job& j) {
  const Params& p = j.params;
  NormPlan n{full_geometry(j.geometry, j.kind), {}, num(p, "alpha", 1.0), integer(p, "samples", 4)};
  n.w.s = num(p, "s", 0.0);
  n.w.b = num(p, "b", 0.0);
  if (auto v = get(p, "sign")) n.w.sign = parse_sign(*v);
  require_at_least("samples", n.samples, 1);
  return n;
}

JobOutput run_norm(const NormPlan& n, std::uint64_t seed) {
  JobOutput out;
  const auto fields = random_ensemble(n.geo, n.alpha, n.samples, seed);
  const WeightSpec dual{n.w.s, n.w.b, flipped(n.w.sign)};
  const std::string fp = n.geo.fingerprint();
  for (int i = 0; i < n.samples; ++i) {
    const FrequencyField& f = fields[i];
    const FrequencyField back = forward_transform(inverse_transform(f));
    double err = 0.0, top = 0.0;
    for (std::size_t k = 0; k < f.coeffs().size(); ++k) {
      err = std::max(err, std::abs(back.coeffs()[k] - f.coeffs()[k]));
      top = std::max(top, std::abs(f.coeffs()[k]));
    }
    out.rows += std::to_string(i) + "," + g17(n.w.s) + "," + g17(n.w.b) + "," + std::string(to_string(n.w.sign)) +
                "," + fp + "," + std::to_string(seed) + "," + g17(xsb_norm(f, n.w)) + "," +
                g17(xsb_norm(conjugate_field(f), dual)) + "," + g17(f.l2_norm()) + "," +
                g17(top > 0 ? err / top : err) + "\n";
  }
  out.fingerprints.push_back(fp);
  out.detail = {{"alpha", n.alpha}, {"samples", n.samples}};
  return out;
}

// --------------------------------------------------------- bilinear-check

struct BilinearPlan {
  LatticeGeometry geo;
  std::string name;
  BilinearSymbol sym;
  int pairs;
  double alpha;
};

BilinearPlan plan_bilinear(const Job& j) {
  const Params& p = j.params;
  const std::string name = get(p, "symbol") ? *get(p, "symbol") : "J_minus";
  BilinearPlan b{full_geometry(j.geometry, j.kind), name, parse_symbol(name, num(p, "s", 0.0)),
                 integer(p, "pairs", 4), num(p, "alpha", 1.0)};
  require_at_least("pairs", b.pairs, 1);
  return b;
}

JobOutput run_bilinear(const BilinearPlan& b, std::uint64_t seed) {
  JobOutput out;
  const auto fields = random_ensemble(b.geo, b.alpha, 2 * b.pairs, seed);
  const std::string fp = b.geo.fingerprint();
  for (int i = 0; i < b.pairs; ++i) {
    const FrequencyField fast = apply_bilinear(b.sym, fields[2 * i], fields[2 * i + 1]);
    const FrequencyField slow = apply_bilinear_oracle(b.sym, fields[2 * i], fields[2 * i + 1]);
    double diff = 0.0;
    for (std::size_t k = 0; k < fast.coeffs().size(); ++k)
      diff = std::max(diff, std::abs(fast.coeffs()[k] - slow.coeffs()[k]));
    out.rows += std::to_string(i) + "," + b.name + "," + g17(b.sym.s) + "," + fp + "," + std::to_string(seed) + "," +
                g17(fast.l2_norm()) + "," + g17(diff) + "\n";
  }
  out.fingerprints.push_back(fp);
  out.detail = {{"alpha", b.alpha}, {"pairs", b.pairs}};
  return out;
}

// ---------------------------------------------------------------- quotient

struct QuotientPlan {
  const EstimateCase* c;
  EstimateParams params;
  MaximizeOptions opt;
};

QuotientPlan plan_quotient(const Job& j) {
  const Params& p = j.params;
  QuotientPlan q;
  q.c = &find_case(need(p, "case", j.kind));
  q.params = q.c->defaults;
  q.params.s = num(p, "s", q.params.s);
  q.params.b = num(p, "b", q.params.b);
  q.params.bprime = num(p, "bprime", q.params.bprime);
  q.params.sigma = num(p, "sigma", q.params.sigma);
  q.params.eps = num(p, "eps", q.params.eps);
  q.opt.budget = integer(p, "budget", q.opt.budget);
  q.opt.hill_steps = integer(p, "hill_steps", q.opt.hill_steps);
  q.opt.alpha = num(p, "alpha", q.opt.alpha);
  if (auto v = get(p, "refine")) q.opt.refine = parse_bool("refine", *v);
  require_at_least("budget", q.opt.budget, 0);
  require_at_least("hill_steps", q.opt.hill_steps, 0);
  if (j.geometry) {
    if (j.geometry->keys.count("schedule"))
      throw ConfigError("geometry key 'schedule' is only valid for counterexample runs");
    GeometrySpec g = geometry_from_block(*j.geometry);
    if (g.kind != q.c->geometry.kind)
      throw GeometryError("case '" + q.c->id + "' lives on " + std::string(to_string(q.c->geometry.kind)) +
                          ", geometry block gives " + std::string(to_string(g.kind)));
    g.build();
    q.opt.geometry = g;
  } else {
    q.c->geometry.build();
  }
  return q;
}

JobOutput run_quotient(const QuotientPlan& q, std::uint64_t seed) {
  JobOutput out;
  const QuotientReport r = maximize_quotient(*q.c, q.params, seed, q.opt);
  out.rows = quotient_csv_row(r);
  out.fingerprints.push_back(r.fingerprint);
  out.detail = {{"case_id", r.case_id},
                {"status", q.c->status == CaseStatus::proven ? "proven"
                           : q.c->status == CaseStatus::failing ? "failing"
                                                                : "open"},
                {"anchor", q.c->anchor},
                {"admissible", r.admissible},
                {"argmax_seed", r.argmax_seed},
                {"sigma", r.params.sigma},
                {"eps", r.params.eps},
                {"tau_max", r.tau_max},
                {"time_window", r.time_window},
                {"hill_climb_history", r.history}};
  return out;
}

// ---------------------------------------------------------- counterexample

struct GrowthPlan {
  const CounterexampleFamily* f;
  EstimateParams params;
  std::vector<int> n;
  GeometrySchedule schedule;
};

GrowthPlan plan_growth(const Job& j) {
  const Params& p = j.params;
  GrowthPlan g;
  g.f = &find_family(need(p, "family", j.kind));
  g.params.s = num(p, "s", -0.5);
  g.params.b = num(p, "b", 0.55);
  g.params.bprime = num(p, "bprime", g.f->default_bprime);
  g.n = get(p, "n") ? parse_int_list("n", *get(p, "n")) : std::vector<int>{4, 8, 16, 32};
  if (g.n.size() < 3) throw ConfigError("key 'n': a slope fit needs at least three members");
  for (std::size_t i = 0; i < g.n.size(); ++i)
    if (g.n[i] < 1 || (i && g.n[i] <= g.n[i - 1]))
      throw ConfigError("key 'n': members must be positive and strictly increasing");
  if (j.geometry) {
    const auto& k = j.geometry->keys;
    if (k.count("schedule")) {
      if (k.size() != 1 || k.at("schedule") != "minimal")
        throw ConfigError("geometry key 'schedule' must be 'minimal' and stand alone");
    } else {
      const GeometrySpec spec = geometry_from_block(*j.geometry);
      const LatticeGeometry geo = spec.build();
      if (spec.kind != g.f->kind)
        throw GeometryError("family '" + g.f->id + "' lives on " + std::string(to_string(g.f->kind)));
      g.schedule = [geo](int) { return geo; };
    }
  }
  return g;
}

JobOutput run_growth(const GrowthPlan& g, std::uint64_t seed) {
  JobOutput out;
  const GrowthReport r = fit_growth(*g.f, g.params, g.n, g.schedule);
  out.rows = growth_csv_rows(r, seed);
  out.fingerprints = r.fingerprint;
  out.detail = {{"family_id", r.family_id},
                {"target_case", r.target_case},
                {"anchor", g.f->anchor},
                {"slope_formula", g.f->slope_formula},
                {"n_requested", g.n},
                {"n_used", r.n},
                {"rhs", r.rhs},
                {"log_quotient", r.log_quotient},
                {"intercept", r.intercept},
                {"fit_residual", r.fit_residual},
                {"slope_margin", r.margin},
                {"admissible", r.admissible}};
  return out;
}

// ------------------------------------------------------------------ solve

struct SolvePlan {
  NonlinearitySpec n;
  std::string n_text;
  SolveConfig cfg;
  RoughDataSpec data;
  std::optional<double> delta;
  int trials;
  bool bisect;
  double xsb_b;
};

SolvePlan plan_solve(const Job& j) {
  const Params& p = j.params;
  if (!j.geometry) throw ConfigError("kind 'solve' requires a geometry block");
  if (j.geometry->keys.count("schedule")) throw ConfigError("geometry key 'schedule' is only valid for counterexample runs");
  const GeometrySpec spec = geometry_from_block(*j.geometry, true);
  SolvePlan s{NonlinearitySpec::parse(need(p, "nonlinearity", j.kind)), need(p, "nonlinearity", j.kind), {}, {},
              std::nullopt, integer(p, "trials", 3), false, num(p, "xsb_b", 0.55)};
  s.cfg.geometry = LatticeGeometry::unchecked(spec.kind, spec.modes, spec.xi_spacing, spec.tau_count, spec.tau_spacing);
  if (spec.kind == DomainKind::line_1d && spec.xi_spacing > 0.25)
    throw GeometryError("line_1d requires xi_spacing <= 1/4, got " + format_short(spec.xi_spacing));
  s.data.s = parse_double("s", need(p, "s", j.kind));
  s.data.amplitude = num(p, "amplitude", 0.5);
  s.data.excess = num(p, "excess", 0.05);
  s.cfg.sobolev_index = s.data.s;
  s.cfg.T = num(p, "T", 0.1);
  s.cfg.time_steps = integer(p, "steps", 64);
  s.cfg.max_iters = integer(p, "max_iters", 50);
  s.cfg.residual_tol = num(p, "tol", 1e-10);
  if (auto v = get(p, "delta")) {
    s.delta = parse_double("delta", *v);
    require_positive("delta", *s.delta);
  }
  if (auto v = get(p, "bisect")) s.bisect = parse_bool("bisect", *v);
  require_positive("excess", s.data.excess);
  require_positive("T", s.cfg.T);
  require_positive("tol", s.cfg.residual_tol);
  require_at_least("steps", s.cfg.time_steps, 1);
  require_at_least("max_iters", s.cfg.max_iters, 1);
  require_at_least("trials", s.trials, 1);
  return s;
}

JobOutput run_solve(SolvePlan s, std::uint64_t seed) {
  JobOutput out;
  s.data.seed = seed;
  const SpatialSpectrum u0 = rough_data(s.cfg.geometry, s.data);
  json d;
  if (s.bisect) {
    try {
      const BisectionReport b = bisect_time(u0, s.n, s.cfg);
      s.cfg.T = b.T;
      d["bisection"] = {{"T", b.T}, {"halvings", b.halvings}, {"contraction_ratio", b.ratio}};
    } catch (const SolverError& e) {
      d["bisection"] = {{"error", e.what()}};
    }
  }
  const SolveResult r = solve_local(u0, s.n, s.cfg);
  const PersistenceReport pp = persistence_probe(r, s.cfg);
  SolveSummary sum;
  sum.nonlinearity = s.n.name();
  sum.s = s.data.s;
  sum.amplitude = s.data.amplitude;
  sum.T = s.cfg.T;
  sum.steps = s.cfg.time_steps;
  sum.iters = r.iterations;
  sum.converged = r.converged;
  sum.final_residual = r.residuals.back();
  sum.max_growth = pp.max_growth;
  // the space-time lattice of the X^{s,b} diagnostic: 2S samples on [-T, T)
  const LatticeGeometry& sg = s.cfg.geometry;
  sum.fingerprint = LatticeGeometry::unchecked(sg.kind(), sg.modes(), sg.xi_spacing(), 2 * s.cfg.time_steps,
                                               std::acos(-1.0) / s.cfg.T)
                        .fingerprint();
  sum.seed = seed;
  if (s.delta) {
    try {
      const LipschitzReport l = lipschitz_probe(u0, *s.delta, s.n, s.cfg, s.trials, derive_seed(seed, 1));
      sum.lipschitz_quotient = l.quotient;
      d["lipschitz"] = {{"delta", l.delta}, {"trials", l.trials}, {"quotient", l.quotient},
                        {"quotient_half_delta", l.quotient_half}};
    } catch (const SolverError& e) {
      d["lipschitz"] = {{"error", e.what()}};
    }
  }
  d["residuals"] = r.residuals;
  d["hs_trace"] = r.hs_trace;
  d["contraction_ratio"] = contraction_ratio(r.residuals);
  d["diverged"] = r.diverged;
  d["diagnostics"] = r.diagnostics;
  d["max_jump"] = pp.max_jump;
  d["excess"] = s.data.excess;
  d["nonlinearity_input"] = s.n_text;
  if (r.converged) d["xsb_proxy"] = {{"b", s.xsb_b}, {"value", xsb_diagnostic(r.trajectory, s.cfg, s.data.s, s.xsb_b)}};
  out.rows = solve_csv_row(sum);
  out.fingerprints.push_back(sum.fingerprint);
  out.detail = std::move(d);
  return out;
}

// ------------------------------------------------------------------ dispatch

std::string header_of(const std::string& kind) {
  if (kind == "norm") return "sample,s,b,sign,fingerprint,seed,xsb_norm,conjugate_norm,l2_norm,roundtrip_error\n";
  if (kind == "bilinear-check") return "pair,symbol,s,fingerprint,seed,output_norm,oracle_max_diff\n";
  if (kind == "quotient") return quotient_csv_header();
  if (kind == "counterexample") return growth_csv_header();
  return solve_csv_header();
}

using Runner = std::function<JobOutput(std::uint64_t)>;

// Validation happens here, before any job runs.
Runner plan(const Job& j) {
  check_keys(j.kind, j.params);
  if (j.kind == "norm") return [p = plan_norm(j)](std::uint64_t seed) { return run_norm(p, seed); };
  if (j.kind == "bilinear-check") return [p = plan_bilinear(j)](std::uint64_t seed) { return run_bilinear(p, seed); };
  if (j.kind == "quotient") return [p = plan_quotient(j)](std::uint64_t seed) { return run_quotient(p, seed); };
  if (j.kind == "counterexample") return [p = plan_growth(j)](std::uint64_t seed) { return run_growth(p, seed); };
  if (j.kind == "solve") return [p = plan_solve(j)](std::uint64_t seed) { return run_solve(p, seed); };
  throw ConfigError("unknown experiment kind '" + j.kind + "'");
}

// ------------------------------------------------------------------ presets

PresetJob pj(Params p, std::optional<GeometryBlock> g = std::nullopt) { return {std::move(p), std::move(g)}; }

GeometryBlock spatial(const std::string& kind, int modes, const std::string& dxi) {
  GeometryBlock b;
  b.keys = {{"domain_kind", kind}, {"modes_per_axis", std::to_string(modes)}, {"xi_spacing", dxi}};
  return b;
}

std::vector<Preset> build_presets() {
  std::vector<Preset> out;
  for (const auto& c : registry())
    out.push_back({c.id, c.anchor, "quotient", {pj({{"case", c.id}, {"budget", "64"}, {"hill_steps", "20"}})}});

  auto growth = [&](const std::string& id, const std::string& anchor,
                    std::vector<std::pair<std::string, std::vector<std::string>>> points) {
    Preset p{id, anchor, "counterexample", {}};
    for (auto& [fam, v] : points)
      p.jobs.push_back(pj({{"family", fam}, {"s", v[0]}, {"b", v[1]}, {"bprime", v[2]}, {"n", "4,8,16,32"}}));
    out.push_back(std::move(p));
  };
  growth("ex41", find_case("ex41-target").anchor,
         {{"ex41", {"-0.25", "0.55", "0"}}, {"ex41", {"-0.5", "0.55", "0"}}});
  growth("ex42", find_case("ex42-target").anchor,
         {{"ex42f", {"-0.5", "0.55", "0"}}, {"ex42f", {"-0.4", "0.55", "-0.1"}},
          {"ex42g", {"-0.5", "0.55", "0"}}, {"ex42g", {"-0.6", "0.6", "0"}}});
  for (const char* id : {"ex51", "ex51r", "ex52", "ex52r"})
    growth(id, find_family(id).anchor, {{id, {"-0.25", "0.55", "0"}}, {id, {"-0.5", "0.55", "0"}}});
  growth("ex53", find_family("ex53").anchor, {{"ex53", {"-0.25", "0.55", "-1"}}, {"ex53", {"-0.375", "0.55", "-1"}}});

  out.push_back({"problem-sec3",
                 "open: does the lemma31 trilinear bound extend to 1/4 < s < 1/2; quotient trend at s = 0.3, 0.4, 0.45",
                 "quotient",
                 {pj({{"case", "lemma31"}, {"s", "0.3"}, {"budget", "64"}, {"hill_steps", "20"}}),
                  pj({{"case", "lemma31"}, {"s", "0.4"}, {"budget", "64"}, {"hill_steps", "20"}}),
                  pj({{"case", "lemma31"}, {"s", "0.45"}, {"budget", "64"}, {"hill_steps", "20"}})}});

  auto solve = [&](const std::string& id, const std::string& anchor, const GeometryBlock& g, const std::string& nl,
                   std::vector<std::string> s_values, const std::string& T) {
    Preset p{id, anchor, "solve", {}};
    for (auto& s : s_values)
      p.jobs.push_back(pj({{"nonlinearity", nl}, {"s", s}, {"T", T}, {"steps", "64"}, {"delta", "0.001"}}, g));
    out.push_back(std::move(p));
  };
  const GeometryBlock t1 = spatial("torus_1d", 32, "1"), t2 = spatial("torus_2d", 16, "1"),
                      t3 = spatial("torus_3d", 8, "1"), line = spatial("line_1d", 64, "0.25");
  solve("thm1-i", "local solutions of u_t - i Lap u = ubar^3 on T for s > -1/3", t1, "ubar^3", {"-0.3"}, "0.05");
  solve("thm1-ii", "local solutions of u_t - i Lap u = ubar^4 on T for s > -1/6", t1, "ubar^4", {"-0.1"}, "0.05");
  solve("thm1-iii", "local solutions of u_t - i Lap u = ubar^2 on T^2 for s > -1/2", t2, "ubar^2", {"-0.4"}, "0.02");
  solve("thm1-iv", "local solutions of u_t - i Lap u = ubar^2 on T^3 for s > -3/10", t3, "ubar^2", {"-0.25"}, "0.02");
  solve("thm2-i", "local solutions on R for N = u^3 or ubar^3, s > -5/12", line, "u^3", {"-0.4"}, "0.05");
  solve("thm2-ii", "local solutions on R for N = u ubar^2, s > -2/5", line, "u ubar^2", {"-0.35"}, "0.05");
  solve("thm3", "local solutions on R for quartic N in {u^4, u^3 ubar, u ubar^3, ubar^4}, s > -1/6", line, "u^4",
        {"-0.1"}, "0.05");
  solve("thm3-abs4", "local solutions on R for N = |u|^4, s > -1/8", line, "|u|^4", {"-0.1"}, "0.05");
  solve("open-thm2-scaling",
        "open: can the cubic bound on R be lowered to the scaling exponent -1/2; solver trend at s = -0.42, -0.45, -0.48",
        line, "ubar^3", {"-0.42", "-0.45", "-0.48"}, "0.05");

  std::sort(out.begin(), out.end(), [](const Preset& a, const Preset& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i].id == out[i - 1].id) throw std::logic_error("duplicate preset id " + out[i].id);
  return out;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> p = build_presets();
  return p;
}

const Preset& find_preset(const std::string& id) {
  for (const auto& p : presets())
    if (p.id == id) return p;
  throw ConfigError("key 'name': unknown preset '" + id + "'");
}

std::string list_presets() {
  std::string out;
  for (const auto& p : presets()) out += p.id + "  " + p.anchor + "\n";
  return out;
}

std::string sidecar_path(const std::string& csv_path) {
  if (csv_path.size() > 4 && csv_path.compare(csv_path.size() - 4, 4, ".csv") == 0)
    return csv_path.substr(0, csv_path.size() - 4) + ".json";
  return csv_path + ".json";
}

std::string quotient_csv_header() {
  return "case_id,s,b,bprime,fingerprint,samples,max_quotient,refinement_ratio,seed\n";
}

std::string quotient_csv_row(const QuotientReport& r) {
  return r.case_id + "," + g17(r.params.s) + "," + g17(r.params.b) + "," + g17(r.params.bprime) + "," +
         r.fingerprint + "," + std::to_string(r.samples) + "," + g17(r.max_quotient) + "," +
         (r.refinement_ratio ? g17(*r.refinement_ratio) : std::string()) + "," + std::to_string(r.seed) + "\n";
}

std::string growth_csv_header() {
  return "family_id,s,b,bprime,n,quotient,fitted_slope,predicted_slope,fingerprint,seed\n";
}

std::string growth_csv_rows(const GrowthReport& r, std::uint64_t seed) {
  const std::string lead = r.family_id + "," + g17(r.params.s) + "," + g17(r.params.b) + "," + g17(r.params.bprime);
  std::string out;
  for (std::size_t i = 0; i < r.n.size(); ++i)
    out += lead + "," + std::to_string(r.n[i]) + "," + g17(r.quotient[i]) + ",,," + r.fingerprint[i] + "," +
           std::to_string(seed) + "\n";
  out += lead + ",summary,," + g17(r.fitted_slope) + "," + g17(r.predicted_slope) + "," +
         (r.fingerprint.empty() ? std::string() : r.fingerprint.back()) + "," + std::to_string(seed) + "\n";
  return out;
}

std::string solve_csv_header() {
  return "nonlinearity,s,amplitude,T,steps,iters,converged,final_residual,max_growth,lipschitz_quotient,"
         "fingerprint,seed\n";
}

std::string solve_csv_row(const SolveSummary& r) {
  return r.nonlinearity + "," + g17(r.s) + "," + g17(r.amplitude) + "," + g17(r.T) + "," + std::to_string(r.steps) +
         "," + std::to_string(r.iters) + "," + (r.converged ? "true" : "false") + "," + g17(r.final_residual) + "," +
         g17(r.max_growth) + "," + (r.lipschitz_quotient ? g17(*r.lipschitz_quotient) : std::string()) + "," +
         r.fingerprint + "," + std::to_string(r.seed) + "\n";
}

Report execute(const ExperimentConfig& c, bool require_geometry) {
  if (c.kind.empty()) throw ConfigError("missing key 'kind'");
  param_keys(c.kind);
  if (require_geometry && c.kind != "preset" && !c.geometry)
    throw ConfigError("config has no geometry block (required for kind '" + c.kind + "')");
  const std::uint64_t seed = c.seed.value_or(1);

  std::vector<Job> jobs;
  std::string kind = c.kind;
  const Preset* preset = nullptr;
  if (c.kind == "preset") {
    check_keys("preset", c.params);
    preset = &find_preset(need(c.params, "name", "preset"));
    kind = preset->kind;
    for (const auto& pjob : preset->jobs) jobs.push_back({kind, pjob.params, c.geometry ? c.geometry : pjob.geometry});
  } else {
    jobs.push_back({c.kind, c.params, c.geometry});
  }

  std::vector<Runner> runners;
  for (const auto& j : jobs) runners.push_back(plan(j));

  Report rep;
  rep.csv = header_of(kind);
  json detail = json::array();
  std::vector<std::string> fps;
  for (auto& r : runners) {
    JobOutput o = r(seed);
    rep.csv += o.rows;
    detail.push_back(std::move(o.detail));
    fps.insert(fps.end(), o.fingerprints.begin(), o.fingerprints.end());
  }

  json j;
  j["tool"] = "xsblab";
  j["version"] = tool_version();
  j["kind"] = c.kind;
  j["seed"] = seed;
  j["config"] = to_config_text(c);
  j["params"] = c.params;
  if (c.geometry) j["geometry"] = c.geometry->keys;
  if (preset) {
    j["preset"] = {{"id", preset->id}, {"anchor", preset->anchor}, {"kind", preset->kind}};
    json pj = json::array();
    for (const auto& job : preset->jobs) pj.push_back(job.params);
    j["preset"]["jobs"] = pj;
  }
  j["fingerprints"] = fps;
  j["jobs"] = detail;
  rep.json = j.dump(2) + "\n";
  rep.default_output = (preset ? preset->id : c.kind) + ".csv";
  return rep;
}

int run(const ExperimentConfig& c, std::ostream& err, bool require_geometry) {
  try {
    const Report r = execute(c, require_geometry);
    const std::string path = c.output.empty() ? r.default_output : c.output;
    std::ofstream csv(path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot open output '" + path + "'");
    csv << r.csv;
    std::ofstream js(sidecar_path(path), std::ios::binary);
    if (!js) throw std::runtime_error("cannot open output '" + sidecar_path(path) + "'");
    js << r.json;
    return exit_ok;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const GeometryError& e) {
    err << "geometry error: " << e.what() << "\n";
    return exit_geometry;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_failure;
  }
}

}  // namespace xsb
