// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "xsblab/bilinear.hpp"
#include "xsblab/counterexamples.hpp"
#include "xsblab/estimates.hpp"
#include "xsblab/norms.hpp"
#include "xsblab/solver.hpp"

using namespace xsb;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void fail(Outcome& o, const std::string& why) {
  if (o.pass) o.detail.clear();
  o.pass = false;
  o.detail += (o.detail.empty() ? "" : "; ") + why;
}

std::string g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<LatticeGeometry> four_domains() {
  return {LatticeGeometry::create(DomainKind::torus_1d, 16, 1.0, 260, 0.5),
          LatticeGeometry::create(DomainKind::torus_2d, 8, 1.0, 130, 0.5),
          LatticeGeometry::create(DomainKind::torus_3d, 8, 1.0, 194, 0.5),
          LatticeGeometry::create(DomainKind::line_1d, 32, 0.25, 66, 0.5)};
}

Outcome c1() {
  Outcome o;
  double worst = 0.0;
  int n = 0;
  const auto doms = four_domains();
  for (int i = 0; i < 50; ++i) {
    const auto& g = doms[i % 4];
    const SpatialField u = oracle::random_spatial(g, 1000 + i);
    const FrequencyField f = forward_transform(u);
    const SpatialField back = inverse_transform(f);
    const double scale = oracle::max_abs(u.values());
    worst = std::max(worst, oracle::max_diff(back.values(), u.values()) / scale);
    worst = std::max(worst, rel(xsb_norm(f, {0, 0, Sign::plus}), u.l2_norm()));
    worst = std::max(worst, rel(f.l2_norm(), u.l2_norm()));
    ++n;
  }
  if (!(worst < 1e-12)) fail(o, "max relative error " + g6(worst));
  o.detail = o.pass ? std::to_string(n) + " fields, max relative error " + g6(worst) : o.detail;
  return o;
}

Outcome c2() {
  Outcome o;
  double worst = 0.0;
  for (const auto& g : four_domains()) {
    const FrequencyField f = oracle::random_field(g, 77);
    const FrequencyField fb = conjugate_field(f);
    for (double s : {-0.5, 0.0, 0.5})
      for (double b : {-0.6, 0.0, 0.6})
        worst = std::max(worst, rel(xsb_norm(fb, {s, b, Sign::plus}), xsb_norm(f, {s, b, Sign::minus})));
  }
  if (!(worst < 1e-12)) fail(o, "max relative difference " + g6(worst));
  if (o.pass) o.detail = "9 (s, b) pairs on 4 domains, max relative difference " + g6(worst);
  return o;
}

Outcome c3() {
  Outcome o;
  const std::vector<LatticeGeometry> gs = {LatticeGeometry::create(DomainKind::torus_1d, 8, 1.0, 16, 2.5),
                                           LatticeGeometry::create(DomainKind::line_1d, 16, 0.25, 16, 1.0),
                                           LatticeGeometry::create(DomainKind::torus_2d, 4, 1.0, 16, 1.25)};
  double worst = 0.0;
  int pairs = 0;
  for (int i = 0; i < 20; ++i) {
    const auto& g = gs[i % gs.size()];
    const FrequencyField f = oracle::random_field(g, 2000 + 2 * i), h = oracle::random_field(g, 2001 + 2 * i);
    const double s = 0.25 * (1 + i % 2);
    // negative orders only for the japanese brackets; |0|^s is singular there
    for (const auto& sym : {I_minus(s), J_minus(-s), I_plus(s), J_plus(-s), J_minus(s), J_plus(s)}) {
      const auto a = apply_bilinear(sym, f, h), b = apply_bilinear_oracle(sym, f, h);
      worst = std::max(worst, oracle::max_diff(a.coeffs(), b.coeffs()) / oracle::max_abs(b.coeffs()));
    }
    ++pairs;
  }
  if (!(worst < 1e-12)) fail(o, "max relative difference " + g6(worst));
  if (o.pass) o.detail = std::to_string(pairs) + " pairs, 4 symbols, max relative difference " + g6(worst);
  return o;
}

Outcome c4() {
  Outcome o;
  const std::vector<LatticeGeometry> gs = {LatticeGeometry::create(DomainKind::torus_1d, 8, 1.0, 36, 1.0),
                                           LatticeGeometry::create(DomainKind::line_1d, 16, 0.25, 16, 1.0)};
  double sym_err = 0.0, adj_err = 0.0, conj_err = 0.0;
  for (double s : {-0.5, -0.25, 0.0, 0.25, 0.5})
    for (int i = 0; i < 20; ++i) {
      const auto& g = gs[i % 2];
      const std::uint64_t seed = 3000 + 10 * i + static_cast<std::uint64_t>(4 * (s + 0.5));
      const FrequencyField u = oracle::inner_field(g, seed), v = oracle::inner_field(g, seed + 100),
                           w = oracle::inner_field(g, seed + 200);
      const auto uv = apply_bilinear(J_minus(s), u, v), vu = apply_bilinear(J_minus(s), v, u);
      sym_err = std::max(sym_err, oracle::max_diff(uv.coeffs(), vu.coeffs()) / oracle::max_abs(uv.coeffs()));
      if (s > 0) {
        const auto a = apply_bilinear(I_minus(s), u, v), b = apply_bilinear(I_minus(s), v, u);
        sym_err = std::max(sym_err, oracle::max_diff(a.coeffs(), b.coeffs()) / oracle::max_abs(a.coeffs()));
      }
      const auto [l, r] = adjoint_check(s, u, v, w);
      adj_err = std::max(adj_err, std::abs(l - r) / std::abs(l));
      const auto [cl, cr] = conjugation_identity_check(s, u, v);
      conj_err = std::max(conj_err, oracle::max_diff(cl.coeffs(), cr.coeffs()) / oracle::max_abs(cr.coeffs()));
    }
  if (!(sym_err < 1e-10)) fail(o, "symmetry " + g6(sym_err));
  if (!(adj_err < 1e-10)) fail(o, "adjointness " + g6(adj_err));
  if (!(conj_err < 1e-10)) fail(o, "conjugation " + g6(conj_err));
  if (o.pass)
    o.detail = "100 triples, symmetry " + g6(sym_err) + ", adjointness " + g6(adj_err) + ", conjugation " + g6(conj_err);
  return o;
}

Outcome c5() {
  Outcome o;
  const auto g = LatticeGeometry::unchecked(DomainKind::line_1d, 384, 1.0 / 16, 2, 1.0);
  auto gaussian = [&](double c, double width) {
    return SpatialSpectrum::from_function(
        g, [=](const XiVector& x) { return cplx(std::exp(-(x[0] - c) * (x[0] - c) / width)); });
  };
  const std::vector<std::pair<SpatialSpectrum, SpatialSpectrum>> pairs = {
      {gaussian(2, 1), gaussian(-2, 1)}, {gaussian(1.5, 0.5), gaussian(-2.5, 1)}, {gaussian(3, 1), gaussian(-1, 0.7)}};
  std::string trail;
  for (const auto& [a, b] : pairs) {
    double err = 0.0;
    for (double T : {1.0, 2.0, 4.0}) {
      const Lemma24Result r = lemma24_identity(a, b, T);
      err = std::abs(r.lhs / r.rhs - 1);
      trail += (trail.empty() ? "" : " ") + g6(r.lhs / r.rhs);
    }
    if (!(err < 0.02)) fail(o, "final ratio off by " + g6(err));
  }
  if (o.pass) o.detail = "LHS/RHS at T = 1, 2, 4 per pair: " + trail;
  return o;
}

Outcome c6() {
  Outcome o;
  struct Point {
    const char* id;
    double s, b, bp;
  };
  const std::vector<Point> pts = {
      {"ex41", -0.25, 0.55, 0},    {"ex41", -0.5, 0.55, 0},     {"ex42f", -0.5, 0.55, 0},
      {"ex42f", -0.4, 0.55, -0.1}, {"ex42g", -0.5, 0.55, 0},    {"ex42g", -0.6, 0.6, 0},
      {"ex51", -0.25, 0.55, 0},    {"ex51", -0.5, 0.55, 0},     {"ex51r", -0.25, 0.55, 0},
      {"ex51r", -0.5, 0.55, 0},    {"ex52", -0.25, 0.55, 0},    {"ex52", -0.5, 0.55, 0},
      {"ex52r", -0.25, 0.55, 0},   {"ex52r", -0.5, 0.55, 0},    {"ex53", -0.25, 0.55, -1},
      {"ex53", -0.375, 0.55, -1}};
  const std::vector<int> ns = {4, 8, 16, 32};
  std::string summary;
  double worst = 0.0;
  for (const auto& p : pts) {
    const CounterexampleFamily& f = find_family(p.id);
    const GrowthReport r = fit_growth(f, {p.s, p.b, p.bp, 0.0, 0.05}, ns);
    const double m = std::abs(r.fitted_slope - r.predicted_slope);
    worst = std::max(worst, m);
    if (r.n.size() != ns.size()) fail(o, std::string(p.id) + " skipped members");
    if (!(m <= 0.1))
      fail(o, std::string(p.id) + " s=" + g6(p.s) + " slope " + g6(r.fitted_slope) + " vs " + g6(r.predicted_slope));
    summary += std::string(summary.empty() ? "" : ", ") + p.id + " " + g6(r.fitted_slope) + "/" + g6(r.predicted_slope);
  }
  for (const auto& f : families())
    for (int n : ns) {
      const LowerBoundReport lb = verify_lower_bound(f, n);
      if (!lb.pass) fail(o, f.id + " lower bound fails at n=" + std::to_string(n) + " margin " + g6(lb.margin));
    }
  if (o.pass) o.detail = "fitted/predicted " + summary + "; all lower bounds hold";
  return o;
}

Outcome c7() {
  Outcome o;
  struct Job {
    const char* id;
    EstimateParams p;
  };
  const std::vector<Job> jobs = {{"thm41", {-0.3, 0.55, -0.46, 0, 0.05}}, {"thm51", {-0.1, 0.55, -0.41, 0, 0.05}}};
  std::string trail;
  for (const auto& j : jobs) {
    MaximizeOptions opt;
    opt.budget = 200;
    opt.refine = true;
    const QuotientReport r = maximize_quotient(find_case(j.id), j.p, 7, opt);
    if (!r.admissible) fail(o, std::string(j.id) + " parameters not admissible");
    if (!r.refinement_ratio) {
      fail(o, std::string(j.id) + " no refinement");
      continue;
    }
    const double change = std::abs(*r.refinement_ratio - 1);
    if (!(change < 0.2)) fail(o, std::string(j.id) + " changes by " + g6(change));
    trail += std::string(trail.empty() ? "" : ", ") + j.id + " max " + g6(r.max_quotient) + " refined/base " +
             g6(*r.refinement_ratio);
  }
  if (o.pass) o.detail = trail + "; growth below threshold: criterion 6 (ex51, ex53)";
  return o;
}

SolveConfig torus(int M, double T, int steps, double s) {
  SolveConfig cfg;
  cfg.T = T;
  cfg.time_steps = steps;
  cfg.sobolev_index = s;
  cfg.geometry = LatticeGeometry::unchecked(DomainKind::torus_1d, M, 1.0, 2, 1.0);
  return cfg;
}

Outcome c8() {
  Outcome o;
  {
    const SolveConfig cfg = torus(32, 0.1, 64, -0.3);
    const SpatialSpectrum u0 = rough_data(cfg.geometry, {-0.3, 0.05, 1, 1.0});
    const SolveResult r = solve_local(u0, {0, 2, 0.0}, cfg);
    double drift = 0.0;
    for (double h : r.hs_trace) drift = std::max(drift, rel(h, u0.hs_norm(-0.3)));
    if (!r.converged || r.iterations != 1) fail(o, "N = 0 took " + std::to_string(r.iterations) + " iterations");
    if (!(drift < 1e-12)) fail(o, "N = 0 trace drift " + g6(drift));
  }
  double closed = 0.0;
  {
    const SolveConfig cfg = torus(16, 0.5, 8192, 0.0);
    const auto& g = cfg.geometry;
    const cplx A(0.3, 0.2), c1 = std::sqrt(2 * oracle::pi) * A;
    std::vector<cplx> c(16);
    c[g.storage_of(1)] = c1;
    const SpatialSpectrum u0(g, c);
    const Trajectory it = picard_step(free_trajectory(u0, cfg), u0, {0, 2, 1.0}, cfg);
    for (std::size_t k = 0; k < it.times.size(); ++k) {
      const double t = it.times[k];
      const cplx ref = std::conj(c1) * std::conj(A) * (std::polar(1.0, 2 * t) - std::polar(1.0, -4 * t)) / cplx(0, 6);
      closed = std::max(closed, std::abs(it.slices[k][g.storage_of(-2)] - ref));
    }
    if (!(closed < 1e-8)) fail(o, "closed form error " + g6(closed));
  }
  BisectionReport b;
  {
    const SolveConfig cfg = torus(16, 1.0, 64, 0.0);
    const SpatialSpectrum u0 = SpatialSpectrum::from_function(
        cfg.geometry, [](const XiVector& x) { return std::abs(x[0]) <= 3 ? cplx(0.4 * std::exp(-x[0] * x[0])) : cplx{}; });
    b = bisect_time(u0, {0, 2, 1.0}, cfg);
    if (!(b.result.converged && b.ratio <= 0.5)) fail(o, "bisection ratio " + g6(b.ratio));
  }
  if (o.pass)
    o.detail = "N = 0 one iteration; closed form error " + g6(closed) + "; contraction " + g6(b.ratio) + " at T = " +
               g6(b.T) + " after " + std::to_string(b.result.iterations) + " iterations";
  return o;
}

Outcome c9() {
  Outcome o;
  const NonlinearitySpec n = NonlinearitySpec::parse("ubar^3");
  const SolveConfig cfg = torus(32, 0.05, 64, -0.3);
  const SpatialSpectrum u0 = rough_data(cfg.geometry, {-0.3, 0.05, 1, 0.5});
  const SolveResult r = solve_local(u0, n, cfg);
  if (!r.converged) {
    fail(o, "solve did not converge: " + r.diagnostics);
    return o;
  }
  const LipschitzReport lr = lipschitz_probe(u0, 1e-3, n, cfg, 3, 1);
  const double lip = std::abs(lr.quotient / lr.quotient_half - 1);
  if (!(lip < 0.3)) fail(o, "Lipschitz quotients " + g6(lr.quotient) + " vs " + g6(lr.quotient_half));
  SolveConfig fine = cfg;
  fine.time_steps = 128;
  const SolveResult r2 = solve_local(u0, n, fine);
  const double j1 = persistence_probe(r, cfg).max_jump, j2 = persistence_probe(r2, fine).max_jump;
  const double jr = j2 / j1;
  if (!r2.converged || !(std::abs(jr - 0.5) < 0.1)) fail(o, "jump ratio " + g6(jr));
  if (o.pass)
    o.detail = "converged in " + std::to_string(r.iterations) + " iterations; Lipschitz " + g6(lr.quotient) + " / " +
               g6(lr.quotient_half) + "; jump ratio " + g6(jr);
  return o;
}

int run_cli(const fs::path& dir, const std::string& args) {
  const std::string cmd = "cd '" + dir.string() + "' && '" XSBLAB_CLI_PATH "' " + args + " > cli.log 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome c10() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / ("xsblab_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> cfgs = {
      {"q.cfg",
       "kind = quotient\nseed = 5\noutput = q.csv\ngeometry {\n  domain_kind = torus_1d\n  modes_per_axis = 16\n"
       "  xi_spacing = 1\n  tau_count = 260\n  tau_spacing = 0.5\n}\nparams {\n  case = thm41\n  s = -0.3\n"
       "  bprime = -0.46\n  budget = 16\n  hill_steps = 4\n}\n"},
      {"c.cfg",
       "kind = counterexample\nseed = 5\noutput = c.csv\ngeometry {\n  schedule = minimal\n}\n"
       "params {\n  family = ex53\n  s = -0.25\n}\n"},
      {"s.cfg",
       "kind = solve\nseed = 5\noutput = s.csv\ngeometry {\n  domain_kind = torus_1d\n  modes_per_axis = 32\n"
       "  xi_spacing = 1\n}\nparams {\n  nonlinearity = ubar^3\n  s = -0.3\n  T = 0.05\n  delta = 0.001\n}\n"},
      {"n.cfg",
       "kind = norm\nseed = 5\noutput = n.csv\ngeometry {\n  domain_kind = torus_2d\n  modes_per_axis = 8\n"
       "  xi_spacing = 1\n  tau_count = 130\n  tau_spacing = 0.5\n}\nparams {\n  s = -0.5\n  b = 0.6\n}\n"},
      {"b.cfg",
       "kind = bilinear-check\nseed = 5\noutput = b.csv\ngeometry {\n  domain_kind = torus_1d\n  modes_per_axis = 8\n"
       "  xi_spacing = 1\n  tau_count = 36\n  tau_spacing = 1\n}\nparams {\n  symbol = J_plus\n  s = -0.25\n}\n"},
  };
  int checked = 0;
  for (const auto& [name, text] : cfgs) {
    std::ofstream(dir / name, std::ios::binary) << text;
    const std::string stem = name.substr(0, name.find('.'));
    std::string first_csv, first_json;
    for (int rep = 0; rep < 2; ++rep) {
      fs::remove(dir / (stem + ".csv"));
      fs::remove(dir / (stem + ".json"));
      const int rc = run_cli(dir, "run -c " + name);
      if (rc != 0) {
        fail(o, name + " exit " + std::to_string(rc) + ": " + slurp(dir / "cli.log"));
        break;
      }
      const std::string csv = slurp(dir / (stem + ".csv")), json = slurp(dir / (stem + ".json"));
      if (rep == 0) {
        first_csv = csv;
        first_json = json;
      } else if (csv != first_csv || json != first_json) {
        fail(o, name + " reports differ between runs");
      } else {
        ++checked;
      }
    }
  }
  fs::remove_all(dir);
  if (o.pass) o.detail = std::to_string(checked) + " configs, CSV and JSON byte identical across two runs";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10};
  const std::vector<double> budget_s = {10, 1e9, 60, 1e9, 120, 600, 1e9, 120, 300, 1e9};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      fail(o, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > budget_s[i]) fail(o, "took " + g6(secs) + " s, budget " + g6(budget_s[i]) + " s");
    std::printf("criterion %zu: %s (%.1f s) %s\n", i + 1, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
