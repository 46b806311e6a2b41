#include "xsblab/solver.hpp"

#include <algorithm>
#include <cctype>
#include <cfloat>
#include <cmath>
#include <string>

#include "xsblab/errors.hpp"
#include "xsblab/estimates.hpp"
#include "xsblab/norms.hpp"
#include "xsblab/parallel.hpp"

namespace xsb {

namespace {

std::string power(const char* base, int p) {
  if (p == 1) return base;
  return std::string(base) + "^" + std::to_string(p);
}

// 0 signals a malformed or zero exponent
int parse_exponent(std::string_view& t) {
  const bool caret = !t.empty() && t.front() == '^';
  if (caret) t.remove_prefix(1);
  int p = 0;
  std::size_t used = 0;
  while (used < t.size() && used < 4 && std::isdigit(static_cast<unsigned char>(t[used]))) p = p * 10 + (t[used++] - '0');
  t.remove_prefix(used);
  if (used == 0) return caret ? 0 : 1;
  return p;
}

void check_slices(const LatticeGeometry& g, const Trajectory& u) {
  for (const auto& s : u.slices)
    if (s.size() != g.spatial_size()) throw GeometryError("trajectory slice size mismatch for " + g.fingerprint());
}

int padded_modes(int modes, int degree) {
  int p = (std::max(degree, 1) + 1) * modes;
  p = (p + 1) / 2;
  return p + (p % 2);
}

}  // namespace

std::string NonlinearitySpec::name() const {
  std::string out;
  if (j > 0) out = power("u", j);
  if (k > 0) out += (out.empty() ? "" : " ") + power("ubar", k);
  return out.empty() ? "1" : out;
}

NonlinearitySpec NonlinearitySpec::parse(std::string_view text) {
  NonlinearitySpec n;
  n.j = n.k = 0;
  std::string_view t = text;
  auto fail = [&] { return ConfigError("cannot parse nonlinearity '" + std::string(text) + "'"); };
  auto trim = [&] {
    while (!t.empty() && (t.front() == ' ' || t.front() == '*' || t.front() == '\t')) t.remove_prefix(1);
  };
  trim();
  if (t.starts_with("|u|")) {
    t.remove_prefix(3);
    const int p = parse_exponent(t);
    trim();
    if (p == 0 || p % 2 != 0 || !t.empty()) throw fail();
    n.j = n.k = p / 2;
    return n;
  }
  while (!t.empty()) {
    if (t.starts_with("ubar")) {
      t.remove_prefix(4);
      const int p = parse_exponent(t);
      if (p == 0) throw fail();
      n.k += p;
    } else if (t.starts_with("u")) {
      t.remove_prefix(1);
      const int p = parse_exponent(t);
      if (p == 0) throw fail();
      n.j += p;
    } else {
      throw fail();
    }
    trim();
  }
  if (n.degree() < 1) throw fail();
  return n;
}

SpatialSpectrum rough_data(const LatticeGeometry& g, const RoughDataSpec& spec) {
  const std::vector<cplx> amp = draw_amplitudes(g.spatial_size(), spec.seed);
  const double e = spec.s + 0.5 * g.dim() + spec.excess;
  std::vector<cplx> c(g.spatial_size());
  for (std::size_t s = 0; s < c.size(); ++s)
    c[s] = spec.amplitude * amp[s] * std::pow(1.0 + g.xi_norm_sq(s), -0.5 * e);
  return SpatialSpectrum(g, std::move(c));
}

double hs_norm(const LatticeGeometry& g, const std::vector<cplx>& c, double s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) acc += std::pow(1.0 + g.xi_norm_sq(i), s) * std::norm(c[i]);
  return std::sqrt(acc * g.spatial_measure());
}

double trajectory_distance(const LatticeGeometry& g, const Trajectory& a, const Trajectory& b, double s) {
  if (a.slices.size() != b.slices.size()) throw GeometryError("trajectory lengths differ");
  double worst = 0.0;
  std::vector<cplx> d(g.spatial_size());
  for (std::size_t k = 0; k < a.slices.size(); ++k) {
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.slices[k][i] - b.slices[k][i];
    worst = std::max(worst, hs_norm(g, d, s));
  }
  return worst;
}

Trajectory free_trajectory(const SpatialSpectrum& u0, const SolveConfig& cfg) {
  if (!(cfg.T > 0.0) || cfg.time_steps < 1) throw ConfigError("solver needs T > 0 and time_steps >= 1");
  const LatticeGeometry& g = cfg.geometry;
  if (u0.coeffs().size() != g.spatial_size()) throw GeometryError("initial data does not match " + g.fingerprint());
  const int S = cfg.time_steps;
  const double dt = cfg.T / S;
  const std::vector<double> x2 = g.xi_norm_sq_table();
  Trajectory u;
  u.times.resize(2 * S + 1);
  u.slices.resize(2 * S + 1);
  for (int k = 0; k <= 2 * S; ++k) {
    const double t = (k - S) * dt;
    u.times[k] = t;
    auto& sl = u.slices[k];
    sl.resize(x2.size());
    for (std::size_t i = 0; i < x2.size(); ++i) sl[i] = std::polar(1.0, -t * x2[i]) * u0.at(i);
  }
  return u;
}

std::vector<cplx> nonlinear_term(const LatticeGeometry& g, const std::vector<cplx>& slice,
                                 const NonlinearitySpec& n) {
  const int mp = padded_modes(g.modes(), n.degree());
  const LatticeGeometry pg = g.padded(mp, 2);
  std::vector<cplx> big(pg.spatial_size());
  for (std::size_t s = 0; s < g.spatial_size(); ++s) big[pg.spatial_offset(g.multi_index(s))] = slice[s];
  std::vector<cplx> v = spatial_inverse(SpatialSpectrum(pg, std::move(big)));
  for (auto& x : v) {
    cplx p = n.coefficient;
    for (int i = 0; i < n.j; ++i) p *= x;
    const cplx xb = std::conj(x);
    for (int i = 0; i < n.k; ++i) p *= xb;
    x = p;
  }
  const SpatialSpectrum f = spatial_forward(pg, v);
  // The -M/2 row has no +M/2 partner in the band; dropping it keeps the
  // truncation symmetric under xi -> -xi.
  std::vector<cplx> out(g.spatial_size());
  for (std::size_t s = 0; s < out.size(); ++s) {
    const MultiIndex idx = g.multi_index(s);
    bool edge = false;
    for (int d = 0; d < g.dim(); ++d) edge = edge || idx[d] == -g.modes() / 2;
    if (!edge) out[s] = f.at(pg.spatial_offset(idx));
  }
  return out;
}

Trajectory picard_step(const Trajectory& u_curr, const SpatialSpectrum& u0, const NonlinearitySpec& n,
                       const SolveConfig& cfg) {
  const LatticeGeometry& g = cfg.geometry;
  check_slices(g, u_curr);
  const int S = cfg.time_steps;
  if (u_curr.slices.size() != static_cast<std::size_t>(2 * S + 1))
    throw GeometryError("trajectory does not match time_steps");
  const double dt = cfg.T / S;
  const std::vector<double> x2 = g.xi_norm_sq_table();
  const std::size_t m = x2.size();

  // G_k = e^{i t_k |xi|^2} N(u(t_k)), the integrand in the interaction picture
  std::vector<std::vector<cplx>> G(2 * S + 1);
  parallel_for(G.size(), [&](std::size_t k) {
    G[k] = nonlinear_term(g, u_curr.slices[k], n);
    const double t = u_curr.times[k];
    for (std::size_t i = 0; i < m; ++i) G[k][i] *= std::polar(1.0, t * x2[i]);
  });

  std::vector<std::vector<cplx>> I(2 * S + 1, std::vector<cplx>(m));
  for (int k = S + 1; k <= 2 * S; ++k)
    for (std::size_t i = 0; i < m; ++i) I[k][i] = I[k - 1][i] + 0.5 * dt * (G[k - 1][i] + G[k][i]);
  for (int k = S - 1; k >= 0; --k)
    for (std::size_t i = 0; i < m; ++i) I[k][i] = I[k + 1][i] - 0.5 * dt * (G[k][i] + G[k + 1][i]);

  Trajectory out;
  out.times = u_curr.times;
  out.slices.resize(2 * S + 1);
  for (int k = 0; k <= 2 * S; ++k) {
    const double t = out.times[k];
    auto& sl = out.slices[k];
    sl.resize(m);
    for (std::size_t i = 0; i < m; ++i) sl[i] = std::polar(1.0, -t * x2[i]) * (u0.at(i) + I[k][i]);
  }
  return out;
}

SolveResult solve_local(const SpatialSpectrum& u0, const NonlinearitySpec& n, const SolveConfig& cfg) {
  if (cfg.max_iters < 1) throw ConfigError("max_iters must be >= 1");
  const LatticeGeometry& g = cfg.geometry;
  SolveResult r;
  r.trajectory = free_trajectory(u0, cfg);
  for (int it = 0; it < cfg.max_iters; ++it) {
    Trajectory next = picard_step(r.trajectory, u0, n, cfg);
    const double d = trajectory_distance(g, next, r.trajectory, cfg.sobolev_index);
    r.residuals.push_back(d);
    r.trajectory = std::move(next);
    if (!std::isfinite(d)) {
      r.diverged = true;
      r.diagnostics = "non-finite residual at iteration " + std::to_string(it + 1);
      break;
    }
    if (d < cfg.residual_tol) break;
    const std::size_t L = r.residuals.size();
    if (L >= 4 && r.residuals[L - 1] > r.residuals[L - 2] && r.residuals[L - 2] > r.residuals[L - 3] &&
        r.residuals[L - 3] > r.residuals[L - 4]) {
      r.diverged = true;
      r.diagnostics = "residual increased three times in a row at iteration " + std::to_string(it + 1);
      break;
    }
  }
  r.iterations = static_cast<int>(r.residuals.size());
  r.converged = !r.diverged && r.residuals.back() < cfg.residual_tol;
  if (!r.converged && !r.diverged)
    r.diagnostics = "max_iters reached with residual " + std::to_string(r.residuals.back());
  for (const auto& sl : r.trajectory.slices) r.hs_trace.push_back(hs_norm(g, sl, cfg.sobolev_index));
  return r;
}

double contraction_ratio(const std::vector<double>& residuals) {
  if (residuals.empty()) return 0.0;
  const double floor = 1e3 * DBL_EPSILON * std::max(1.0, residuals.front());
  double worst = 0.0;
  for (std::size_t i = 1; i < residuals.size(); ++i) {
    if (residuals[i] < floor || residuals[i - 1] < floor) break;
    worst = std::max(worst, residuals[i] / residuals[i - 1]);
  }
  return worst;
}

double lipschitz_quotient(const SpatialSpectrum& u0, const SpatialSpectrum& u0p, const NonlinearitySpec& n,
                          const SolveConfig& cfg) {
  const LatticeGeometry& g = cfg.geometry;
  std::vector<cplx> d(g.spatial_size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = u0.at(i) - u0p.at(i);
  const double den = hs_norm(g, d, cfg.sobolev_index);
  if (!(den > 0.0)) throw std::invalid_argument("lipschitz quotient: identical data give a zero denominator");
  const SolveResult a = solve_local(u0, n, cfg);
  const SolveResult b = solve_local(u0p, n, cfg);
  if (!a.converged || !b.converged)
    throw SolverError("lipschitz probe aborted, solve did not converge: " +
                      (a.converged ? b.diagnostics : a.diagnostics));
  return trajectory_distance(g, a.trajectory, b.trajectory, cfg.sobolev_index) / den;
}

LipschitzReport lipschitz_probe(const SpatialSpectrum& u0, double delta, const NonlinearitySpec& n,
                                const SolveConfig& cfg, int trials, std::uint64_t seed) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw std::invalid_argument("lipschitz probe: delta must be positive, zero gives a zero denominator");
  if (trials < 1) throw ConfigError("lipschitz probe needs trials >= 1");
  const LatticeGeometry& g = cfg.geometry;
  const SolveResult base = solve_local(u0, n, cfg);
  if (!base.converged) throw SolverError("lipschitz probe aborted, base solve did not converge: " + base.diagnostics);
  const double scale = std::max(u0.hs_norm(cfg.sobolev_index), 0.0);

  LipschitzReport rep;
  rep.delta = delta;
  rep.trials = trials;
  for (int t = 0; t < trials; ++t) {
    RoughDataSpec rs;
    rs.s = cfg.sobolev_index;
    rs.seed = derive_seed(seed, static_cast<std::uint64_t>(t));
    const SpatialSpectrum dir = rough_data(g, rs);
    const double dn = dir.hs_norm(cfg.sobolev_index);
    for (int half = 0; half < 2; ++half) {
      const double size = (half ? 0.5 * delta : delta) * (scale > 0.0 ? scale : 1.0);
      std::vector<cplx> p(g.spatial_size());
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = u0.at(i) + dir.at(i) * (size / dn);
      const SpatialSpectrum u0p(g, std::move(p));
      const SolveResult r = solve_local(u0p, n, cfg);
      if (!r.converged) throw SolverError("lipschitz probe aborted, perturbed solve did not converge: " + r.diagnostics);
      std::vector<cplx> d(g.spatial_size());
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = u0p.at(i) - u0.at(i);
      const double q = trajectory_distance(g, r.trajectory, base.trajectory, cfg.sobolev_index) /
                       hs_norm(g, d, cfg.sobolev_index);
      double& slot = half ? rep.quotient_half : rep.quotient;
      slot = std::max(slot, q);
    }
  }
  return rep;
}

PersistenceReport persistence_probe(const SolveResult& r, const SolveConfig& cfg) {
  const LatticeGeometry& g = cfg.geometry;
  const auto& sl = r.trajectory.slices;
  PersistenceReport p;
  if (sl.empty()) return p;
  std::vector<cplx> d(g.spatial_size());
  for (std::size_t k = 0; k + 1 < sl.size(); ++k) {
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = sl[k + 1][i] - sl[k][i];
    p.max_jump = std::max(p.max_jump, hs_norm(g, d, cfg.sobolev_index));
  }
  const double n0 = hs_norm(g, sl[sl.size() / 2], cfg.sobolev_index);
  if (n0 > 0.0) {
    double top = 0.0;
    for (const auto& s : sl) top = std::max(top, hs_norm(g, s, cfg.sobolev_index));
    p.max_growth = top / n0;
  }
  return p;
}

BisectionReport bisect_time(const SpatialSpectrum& u0, const NonlinearitySpec& n, SolveConfig cfg,
                            int max_halvings) {
  for (int h = 0; h <= max_halvings; ++h) {
    SolveResult r = solve_local(u0, n, cfg);
    const double ratio = contraction_ratio(r.residuals);
    if (r.converged && ratio <= 0.5) return {cfg.T, h, ratio, std::move(r)};
    cfg.T *= 0.5;
  }
  throw SolverError("no contracting time found after " + std::to_string(max_halvings) + " halvings");
}

FrequencyField trajectory_field(const Trajectory& u, const SolveConfig& cfg) {
  const LatticeGeometry& sg = cfg.geometry;
  check_slices(sg, u);
  const int S = cfg.time_steps;
  if (u.slices.size() != static_cast<std::size_t>(2 * S + 1)) throw GeometryError("trajectory does not match time_steps");
  const int K = 2 * S;
  const double pi = std::acos(-1.0);
  const LatticeGeometry g = LatticeGeometry::unchecked(sg.kind(), sg.modes(), sg.xi_spacing(), K, pi / cfg.T);
  std::vector<cplx> vals(g.size());
  for (int j = 0; j < K; ++j) {
    const int k = g.tau_signed_index(j) + S;
    const std::vector<cplx> x = spatial_inverse(SpatialSpectrum(sg, u.slices[k]));
    for (std::size_t s = 0; s < x.size(); ++s) vals[s * K + j] = x[s];
  }
  return forward_transform(SpatialField(g, std::move(vals)));
}

double xsb_diagnostic(const Trajectory& u, const SolveConfig& cfg, double s, double b) {
  return restricted_norm_proxy(trajectory_field(u, cfg), {s, b, Sign::plus}, {cfg.T, CutoffProfile::smooth_bump});
}

}  // namespace xsb
