#include "xsblab/counterexamples.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "xsblab/errors.hpp"
#include "xsblab/parallel.hpp"
#include "xsblab/regression.hpp"

namespace xsb {

namespace {

constexpr double torus_dtau = 0.5;
constexpr double line_dtau = 0.25;

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
long long ceil_div(long long a, long long b) { return -floor_div(-a, b); }

// delta at xi times chi(tau - center), chi closed on [-1, 1], tau_spacing 1/2.
Patch torus_bump(int dim, MultiIndex xi, long long center, double value = 1.0) {
  Patch p = Patch::zeros(dim, 1.0, torus_dtau, xi, {1, 1, 1}, static_cast<int>(2 * center - 2), 5);
  for (cplx& z : p.data) z = value;
  return p;
}

// chi(xi - xc) chi(tau + sign xi^2), half-open unit intervals, xi_spacing 1/(4n), tau_spacing 1/4.
Patch line_bump(int n, int xc, int sign) {
  const long long q = 4LL * n;  // sites per unit of xi
  const long long k_lo = q * (xc - 1), k_hi = q * (xc + 1);  // [k_lo, k_hi)
  const long long den = 4LL * n * n;                          // 16 n^2 tau = 4 n^2 j
  auto j_range = [&](long long k) {
    const long long sk = sign * k * k;
    return std::pair<long long, long long>{ceil_div(-16LL * n * n - sk, den), ceil_div(16LL * n * n - sk, den) - 1};
  };
  long long jmin = j_range(k_lo).first, jmax = j_range(k_lo).second;
  for (long long k = k_lo; k < k_hi; ++k) {
    const auto [a, b] = j_range(k);
    jmin = std::min(jmin, a);
    jmax = std::max(jmax, b);
  }
  Patch p = Patch::zeros(1, 1.0 / static_cast<double>(q), line_dtau, {static_cast<int>(k_lo), 0, 0},
                         {static_cast<int>(k_hi - k_lo), 1, 1}, static_cast<int>(jmin),
                         static_cast<int>(jmax - jmin + 1));
  for (long long k = k_lo; k < k_hi; ++k) {
    const auto [a, b] = j_range(k);
    for (long long j = a; j <= b; ++j) p.at(k - k_lo, static_cast<int>(j - jmin)) = 1.0;
  }
  return p;
}

long long sq(long long v) { return v * v; }

std::vector<CounterexampleFamily> build() {
  std::vector<CounterexampleFamily> r;
  r.push_back({"ex41", "ex41-target",
               "u1 u2 in X_{s,b'} on T^d, d >= 2: fails for all s < 0; conv >= delta_{n(e1+e2)} chi(tau + 2n^2)", "-s",
               DomainKind::torus_2d, 2, [](const EstimateParams& p) { return -p.s; }});
  r.push_back({"ex42f", "ex42-target",
               "u1bar u2bar u3bar in X_{s,b'} on T fails for all s< -1/3 if b - b' <= 1; f-sequence, "
               "conv >= delta_0 chi(tau - 6n^2)",
               "-3s+2b'", DomainKind::torus_1d, 3, [](const EstimateParams& p) { return -3 * p.s + 2 * p.bprime; }});
  r.push_back({"ex42g", "ex42-target",
               "u1bar u2bar u3bar in X_{s,b'} on T fails for all s< -1/3 if b - b' <= 1; g-sequence, "
               "restriction -2b/3 <= s",
               "-3s-2b", DomainKind::torus_1d, 3, [](const EstimateParams& p) { return -3 * p.s - 2 * p.b; }});
  r.push_back({"ex51", "ex51-target",
               "u1 u2 u3 u4 in X_{s,b'} on T fails for all s < 0; conv >= delta_{3n} chi(tau + xi^2)", "-2s",
               DomainKind::torus_1d, 4, [](const EstimateParams& p) { return -2 * p.s; }});
  r.push_back({"ex51r", "ex51r-target", "u1 u2 u3 in X_{s,b'} on T fails for all s < 0 (first three sequences)",
               "-2s", DomainKind::torus_1d, 3, [](const EstimateParams& p) { return -2 * p.s; }});
  r.push_back({"ex52", "ex52-target",
               "u1 u2bar u3 u4bar in X_{s,b'} on T fails for all s < 0; conv >= delta_0 chi(tau)", "-2s",
               DomainKind::torus_1d, 4, [](const EstimateParams& p) { return -2 * p.s; }});
  r.push_back({"ex52r", "ex52r-target", "u1 u2bar u3 in X_{s,b'} on T fails for all s < 0 (first three sequences)",
               "-2s", DomainKind::torus_1d, 3, [](const EstimateParams& p) { return -2 * p.s; }});
  r.push_back({"ex53", "prop51",
               "u1 u2 u3bar u4bar in X_{s,b'}(R) fails for all s < -1/8; conv >= c chi_c(2n xi) chi_c(tau)",
               "-4s-1/2", DomainKind::line_1d, 4, [](const EstimateParams& p) { return -4 * p.s - 0.5; }});
  r.back().default_bprime = -1.0;
  return r;
}

void require_n(const CounterexampleFamily& f, int n) {
  if (n < 0 || (f.kind == DomainKind::line_1d && n < 1))
    throw GeometryError(f.id + ": member index n = " + std::to_string(n) + " is not defined");
}

struct Box {
  int dim = 1;
  std::array<long long, 3> lo{0, 0, 0}, hi{0, 0, 0};
  long long tlo = 0, thi = 0;
};

Box box_of(const Patch& p) {
  Box b;
  b.dim = p.dim;
  for (int d = 0; d < p.dim; ++d) {
    b.lo[d] = p.lo[d];
    b.hi[d] = p.lo[d] + p.extent[d] - 1;
  }
  b.tlo = p.tau_lo;
  b.thi = p.tau_lo + p.tau_extent - 1;
  return b;
}

std::vector<Box> support_boxes(const CounterexampleFamily& f, int n) {
  const std::vector<Patch> parts = family_patches(f, n);
  std::vector<Box> boxes;
  Box sum;
  sum.dim = parts[0].dim;
  for (const Patch& p : parts) {
    const Box b = box_of(p);
    boxes.push_back(b);
    for (int d = 0; d < b.dim; ++d) {
      sum.lo[d] += b.lo[d];
      sum.hi[d] += b.hi[d];
    }
    sum.tlo += b.tlo;
    sum.thi += b.thi;
  }
  boxes.push_back(sum);
  boxes.push_back(box_of(family_minorant(f, n, 1.0)));
  return boxes;
}

}  // namespace

const std::vector<CounterexampleFamily>& families() {
  static const std::vector<CounterexampleFamily> all = build();
  return all;
}

const CounterexampleFamily& find_family(const std::string& id) {
  for (const auto& f : families())
    if (f.id == id) return f;
  throw ConfigError("unknown counterexample family '" + id + "'");
}

std::vector<Patch> family_patches(const CounterexampleFamily& f, int n) {
  require_n(f, n);
  const long long m = n, m2 = sq(n);
  const int N = n;
  if (f.id == "ex41") return {torus_bump(2, {N, 0, 0}, -m2), torus_bump(2, {0, N, 0}, -m2)};
  if (f.id == "ex42f") return {torus_bump(1, {N, 0, 0}, m2), torus_bump(1, {N, 0, 0}, m2),
                               torus_bump(1, {-2 * N, 0, 0}, 4 * m2)};
  if (f.id == "ex42g") return {torus_bump(1, {N, 0, 0}, -5 * m2), torus_bump(1, {N, 0, 0}, m2),
                               torus_bump(1, {-2 * N, 0, 0}, 4 * m2)};
  if (f.id == "ex51" || f.id == "ex51r") {
    // chi(tau + xi^2) at xi = 2n, 2n, -n, 0
    std::vector<Patch> p{torus_bump(1, {2 * N, 0, 0}, -4 * m2), torus_bump(1, {2 * N, 0, 0}, -4 * m2),
                         torus_bump(1, {-N, 0, 0}, -m2)};
    if (f.id == "ex51") p.push_back(torus_bump(1, {0, 0, 0}, 0));
    return p;
  }
  if (f.id == "ex52" || f.id == "ex52r") {
    // u1 u2bar u3 u4bar: chi(tau + xi^2) at n, chi(tau - xi^2) at -n, chi(tau +- 0) at 0
    std::vector<Patch> p{torus_bump(1, {N, 0, 0}, -m * m), torus_bump(1, {-N, 0, 0}, m * m),
                         torus_bump(1, {0, 0, 0}, 0)};
    if (f.id == "ex52") p.push_back(torus_bump(1, {0, 0, 0}, 0));
    return p;
  }
  if (f.id == "ex53") return {line_bump(N, N, +1), line_bump(N, N, +1), line_bump(N, -N, -1), line_bump(N, -N, -1)};
  throw ConfigError("no generator for family '" + f.id + "'");
}

Patch family_minorant(const CounterexampleFamily& f, int n, double c) {
  require_n(f, n);
  const long long m2 = sq(n);
  const int N = n;
  if (f.id == "ex41") return torus_bump(2, {N, N, 0}, -2 * m2);
  if (f.id == "ex42f") return torus_bump(1, {0, 0, 0}, 6 * m2);
  if (f.id == "ex42g") return torus_bump(1, {0, 0, 0}, 0);
  if (f.id == "ex51" || f.id == "ex51r") return torus_bump(1, {3 * N, 0, 0}, -9 * m2);
  if (f.id == "ex52" || f.id == "ex52r") return torus_bump(1, {0, 0, 0}, 0);
  if (f.id == "ex53") {
    // c chi_c(2n xi) chi_c(tau), closed: |k| / 2 <= c, |j| / 4 <= c
    const int kx = static_cast<int>(std::floor(2 * c + 1e-12));
    const int jt = static_cast<int>(std::floor(4 * c + 1e-12));
    Patch p = Patch::zeros(1, 1.0 / (4.0 * n), line_dtau, {-kx, 0, 0}, {2 * kx + 1, 1, 1}, -jt, 2 * jt + 1);
    for (cplx& z : p.data) z = c;
    return p;
  }
  throw ConfigError("no minorant for family '" + f.id + "'");
}

LatticeGeometry minimal_geometry(const CounterexampleFamily& f, int n) {
  const std::vector<Box> boxes = support_boxes(f, n);
  long long xmax = 0, tmax = 0;
  for (const Box& b : boxes) {
    for (int d = 0; d < b.dim; ++d) xmax = std::max({xmax, -b.lo[d], b.hi[d]});
    tmax = std::max({tmax, -b.tlo, b.thi});
  }
  const bool line = f.kind == DomainKind::line_1d;
  const double dxi = line ? 1.0 / (4.0 * n) : 1.0;
  const double dtau = line ? line_dtau : torus_dtau;
  if (line) xmax = std::max<long long>(xmax, (2LL * n + 2) * 4LL * n);  // box holds [-2n-2, 2n+2]
  const long long half_m = xmax + 1;
  const int dim = dimension_of(f.kind);
  const double xi_edge = half_m * dxi;
  const long long need_par = static_cast<long long>(std::ceil(dim * xi_edge * xi_edge / dtau - 1e-9)) + 1;
  const long long half_k = std::max(tmax + 1, need_par);
  return LatticeGeometry::create(f.kind, static_cast<int>(2 * half_m), dxi, static_cast<int>(2 * half_k), dtau);
}

void require_resolves(const CounterexampleFamily& f, int n, const LatticeGeometry& g) {
  const LatticeGeometry need = minimal_geometry(f, n);
  auto fail = [&](const std::string& why) {
    throw GeometryError(f.id + " n=" + std::to_string(n) + ": " + why + " on " + g.fingerprint() +
                        "; minimal adequate geometry " + need.fingerprint());
  };
  if (g.kind() != need.kind()) fail("domain kind mismatch");
  if (g.xi_spacing() != need.xi_spacing() || g.tau_spacing() != need.tau_spacing()) fail("spacing mismatch");
  for (const Box& b : support_boxes(f, n)) {
    for (int d = 0; d < b.dim; ++d)
      if (!g.in_band(static_cast<int>(b.lo[d])) || !g.in_band(static_cast<int>(b.hi[d])))
        fail("xi support outside the band");
    if (!g.tau_in_band(static_cast<int>(b.tlo)) || !g.tau_in_band(static_cast<int>(b.thi)))
      fail("tau support outside the band");
  }
  if (f.kind == DomainKind::line_1d && g.modes() / 2 * g.xi_spacing() < 2.0 * n + 2) fail("box too small");
}

std::vector<FrequencyField> build_family_member(const CounterexampleFamily& f, int n, const LatticeGeometry& g) {
  require_resolves(f, n, g);
  std::vector<FrequencyField> out;
  for (const Patch& p : family_patches(f, n)) out.push_back(p.to_field(g));
  return out;
}

double line_family_constant() {
  static const double c = [] {
    const int n = 4;
    const Patch conv = convolve_all(family_patches(find_family("ex53"), n));
    // sites ordered by r = max(|2n xi|, |tau|); the region for c is {r <= c}
    std::vector<std::pair<double, double>> sites;
    for (std::size_t s = 0; s < conv.spatial_count(); ++s) {
      const double rx = std::abs(2.0 * n * conv.xi(s)[0]);
      for (int j = 0; j < conv.tau_extent; ++j) {
        const double r = std::max(rx, std::abs(conv.tau(j)));
        if (r <= 4.0) sites.emplace_back(r, conv.at(s, j).real());
      }
    }
    std::sort(sites.begin(), sites.end());
    double best = 0.0, running = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sites.size();) {
      const double r = sites[i].first;
      while (i < sites.size() && sites[i].first == r) running = std::min(running, sites[i++].second);
      const double next = i < sites.size() ? sites[i].first : 4.0;
      if (running >= r) best = std::max(best, std::min(running, next));
    }
    return 0.5 * best;
  }();
  return c;
}

LowerBoundReport verify_lower_bound(const CounterexampleFamily& f, int n, const std::optional<LatticeGeometry>& g) {
  if (g) require_resolves(f, n, *g);
  LowerBoundReport rep;
  rep.constant = f.kind == DomainKind::line_1d ? line_family_constant() : 1.0;
  const Patch conv = convolve_all(family_patches(f, n));
  const Patch low = family_minorant(f, n, rep.constant);
  rep.margin = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < low.spatial_count(); ++s) {
    const MultiIndex idx = low.absolute(s);
    for (int j = 0; j < low.tau_extent; ++j) {
      const double want = low.at(s, j).real();
      if (want <= 0.0) continue;
      const cplx have = conv.value(idx, low.tau_lo + j);
      rep.margin = std::min(rep.margin, have.real() - want);
      ++rep.sites;
    }
  }
  rep.pass = rep.sites > 0 && rep.margin >= -1e-12;
  return rep;
}

double family_rhs(const CounterexampleFamily& f, int n) {
  double rhs = 1.0;
  for (const Patch& p : family_patches(f, n)) rhs *= p.l2_norm();
  return rhs;
}

double family_quotient(const CounterexampleFamily& f, const EstimateParams& p, int n) {
  const EstimateInstance inst = find_case(f.target_case).instantiate(p);
  const std::vector<Patch> parts = family_patches(f, n);
  if (parts.size() != inst.factors.size())
    throw std::invalid_argument(f.id + ": arity does not match case " + f.target_case);
  std::vector<Patch> weighted;
  double rhs = 1.0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const FactorSpec& fs = inst.factors[i];
    const Sign eff = fs.conjugated ? flipped(fs.weight.sign) : fs.weight.sign;
    const WeightSpec inv{-fs.weight.s, -fs.weight.b, eff};
    weighted.push_back(parts[i].weighted(
        [&](const XiVector&, double x2, double tau) { return dispersive_weight(inv, x2, tau); }));
    rhs *= parts[i].l2_norm();
  }
  const Patch conv = convolve_all(weighted);
  const WeightSpec out = inst.lhs.xsb;
  double acc = 0.0;
  for (std::size_t s = 0; s < conv.spatial_count(); ++s) {
    const double x2 = conv.xi_norm_sq(s);
    for (int j = 0; j < conv.tau_extent; ++j) {
      const double a = std::norm(conv.at(s, j));
      if (a == 0.0) continue;
      const double w = dispersive_weight(out, x2, conv.tau(j));
      acc += w * w * a;
    }
  }
  return std::sqrt(acc * conv.measure_weight()) / rhs;
}

GrowthReport fit_growth(const CounterexampleFamily& f, const EstimateParams& p, const std::vector<int>& n_list,
                        const GeometrySchedule& schedule) {
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1) throw ConfigError("n values must be positive");
    if (i > 0 && n_list[i] <= n_list[i - 1]) throw ConfigError("n values must be strictly increasing");
  }
  GrowthReport rep;
  rep.family_id = f.id;
  rep.target_case = f.target_case;
  rep.params = p;
  rep.predicted_slope = f.predicted_slope(p);
  rep.admissible = find_case(f.target_case).admissible(p);

  std::vector<int> usable;
  std::vector<std::string> prints;
  std::string last_error;
  for (int n : n_list) {
    try {
      const LatticeGeometry g = schedule ? schedule(n) : minimal_geometry(f, n);
      require_resolves(f, n, g);
      usable.push_back(n);
      prints.push_back(g.fingerprint());
    } catch (const GeometryError& e) {
      last_error = e.what();
    }
  }
  if (usable.size() < 3)
    throw GeometryError(f.id + ": fewer than 3 resolvable n values" +
                        (last_error.empty() ? std::string() : " (" + last_error + ")"));

  std::vector<double> q(usable.size()), rhs(usable.size());
  parallel_for(usable.size(), [&](std::size_t i) {
    q[i] = family_quotient(f, p, usable[i]);
    rhs[i] = family_rhs(f, usable[i]);
  });
  std::vector<double> nd;
  for (std::size_t i = 0; i < usable.size(); ++i) {
    rep.n.push_back(usable[i]);
    rep.quotient.push_back(q[i]);
    rep.log_quotient.push_back(std::log(q[i]));
    rep.rhs.push_back(rhs[i]);
    rep.fingerprint.push_back(prints[i]);
    nd.push_back(usable[i]);
  }
  const LinearFit fit = loglog_fit(nd, q);
  rep.fitted_slope = fit.slope;
  rep.intercept = fit.intercept;
  rep.fit_residual = fit.residual;
  rep.margin = std::abs(rep.fitted_slope - rep.predicted_slope);
  return rep;
}

GrowthReport inadmissible_probe(const EstimateCase& c, const EstimateParams& p, const CounterexampleFamily& f,
                                const std::vector<int>& n_list) {
  if (f.target_case != c.id)
    throw ConfigError("family " + f.id + " targets " + f.target_case + ", not " + c.id);
  return fit_growth(f, p, n_list);
}

}  // namespace xsb
