#include "xsblab/bilinear.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "xsblab/errors.hpp"
#include "xsblab/norms.hpp"
#include "xsblab/parallel.hpp"

namespace xsb {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double symbol_arg_sq(const BilinearSymbol& sym, const XiVector& a, const XiVector& b) {
  double acc = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double d = sym.family == BilinearFamily::minus ? a[i] - b[i] : a[i] + 2.0 * b[i];
    acc += d * d;
  }
  return acc;
}

void require_same(const FrequencyField& f, const FrequencyField& g) {
  if (!(f.geometry() == g.geometry()))
    throw GeometryError("bilinear operands on different lattices: " + f.geometry().fingerprint() +
                        " vs " + g.geometry().fingerprint());
}

std::vector<char> nonzero_rows(const FrequencyField& f) {
  const LatticeGeometry& g = f.geometry();
  const int k = g.tau_count();
  std::vector<char> nz(g.spatial_size(), 0);
  for (std::size_t s = 0; s < nz.size(); ++s)
    for (int j = 0; j < k && !nz[s]; ++j) nz[s] = f.at(s, j) != cplx{};
  return nz;
}

// Spatial index of xi1 + xi2, or npos when the sum leaves the band.
constexpr std::size_t npos = static_cast<std::size_t>(-1);

std::size_t sum_index(const LatticeGeometry& g, const MultiIndex& a, const MultiIndex& b) {
  MultiIndex c{0, 0, 0};
  for (int i = 0; i < g.dim(); ++i) {
    c[i] = a[i] + b[i];
    if (!g.in_band(c[i])) return npos;
  }
  return g.spatial_offset(c);
}

// For every output site, the list of (xi1, xi2, symbol) pairs that feed it.
struct PairTable {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> pairs;
  std::vector<std::vector<double>> weights;
};

PairTable build_pairs(const BilinearSymbol& sym, const FrequencyField& f, const FrequencyField& g) {
  const LatticeGeometry& geo = f.geometry();
  const std::size_t ns = geo.spatial_size();
  const auto nz1 = nonzero_rows(f), nz2 = nonzero_rows(g);
  std::vector<MultiIndex> idx(ns);
  std::vector<XiVector> xi(ns);
  for (std::size_t s = 0; s < ns; ++s) {
    idx[s] = geo.multi_index(s);
    xi[s] = geo.xi_vector(s);
  }
  PairTable t;
  t.pairs.resize(ns);
  t.weights.resize(ns);
  for (std::size_t a = 0; a < ns; ++a) {
    if (!nz1[a]) continue;
    for (std::size_t b = 0; b < ns; ++b) {
      if (!nz2[b]) continue;
      const std::size_t out = sum_index(geo, idx[a], idx[b]);
      if (out == npos) continue;
      if (sym.vanishes_at(xi[a], xi[b]) && sym.bracket == Bracket::abs && sym.s < 0.0)
        throw SingularSymbolError("|.|^s with s < 0 on its zero set: both operands carry mass there");
      const double w = sym(xi[a], xi[b]);
      if (w == 0.0) continue;
      t.pairs[out].emplace_back(a, b);
      t.weights[out].push_back(w);
    }
  }
  return t;
}

double prefactor(const LatticeGeometry& g) {
  return std::pow(two_pi, -0.5 * (g.dim() + 1)) * g.measure_weight();
}

}  // namespace

double BilinearSymbol::operator()(const XiVector& xi1, const XiVector& xi2) const {
  const double r2 = symbol_arg_sq(*this, xi1, xi2);
  if (s == 0.0) return 1.0;
  if (bracket == Bracket::japanese) return std::pow(1.0 + r2, 0.5 * s);
  if (r2 == 0.0) {
    if (s > 0.0) return 0.0;
    throw SingularSymbolError("|0|^s evaluated with s < 0");
  }
  return std::pow(r2, 0.5 * s);
}

bool BilinearSymbol::vanishes_at(const XiVector& xi1, const XiVector& xi2) const {
  return symbol_arg_sq(*this, xi1, xi2) == 0.0;
}

FrequencyField apply_bilinear(const BilinearSymbol& sym, const FrequencyField& f, const FrequencyField& g) {
  require_same(f, g);
  const LatticeGeometry& geo = f.geometry();
  const int k = geo.tau_count();
  const int L = 2 * k;
  const std::size_t ns = geo.spatial_size();
  const PairTable table = build_pairs(sym, f, g);

  // Rows in physical time on a doubled tau grid: linear, not cyclic, convolution.
  auto to_time = [&](const FrequencyField& src) {
    std::vector<cplx> rows(ns * L);
    for (std::size_t s = 0; s < ns; ++s) {
      for (int j = 0; j < k; ++j) {
        const int t = geo.tau_signed_index(j);
        rows[s * L + (t < 0 ? t + L : t)] = src.at(s, j);
      }
    }
    fft::transform_rows(rows.data(), ns, L, fft::backward);
    return rows;
  };
  const std::vector<cplx> a = to_time(f), b = to_time(g);

  const double pre = prefactor(geo) / L;
  std::vector<cplx> out(geo.size());
  parallel_for(ns, [&](std::size_t o) {
    const auto& pairs = table.pairs[o];
    if (pairs.empty()) return;
    const auto& ws = table.weights[o];
    std::vector<cplx> acc(L);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const cplx* ra = &a[pairs[p].first * L];
      const cplx* rb = &b[pairs[p].second * L];
      const double w = ws[p];
      for (int t = 0; t < L; ++t) acc[t] += w * ra[t] * rb[t];
    }
    fft::transform_rows(acc.data(), 1, L, fft::forward);
    for (int j = 0; j < k; ++j) {
      const int t = geo.tau_signed_index(j);
      out[o * k + j] = acc[t < 0 ? t + L : t] * pre;
    }
  });
  return FrequencyField(geo, std::move(out));
}

FrequencyField apply_bilinear_oracle(const BilinearSymbol& sym, const FrequencyField& f,
                                     const FrequencyField& g) {
  require_same(f, g);
  const LatticeGeometry& geo = f.geometry();
  const int k = geo.tau_count();
  const std::size_t ns = geo.spatial_size();
  const auto nz1 = nonzero_rows(f), nz2 = nonzero_rows(g);
  const double pre = prefactor(geo);
  std::vector<cplx> out(geo.size());
  for (std::size_t a = 0; a < ns; ++a) {
    const MultiIndex ia = geo.multi_index(a);
    const XiVector xa = geo.xi_vector(a);
    for (int ja = 0; ja < k; ++ja) {
      for (std::size_t b = 0; b < ns; ++b) {
        const MultiIndex ib = geo.multi_index(b);
        const XiVector xb = geo.xi_vector(b);
        const std::size_t o = sum_index(geo, ia, ib);
        if (o == npos) continue;
        if (sym.bracket == Bracket::abs && sym.s < 0.0 && sym.vanishes_at(xa, xb)) {
          if (nz1[a] && nz2[b])
            throw SingularSymbolError("|.|^s with s < 0 on its zero set: both operands carry mass there");
          continue;
        }
        const double w = sym(xa, xb);
        for (int jb = 0; jb < k; ++jb) {
          const int t = geo.tau_signed_index(ja) + geo.tau_signed_index(jb);
          if (!geo.tau_in_band(t)) continue;
          out[o * k + geo.tau_storage_of(t)] += pre * w * f.at(a, ja) * g.at(b, jb);
        }
      }
    }
  }
  return FrequencyField(geo, std::move(out));
}

std::pair<cplx, cplx> adjoint_check(double s, const FrequencyField& u, const FrequencyField& v,
                                    const FrequencyField& w) {
  const cplx lhs = duality_pairing(apply_bilinear(J_minus(s), u, v), w);
  const cplx rhs = duality_pairing(v, apply_bilinear(J_plus(s), w, conjugate_field(u)));
  return {lhs, rhs};
}

std::pair<FrequencyField, FrequencyField> conjugation_identity_check(double s, const FrequencyField& u,
                                                                     const FrequencyField& v) {
  FrequencyField lhs = apply_bilinear(J_minus(s), conjugate_field(u), conjugate_field(v));
  FrequencyField rhs = conjugate_field(apply_bilinear(J_minus(s), u, v));
  return {std::move(lhs), std::move(rhs)};
}

Lemma24Result lemma24_identity(const SpatialSpectrum& u1, const SpatialSpectrum& u2, double t_max) {
  const LatticeGeometry& g = u1.geometry();
  if (g.dim() != 1 || !(u2.geometry() == g)) throw GeometryError("lemma24_identity: one shared 1D lattice required");
  if (!(t_max > 0.0)) throw std::invalid_argument("lemma24_identity: t_max must be positive");
  const int m = g.modes();
  const double dxi = g.xi_spacing();

  double peak = 0.0;
  for (int i = 0; i < m; ++i) peak = std::max({peak, std::abs(u1.at(i)), std::abs(u2.at(i))});
  Lemma24Result r;
  if (peak == 0.0) return r;
  for (int i = 0; i < m; ++i) {
    if (std::abs(g.signed_index(i)) < 3 * m / 8) continue;
    if (std::abs(u1.at(i)) > 1e-10 * peak || std::abs(u2.at(i)) > 1e-10 * peak)
      throw GeometryError("lemma24_identity: spectrum reaches the outer quarter of the band (aliasing)");
  }

  // Closed form: (|u1|^2 |u2|^2 + R) / 2 in the unitary convention.
  double n1 = 0.0, n2 = 0.0;
  cplx cross{};
  for (int a = 0; a < m; ++a) {
    n1 += std::norm(u1.at(a));
    n2 += std::norm(u2.at(a));
    for (int b = 0; b < m; ++b)
      cross += u1.at(a) * std::conj(u1.at(b)) * u2.at(b) * std::conj(u2.at(a));
  }
  r.norm_product = n1 * dxi * n2 * dxi;
  r.cross_term = cross.real() * dxi * dxi;
  r.rhs = 0.5 * (r.norm_product + r.cross_term);

  // Populated sites and the pair table of I^{1/2}_-.
  std::vector<int> s1, s2;
  for (int i = 0; i < m; ++i) {
    if (std::abs(u1.at(i)) > 1e-16 * peak) s1.push_back(i);
    if (std::abs(u2.at(i)) > 1e-16 * peak) s2.push_back(i);
  }
  if (s1.empty() || s2.empty()) return r;
  struct Term { int out; int a; int b; cplx amp; };
  std::vector<Term> terms;
  double phi_min = 1e300, phi_max = -1e300;
  const double c = dxi / std::sqrt(two_pi);
  for (int a : s1) {
    for (int b : s2) {
      const double x1 = g.signed_index(a) * dxi, x2 = g.signed_index(b) * dxi;
      const double w = std::sqrt(std::abs(x1 - x2));
      if (w == 0.0) continue;
      terms.push_back({g.signed_index(a) + g.signed_index(b) + m, a, b, c * w * u1.at(a) * u2.at(b)});
      phi_min = std::min(phi_min, x1 * x1 + x2 * x2);
      phi_max = std::max(phi_max, x1 * x1 + x2 * x2);
    }
  }
  const double omega = std::max(phi_max - phi_min, 1.0);
  int steps = static_cast<int>(std::ceil(2.0 * t_max * omega / 0.05));
  steps += steps % 2;
  r.time_steps = steps;
  const double dt = 2.0 * t_max / steps;

  std::vector<double> samples(steps + 1);
  parallel_for(steps + 1, [&](std::size_t q) {
    const double t = -t_max + q * dt;
    std::vector<cplx> ph(m);
    for (int i = 0; i < m; ++i) {
      const double x = g.signed_index(i) * dxi;
      ph[i] = std::polar(1.0, -t * x * x);
    }
    std::vector<cplx> acc(2 * m);
    for (const Term& tm : terms) acc[tm.out] += tm.amp * ph[tm.a] * ph[tm.b];
    double v = 0.0;
    for (const cplx& z : acc) v += std::norm(z);
    samples[q] = v * dxi;
  });
  double integral = samples.front() + samples.back();
  for (int q = 1; q < steps; ++q) integral += (q % 2 ? 4.0 : 2.0) * samples[q];
  r.lhs = integral * dt / 3.0;
  return r;
}

}  // namespace xsb
