#include "xsblab/norms.hpp"

#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "xsblab/errors.hpp"

namespace xsb {

namespace {

double bracket_pow(double x2, double e) { return e == 0.0 ? 1.0 : std::pow(1.0 + x2, 0.5 * e); }

double bump_edge(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

}  // namespace

double dispersive_weight(const WeightSpec& w, double xi2, double tau) {
  const double m = tau + sign_value(w.sign) * xi2;
  return bracket_pow(xi2, w.s) * bracket_pow(m * m, w.b);
}

double xsb_norm(const FrequencyField& f, const WeightSpec& w) {
  const LatticeGeometry& g = f.geometry();
  const int k = g.tau_count();
  double acc = 0.0;
  for (std::size_t s = 0; s < g.spatial_size(); ++s) {
    const double xi2 = g.xi_norm_sq(s);
    for (int j = 0; j < k; ++j) {
      const double a = std::norm(f.at(s, j));
      if (a == 0.0) continue;
      const double wt = dispersive_weight(w, xi2, g.tau_value(j));
      acc += wt * wt * a;
    }
  }
  return std::sqrt(acc * g.measure_weight());
}

double mixed_norm(const SpatialField& u, const MixedNormSpec& m) {
  if (!(m.p >= 1.0) || !(m.q >= 1.0)) throw std::invalid_argument("mixed_norm: p, q must be >= 1");
  const LatticeGeometry& g = u.geometry();
  const int k = g.tau_count();
  const std::size_t ns = g.spatial_size();
  std::vector<cplx> v(u.values().begin(), u.values().end());
  if (m.sigma != 0.0) {
    const std::vector<int> dims(g.dim(), g.modes());
    fft::transform_leading(v.data(), dims, k, fft::forward);
    const double norm = 1.0 / static_cast<double>(ns);
    for (std::size_t s = 0; s < ns; ++s) {
      const double wt = bracket_pow(g.xi_norm_sq(s), m.sigma) * norm;
      for (int j = 0; j < k; ++j) v[s * k + j] *= wt;
    }
    fft::transform_leading(v.data(), dims, k, fft::backward);
  }
  const double hx = std::pow(g.x_spacing(), g.dim());
  const double dt = g.t_spacing();
  const bool qinf = std::isinf(m.q), pinf = std::isinf(m.p);
  double outer = 0.0;
  for (int j = 0; j < k; ++j) {
    double inner = 0.0;
    for (std::size_t s = 0; s < ns; ++s) {
      const double a = std::abs(v[s * k + j]);
      inner = qinf ? std::max(inner, a) : inner + std::pow(a, m.q);
    }
    if (!qinf) inner = std::pow(inner * hx, 1.0 / m.q);
    outer = pinf ? std::max(outer, inner) : outer + std::pow(inner, m.p);
  }
  return pinf ? outer : std::pow(outer * dt, 1.0 / m.p);
}

FrequencyField apply_potential(const FrequencyField& f, PotentialKind kind, double sigma) {
  const LatticeGeometry& g = f.geometry();
  const int k = g.tau_count();
  std::vector<cplx> c(f.coeffs().begin(), f.coeffs().end());
  for (std::size_t s = 0; s < g.spatial_size(); ++s) {
    const double xi2 = g.xi_norm_sq(s);
    double wt;
    if (kind == PotentialKind::bessel_J) {
      wt = bracket_pow(xi2, sigma);
    } else if (xi2 > 0.0 || sigma > 0.0) {
      wt = sigma == 0.0 ? 1.0 : std::pow(xi2, 0.5 * sigma);
    } else if (sigma == 0.0) {
      wt = 1.0;
    } else {
      for (int j = 0; j < k; ++j)
        if (c[s * k + j] != cplx{})
          throw SingularSymbolError("riesz potential of negative order on a field with mass at xi = 0");
      wt = 0.0;
    }
    for (int j = 0; j < k; ++j) c[s * k + j] *= wt;
  }
  return FrequencyField(g, std::move(c));
}

FrequencyField apply_modulation(const FrequencyField& f, double b, Sign sign) {
  const LatticeGeometry& g = f.geometry();
  const int k = g.tau_count();
  const WeightSpec w{0.0, b, sign};
  std::vector<cplx> c(f.coeffs().begin(), f.coeffs().end());
  for (std::size_t s = 0; s < g.spatial_size(); ++s) {
    const double xi2 = g.xi_norm_sq(s);
    for (int j = 0; j < k; ++j) c[s * k + j] *= dispersive_weight(w, xi2, g.tau_value(j));
  }
  return FrequencyField(g, std::move(c));
}

double cutoff_profile(CutoffProfile profile, double t, double T) {
  const double a = std::abs(t);
  if (profile == CutoffProfile::sharp) return a <= T ? 1.0 : 0.0;
  if (a <= 0.5 * T) return 1.0;
  if (a >= T) return 0.0;
  const double y = (a - 0.5 * T) / (0.5 * T);
  const double p = bump_edge(1.0 - y), q = bump_edge(y);
  return p / (p + q);
}

FrequencyField apply_time_cutoff(const FrequencyField& f, const CutoffSpec& c) {
  const LatticeGeometry& g = f.geometry();
  if (!(c.T > 0.0) || c.T > 0.5 * g.time_period())
    throw GeometryError("cutoff half-width must lie in (0, " + std::to_string(0.5 * g.time_period()) + "]");
  const int k = g.tau_count();
  std::vector<double> psi(k);
  for (int j = 0; j < k; ++j) psi[j] = cutoff_profile(c.profile, g.time_value(j), c.T);
  std::vector<cplx> v(f.coeffs().begin(), f.coeffs().end());
  fft::transform_rows(v.data(), g.spatial_size(), k, fft::backward);
  const double norm = 1.0 / k;
  for (std::size_t s = 0; s < g.spatial_size(); ++s)
    for (int j = 0; j < k; ++j) v[s * k + j] *= psi[j] * norm;
  fft::transform_rows(v.data(), g.spatial_size(), k, fft::forward);
  return FrequencyField(g, std::move(v));
}

double restricted_norm_proxy(const FrequencyField& f, const WeightSpec& w, const CutoffSpec& c) {
  return xsb_norm(apply_time_cutoff(f, c), w);
}

cplx duality_pairing(const FrequencyField& f, const FrequencyField& g) {
  if (!(f.geometry() == g.geometry())) throw GeometryError("duality_pairing: geometry mismatch");
  cplx acc{};
  auto a = f.coeffs(), b = g.coeffs();
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * std::conj(b[i]);
  return acc * f.geometry().measure_weight();
}

}  // namespace xsb
