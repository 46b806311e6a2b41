#include "xsblab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "xsblab/errors.hpp"
#include "xsblab/format.hpp"

namespace xsb {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::vector<int> spatial_dims(const LatticeGeometry& g) { return std::vector<int>(g.dim(), g.modes()); }

std::vector<int> full_dims(const LatticeGeometry& g) {
  auto d = spatial_dims(g);
  d.push_back(g.tau_count());
  return d;
}

void check_finite(std::span<const cplx> v, const char* what) {
  for (const cplx& c : v) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw std::invalid_argument(std::string(what) + ": non-finite coefficient");
  }
}

void require_same(const LatticeGeometry& a, const LatticeGeometry& b) {
  if (!(a == b)) throw GeometryError("geometry mismatch: " + a.fingerprint() + " vs " + b.fingerprint());
}

}  // namespace

std::string_view to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::torus_1d: return "torus_1d";
    case DomainKind::torus_2d: return "torus_2d";
    case DomainKind::torus_3d: return "torus_3d";
    case DomainKind::line_1d: return "line_1d";
  }
  return "?";
}

DomainKind parse_domain_kind(std::string_view text) {
  for (auto k : {DomainKind::torus_1d, DomainKind::torus_2d, DomainKind::torus_3d, DomainKind::line_1d})
    if (to_string(k) == text) return k;
  throw ConfigError("unknown domain_kind '" + std::string(text) + "'");
}

int dimension_of(DomainKind kind) {
  switch (kind) {
    case DomainKind::torus_2d: return 2;
    case DomainKind::torus_3d: return 3;
    default: return 1;
  }
}

bool is_torus(DomainKind kind) { return kind != DomainKind::line_1d; }

std::string_view to_string(Sign s) { return s == Sign::plus ? "+" : "-"; }

Sign parse_sign(std::string_view text) {
  if (text == "+" || text == "plus") return Sign::plus;
  if (text == "-" || text == "minus") return Sign::minus;
  throw ConfigError("unknown sign '" + std::string(text) + "'");
}

// ---------------------------------------------------------------- geometry

LatticeGeometry LatticeGeometry::unchecked(DomainKind kind, int m, double dxi, int k, double dtau) {
  if (m <= 0 || m % 2 != 0) throw GeometryError("modes_per_axis must be a positive even integer");
  if (k <= 0 || k % 2 != 0) throw GeometryError("tau_count must be a positive even integer");
  if (!(dxi > 0.0) || !std::isfinite(dxi)) throw GeometryError("xi_spacing must be positive");
  if (!(dtau > 0.0) || !std::isfinite(dtau)) throw GeometryError("tau_spacing must be positive");
  if (is_torus(kind) && dxi != 1.0) throw GeometryError("torus lattices require xi_spacing = 1");
  return LatticeGeometry(kind, m, dxi, k, dtau);
}

LatticeGeometry LatticeGeometry::create(DomainKind kind, int m, double dxi, int k, double dtau) {
  LatticeGeometry g = unchecked(kind, m, dxi, k, dtau);
  if (kind == DomainKind::line_1d && dxi > 0.25)
    throw GeometryError("line_1d requires xi_spacing <= 1/4, got " + format_short(dxi));
  // The paraboloid tau = -+|xi|^2 must sit on the grid for both signs.
  const double need = g.max_xi_norm_sq();
  const double top = (k / 2 - 1) * dtau;
  if (top < need) {
    const int kmin = 2 * (static_cast<int>(std::ceil(need / dtau - 1e-12)) + 1);
    throw GeometryError("tau range too small for " + g.fingerprint() + ": need (K/2-1)*dtau >= " +
                        format_short(need) + ", minimal tau_count = " + std::to_string(kmin));
  }
  return g;
}

std::size_t LatticeGeometry::spatial_size() const {
  std::size_t s = 1;
  for (int i = 0; i < dim(); ++i) s *= static_cast<std::size_t>(modes_);
  return s;
}

double LatticeGeometry::spatial_measure() const { return std::pow(xi_spacing_, dim()); }

double LatticeGeometry::max_xi_norm_sq() const {
  const double e = 0.5 * modes_ * xi_spacing_;
  return dim() * e * e;
}

double LatticeGeometry::x_spacing() const { return two_pi / (modes_ * xi_spacing_); }
double LatticeGeometry::t_spacing() const { return two_pi / (tau_count_ * tau_spacing_); }
double LatticeGeometry::spatial_period() const { return two_pi / xi_spacing_; }
double LatticeGeometry::time_period() const { return two_pi / tau_spacing_; }

double LatticeGeometry::physical_cell_volume() const {
  return std::pow(x_spacing(), dim()) * t_spacing();
}

std::string LatticeGeometry::fingerprint() const {
  return std::string(to_string(kind_)) + "/M=" + std::to_string(modes_) + "/dxi=" +
         format_short(xi_spacing_) + "/K=" + std::to_string(tau_count_) +
         "/dtau=" + format_short(tau_spacing_);
}

MultiIndex LatticeGeometry::multi_index(std::size_t spatial) const {
  MultiIndex idx{0, 0, 0};
  for (int a = dim() - 1; a >= 0; --a) {
    idx[a] = signed_index(static_cast<int>(spatial % modes_));
    spatial /= modes_;
  }
  return idx;
}

std::size_t LatticeGeometry::spatial_offset(const MultiIndex& signed_idx) const {
  std::size_t off = 0;
  for (int a = 0; a < dim(); ++a) off = off * modes_ + storage_of(signed_idx[a]);
  return off;
}

XiVector LatticeGeometry::xi_vector(std::size_t spatial) const {
  const MultiIndex m = multi_index(spatial);
  return {m[0] * xi_spacing_, m[1] * xi_spacing_, m[2] * xi_spacing_};
}

double LatticeGeometry::xi_norm_sq(std::size_t spatial) const {
  const XiVector xi = xi_vector(spatial);
  return xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
}

std::vector<double> LatticeGeometry::xi_norm_sq_table() const {
  std::vector<double> t(spatial_size());
  for (std::size_t s = 0; s < t.size(); ++s) t[s] = xi_norm_sq(s);
  return t;
}

std::size_t LatticeGeometry::negated_spatial(std::size_t spatial) const {
  std::size_t out = 0, mul = 1;
  for (int a = 0; a < dim(); ++a) {
    const int k = static_cast<int>(spatial % modes_);
    spatial /= modes_;
    out += static_cast<std::size_t>((modes_ - k) % modes_) * mul;
    mul *= modes_;
  }
  return out;
}

LatticeGeometry LatticeGeometry::padded(int spatial_modes, int tau_count) const {
  return unchecked(kind_, spatial_modes, xi_spacing_, tau_count, tau_spacing_);
}

// ------------------------------------------------------------------ fields

FrequencyField::FrequencyField(LatticeGeometry geometry)
    : geometry_(geometry), coeffs_(geometry.size()) {}

FrequencyField::FrequencyField(LatticeGeometry geometry, std::vector<cplx> coeffs)
    : geometry_(geometry), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != geometry_.size())
    throw GeometryError("coefficient count " + std::to_string(coeffs_.size()) +
                        " does not match " + geometry_.fingerprint());
  check_finite(coeffs_, "FrequencyField");
}

FrequencyField FrequencyField::scaled(cplx factor) const {
  std::vector<cplx> c(coeffs_);
  for (auto& x : c) x *= factor;
  return FrequencyField(geometry_, std::move(c));
}

FrequencyField FrequencyField::operator+(const FrequencyField& o) const {
  require_same(geometry_, o.geometry_);
  std::vector<cplx> c(coeffs_);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.coeffs_[i];
  return FrequencyField(geometry_, std::move(c));
}

FrequencyField FrequencyField::operator-(const FrequencyField& o) const {
  require_same(geometry_, o.geometry_);
  std::vector<cplx> c(coeffs_);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= o.coeffs_[i];
  return FrequencyField(geometry_, std::move(c));
}

double FrequencyField::l2_norm() const {
  double acc = 0.0;
  for (const cplx& c : coeffs_) acc += std::norm(c);
  return std::sqrt(acc * geometry_.measure_weight());
}

SpatialField::SpatialField(LatticeGeometry geometry) : geometry_(geometry), values_(geometry.size()) {}

SpatialField::SpatialField(LatticeGeometry geometry, std::vector<cplx> values)
    : geometry_(geometry), values_(std::move(values)) {
  if (values_.size() != geometry_.size())
    throw GeometryError("sample count " + std::to_string(values_.size()) + " does not match " +
                        geometry_.fingerprint());
  check_finite(values_, "SpatialField");
}

double SpatialField::l2_norm() const {
  double acc = 0.0;
  for (const cplx& c : values_) acc += std::norm(c);
  return std::sqrt(acc * geometry_.physical_cell_volume());
}

SpatialSpectrum::SpatialSpectrum(LatticeGeometry geometry)
    : geometry_(geometry), coeffs_(geometry.spatial_size()) {}

SpatialSpectrum::SpatialSpectrum(LatticeGeometry geometry, std::vector<cplx> coeffs)
    : geometry_(geometry), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != geometry_.spatial_size())
    throw GeometryError("spectrum size " + std::to_string(coeffs_.size()) + " does not match " +
                        geometry_.fingerprint());
  check_finite(coeffs_, "SpatialSpectrum");
}

double SpatialSpectrum::hs_norm(double s) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const double w = s == 0.0 ? 1.0 : std::pow(1.0 + geometry_.xi_norm_sq(i), s);
    acc += w * std::norm(coeffs_[i]);
  }
  return std::sqrt(acc * geometry_.spatial_measure());
}

// -------------------------------------------------------------- transforms

FrequencyField forward_transform(const SpatialField& u) {
  const LatticeGeometry& g = u.geometry();
  std::vector<cplx> c(u.values().begin(), u.values().end());
  fft::transform(c.data(), full_dims(g), fft::forward);
  const double f = std::pow(two_pi, -0.5 * (g.dim() + 1)) * g.physical_cell_volume();
  for (auto& x : c) x *= f;
  return FrequencyField(g, std::move(c));
}

SpatialField inverse_transform(const FrequencyField& fld) {
  const LatticeGeometry& g = fld.geometry();
  std::vector<cplx> c(fld.coeffs().begin(), fld.coeffs().end());
  fft::transform(c.data(), full_dims(g), fft::backward);
  const double f = std::pow(two_pi, -0.5 * (g.dim() + 1)) * g.measure_weight();
  for (auto& x : c) x *= f;
  return SpatialField(g, std::move(c));
}

SpatialSpectrum spatial_forward(const LatticeGeometry& g, std::span<const cplx> values) {
  if (values.size() != g.spatial_size()) throw GeometryError("slice size mismatch for " + g.fingerprint());
  std::vector<cplx> c(values.begin(), values.end());
  fft::transform(c.data(), spatial_dims(g), fft::forward);
  const double f = std::pow(two_pi, -0.5 * g.dim()) * std::pow(g.x_spacing(), g.dim());
  for (auto& x : c) x *= f;
  return SpatialSpectrum(g, std::move(c));
}

std::vector<cplx> spatial_inverse(const SpatialSpectrum& s) {
  const LatticeGeometry& g = s.geometry();
  std::vector<cplx> c(s.coeffs().begin(), s.coeffs().end());
  fft::transform(c.data(), spatial_dims(g), fft::backward);
  const double f = std::pow(two_pi, -0.5 * g.dim()) * g.spatial_measure();
  for (auto& x : c) x *= f;
  return c;
}

FrequencyField conjugate_field(const FrequencyField& f) {
  const LatticeGeometry& g = f.geometry();
  const int k = g.tau_count();
  std::vector<cplx> c(g.size());
  for (std::size_t s = 0; s < g.spatial_size(); ++s) {
    const std::size_t ns = g.negated_spatial(s);
    for (int j = 0; j < k; ++j) c[s * k + j] = std::conj(f.at(ns, g.negated_tau(j)));
  }
  return FrequencyField(g, std::move(c));
}

FrequencyField free_evolution(const SpatialSpectrum& u0, Sign sign, const LatticeGeometry& g) {
  if (u0.coeffs().size() != g.spatial_size()) throw GeometryError("initial data does not match " + g.fingerprint());
  const int k = g.tau_count();
  const double sv = sign_value(sign);
  std::vector<cplx> c(g.size());
  for (std::size_t s = 0; s < g.spatial_size(); ++s) {
    const double xi2 = g.xi_norm_sq(s);
    const cplx a = u0.at(s);
    for (int j = 0; j < k; ++j) c[s * k + j] = a * std::polar(1.0, -sv * g.time_value(j) * xi2);
  }
  fft::transform_rows(c.data(), g.spatial_size(), k, fft::forward);
  const double f = g.t_spacing() / std::sqrt(two_pi);
  for (auto& x : c) x *= f;
  return FrequencyField(g, std::move(c));
}

std::vector<SpatialSpectrum> time_slices(const FrequencyField& fld) {
  const LatticeGeometry& g = fld.geometry();
  const int k = g.tau_count();
  const std::size_t ns = g.spatial_size();
  std::vector<cplx> c(fld.coeffs().begin(), fld.coeffs().end());
  fft::transform_rows(c.data(), ns, k, fft::backward);
  const double f = g.tau_spacing() / std::sqrt(two_pi);
  std::vector<SpatialSpectrum> out;
  out.reserve(k);
  for (int j = 0; j < k; ++j) {
    std::vector<cplx> slice(ns);
    for (std::size_t s = 0; s < ns; ++s) slice[s] = c[s * k + j] * f;
    out.emplace_back(g, std::move(slice));
  }
  return out;
}

namespace {

void require_compatible(const LatticeGeometry& a, const LatticeGeometry& b) {
  if (a.kind() != b.kind() || a.xi_spacing() != b.xi_spacing() || a.tau_spacing() != b.tau_spacing())
    throw GeometryError("incompatible lattices " + a.fingerprint() + " and " + b.fingerprint());
}

// Copies every site of `src` representable on `dst`.
FrequencyField transplant(const FrequencyField& f, const LatticeGeometry& dst) {
  const LatticeGeometry& src = f.geometry();
  require_compatible(src, dst);
  const int ks = src.tau_count(), kd = dst.tau_count();
  std::vector<cplx> c(dst.size());
  for (std::size_t s = 0; s < src.spatial_size(); ++s) {
    const MultiIndex m = src.multi_index(s);
    bool ok = true;
    for (int a = 0; a < src.dim(); ++a) ok = ok && dst.in_band(m[a]);
    if (!ok) continue;
    const std::size_t d = dst.spatial_offset(m);
    for (int j = 0; j < ks; ++j) {
      const int t = src.tau_signed_index(j);
      if (!dst.tau_in_band(t)) continue;
      c[d * kd + dst.tau_storage_of(t)] = f.at(s, j);
    }
  }
  return FrequencyField(dst, std::move(c));
}

}  // namespace

FrequencyField zero_pad(const FrequencyField& f, const LatticeGeometry& target) {
  if (target.modes() < f.geometry().modes() || target.tau_count() < f.geometry().tau_count())
    throw GeometryError("zero_pad target " + target.fingerprint() + " is smaller than " +
                        f.geometry().fingerprint());
  return transplant(f, target);
}

FrequencyField truncate_to(const FrequencyField& f, const LatticeGeometry& target) {
  if (target.modes() > f.geometry().modes() || target.tau_count() > f.geometry().tau_count())
    throw GeometryError("truncate_to target " + target.fingerprint() + " is larger than " +
                        f.geometry().fingerprint());
  return transplant(f, target);
}

}  // namespace xsb
