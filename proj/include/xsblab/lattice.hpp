#pragma once

// Discrete space-time frequency lattices, the fields living on them, and the
// unitary transforms between the physical and the frequency side.
//
// Storage layout: row-major with the spatial frequency axes first and the
// temporal frequency axis last. Every axis is stored in FFT order, i.e.
// storage index k maps to the signed index k for k < M/2 and to k - M
// otherwise. The Nyquist index -M/2 is therefore its own negative under
// periodic wraparound.
//
// Transform convention (Riemann sum of the unitary continuous transform):
//   F(xi, tau) = (2 pi)^{-(n+1)/2} h^n dt sum_{x,t} u(x,t) e^{-i(x.xi + t tau)}
// so that sum |F|^2 * measure_weight = sum |u|^2 * h^n dt exactly, and
// F(uv) = (2 pi)^{-(n+1)/2} (F u * F v) with the lattice convolution
// weighted by measure_weight.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace xsb {

using cplx = std::complex<double>;

enum class DomainKind { torus_1d, torus_2d, torus_3d, line_1d };

std::string_view to_string(DomainKind kind);
DomainKind parse_domain_kind(std::string_view text);
int dimension_of(DomainKind kind);
bool is_torus(DomainKind kind);

/// Selects the characteristic paraboloid tau = -+|xi|^2 of e^{+-it Delta}.
enum class Sign { plus, minus };

inline double sign_value(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }
inline Sign flipped(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }
std::string_view to_string(Sign s);
Sign parse_sign(std::string_view text);

/// <x> = (1 + x^2)^{1/2}
inline double japanese(double x) { return std::sqrt(1.0 + x * x); }

using MultiIndex = std::array<int, 3>;
using XiVector = std::array<double, 3>;

class LatticeGeometry {
 public:
  /// Validated constructor; throws GeometryError on any violated invariant.
  static LatticeGeometry create(DomainKind kind, int modes_per_axis,
                                double xi_spacing, int tau_count,
                                double tau_spacing);

  /// Skips the paraboloid-fits-the-band check. Used for zero-padded work
  /// grids whose tau range is a multiple of a validated one.
  static LatticeGeometry unchecked(DomainKind kind, int modes_per_axis,
                                   double xi_spacing, int tau_count,
                                   double tau_spacing);

  DomainKind kind() const { return kind_; }
  int dim() const { return dimension_of(kind_); }
  int modes() const { return modes_; }
  double xi_spacing() const { return xi_spacing_; }
  int tau_count() const { return tau_count_; }
  double tau_spacing() const { return tau_spacing_; }

  std::size_t spatial_size() const;
  std::size_t size() const { return spatial_size() * static_cast<std::size_t>(tau_count_); }

  /// (Delta xi)^n Delta tau: quadrature weight of one lattice cell.
  double measure_weight() const { return spatial_measure() * tau_spacing_; }
  /// (Delta xi)^n: counting measure (1) on the torus.
  double spatial_measure() const;
  double tau_max() const { return 0.5 * tau_count_ * tau_spacing_; }
  double max_xi_norm_sq() const;

  double x_spacing() const;
  double t_spacing() const;
  double spatial_period() const;
  double time_period() const;
  /// h^n dt
  double physical_cell_volume() const;

  std::string fingerprint() const;

  int signed_index(int storage) const { return storage < modes_ / 2 ? storage : storage - modes_; }
  int tau_signed_index(int storage) const {
    return storage < tau_count_ / 2 ? storage : storage - tau_count_;
  }
  double tau_value(int storage) const { return tau_signed_index(storage) * tau_spacing_; }
  /// Periodic representative of the physical time sample, in [-P/2, P/2).
  double time_value(int storage) const { return tau_signed_index(storage) * t_spacing(); }

  bool in_band(int signed_idx) const { return signed_idx >= -modes_ / 2 && signed_idx < modes_ / 2; }
  bool tau_in_band(int signed_idx) const {
    return signed_idx >= -tau_count_ / 2 && signed_idx < tau_count_ / 2;
  }
  int storage_of(int signed_idx) const { return signed_idx < 0 ? signed_idx + modes_ : signed_idx; }
  int tau_storage_of(int signed_idx) const {
    return signed_idx < 0 ? signed_idx + tau_count_ : signed_idx;
  }

  MultiIndex multi_index(std::size_t spatial) const;
  std::size_t spatial_offset(const MultiIndex& signed_idx) const;
  XiVector xi_vector(std::size_t spatial) const;
  double xi_norm_sq(std::size_t spatial) const;
  std::vector<double> xi_norm_sq_table() const;
  /// Spatial index of -xi with periodic wraparound.
  std::size_t negated_spatial(std::size_t spatial) const;
  int negated_tau(int storage) const { return storage == 0 ? 0 : tau_count_ - storage; }

  /// Same spacings, more modes: a zero-padding target. Not validated.
  LatticeGeometry padded(int spatial_modes, int tau_count) const;

  bool operator==(const LatticeGeometry&) const = default;

 private:
  LatticeGeometry(DomainKind kind, int modes, double dxi, int k, double dtau)
      : kind_(kind), modes_(modes), xi_spacing_(dxi), tau_count_(k), tau_spacing_(dtau) {}

  DomainKind kind_;
  int modes_;
  double xi_spacing_;
  int tau_count_;
  double tau_spacing_;
};

/// Complex coefficients on the (xi, tau) lattice. Immutable after construction.
class FrequencyField {
 public:
  explicit FrequencyField(LatticeGeometry geometry);
  FrequencyField(LatticeGeometry geometry, std::vector<cplx> coeffs);

  template <class Fn>
  static FrequencyField from_function(const LatticeGeometry& g, Fn&& fn) {
    std::vector<cplx> c(g.size());
    const int k = g.tau_count();
    for (std::size_t s = 0; s < g.spatial_size(); ++s) {
      const XiVector xi = g.xi_vector(s);
      for (int j = 0; j < k; ++j) c[s * k + j] = fn(xi, g.tau_value(j));
    }
    return FrequencyField(g, std::move(c));
  }

  const LatticeGeometry& geometry() const { return geometry_; }
  std::span<const cplx> coeffs() const { return coeffs_; }
  cplx at(std::size_t spatial, int tau_storage) const {
    return coeffs_[spatial * geometry_.tau_count() + tau_storage];
  }

  FrequencyField scaled(cplx factor) const;
  FrequencyField operator+(const FrequencyField& other) const;
  FrequencyField operator-(const FrequencyField& other) const;

  /// Euclidean norm of the coefficient vector weighted by measure_weight.
  double l2_norm() const;

 private:
  LatticeGeometry geometry_;
  std::vector<cplx> coeffs_;
};

/// Samples on the dual physical grid: x_i = i h per axis, t_j = j dt.
class SpatialField {
 public:
  explicit SpatialField(LatticeGeometry geometry);
  SpatialField(LatticeGeometry geometry, std::vector<cplx> values);

  const LatticeGeometry& geometry() const { return geometry_; }
  std::span<const cplx> values() const { return values_; }
  cplx at(std::size_t x, int t) const { return values_[x * geometry_.tau_count() + t]; }

  double l2_norm() const;

 private:
  LatticeGeometry geometry_;
  std::vector<cplx> values_;
};

/// Spatial Fourier coefficients of a function of x alone (initial data, time
/// slices). Only the spatial part of the geometry is used.
class SpatialSpectrum {
 public:
  explicit SpatialSpectrum(LatticeGeometry geometry);
  SpatialSpectrum(LatticeGeometry geometry, std::vector<cplx> coeffs);

  template <class Fn>
  static SpatialSpectrum from_function(const LatticeGeometry& g, Fn&& fn) {
    std::vector<cplx> c(g.spatial_size());
    for (std::size_t s = 0; s < c.size(); ++s) c[s] = fn(g.xi_vector(s));
    return SpatialSpectrum(g, std::move(c));
  }

  const LatticeGeometry& geometry() const { return geometry_; }
  std::span<const cplx> coeffs() const { return coeffs_; }
  cplx at(std::size_t spatial) const { return coeffs_[spatial]; }

  /// (sum Delta xi^n <xi>^{2s} |c|^2)^{1/2}
  double hs_norm(double s) const;
  double l2_norm() const { return hs_norm(0.0); }

 private:
  LatticeGeometry geometry_;
  std::vector<cplx> coeffs_;
};

FrequencyField forward_transform(const SpatialField& u);
SpatialField inverse_transform(const FrequencyField& f);

/// Spatial-only unitary transforms of a single time slice.
SpatialSpectrum spatial_forward(const LatticeGeometry& g, std::span<const cplx> values);
std::vector<cplx> spatial_inverse(const SpatialSpectrum& f);

/// F(u-bar): (xi, tau) -> conj(F u(-xi, -tau)) with periodic wraparound.
FrequencyField conjugate_field(const FrequencyField& f);

/// Space-time field whose time slice t is e^{-+it|xi|^2} u0(xi), transformed
/// to the frequency side over the time grid of `g`.
FrequencyField free_evolution(const SpatialSpectrum& u0, Sign sign, const LatticeGeometry& g);

/// Partial inverse in tau only: per physical time sample, the spatial Fourier
/// coefficients of the slice. Result indexed [t][spatial].
std::vector<SpatialSpectrum> time_slices(const FrequencyField& f);

/// Places `f` on a larger lattice with the same spacings (zero padding).
FrequencyField zero_pad(const FrequencyField& f, const LatticeGeometry& target);
/// Restriction to a smaller lattice with the same spacings.
FrequencyField truncate_to(const FrequencyField& f, const LatticeGeometry& target);

}  // namespace xsb
