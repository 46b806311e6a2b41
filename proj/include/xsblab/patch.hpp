#pragma once

// Compactly supported lattice functions: a dense box of (xi, tau) sites at a
// signed integer offset. Counterexample families live here because their
// supports sit far out on the lattice while occupying only a few sites.

#include <functional>
#include <vector>

#include "xsblab/lattice.hpp"

namespace xsb {

struct Patch {
  int dim = 1;
  double xi_spacing = 1.0;
  double tau_spacing = 0.5;
  MultiIndex lo{0, 0, 0};          ///< signed xi index of the first site per axis
  std::array<int, 3> extent{1, 1, 1};
  int tau_lo = 0;
  int tau_extent = 1;
  std::vector<cplx> data;          ///< row-major [xi axes..., tau]

  static Patch zeros(int dim, double dxi, double dtau, MultiIndex lo, std::array<int, 3> extent, int tau_lo,
                     int tau_extent);

  std::size_t spatial_count() const;
  std::size_t offset(const MultiIndex& rel, int rel_tau) const;
  MultiIndex relative(std::size_t spatial) const;
  /// Absolute signed indices of a spatial slot.
  MultiIndex absolute(std::size_t spatial) const;
  XiVector xi(std::size_t spatial) const;
  double xi_norm_sq(std::size_t spatial) const;
  double tau(int rel_tau) const { return (tau_lo + rel_tau) * tau_spacing; }
  cplx& at(std::size_t spatial, int rel_tau) { return data[spatial * tau_extent + rel_tau]; }
  cplx at(std::size_t spatial, int rel_tau) const { return data[spatial * tau_extent + rel_tau]; }
  /// Value at absolute indices, 0 outside the box.
  cplx value(const MultiIndex& idx, int tau_idx) const;

  /// (Delta xi)^n Delta tau
  double measure_weight() const;
  double l2_norm() const;

  /// Pointwise multiplication by fn(xi, |xi|^2, tau).
  Patch weighted(const std::function<double(const XiVector&, double, double)>& fn) const;

  /// Places the patch on a lattice with the same spacings. Throws
  /// GeometryError if a nonzero site falls outside the band.
  FrequencyField to_field(const LatticeGeometry& g) const;
};

/// sum over sites a(p) b(q) with p + q = r, times measure_weight. FFT based.
Patch convolve(const Patch& a, const Patch& b);
/// Nested-sum reference for convolve.
Patch convolve_bruteforce(const Patch& a, const Patch& b);
/// Left fold of convolve over the list.
Patch convolve_all(const std::vector<Patch>& parts);

}  // namespace xsb
