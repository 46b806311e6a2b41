#pragma once

// Bourgain, Sobolev and mixed space-time norms, Fourier multipliers, and the
// cutoff proxy for restriction norms.

#include <limits>

#include "xsblab/lattice.hpp"

namespace xsb {

/// Dispersive weight <xi>^s <tau +- |xi|^2>^b.
struct WeightSpec {
  double s = 0.0;
  double b = 0.0;
  Sign sign = Sign::plus;
};

/// L^p_t(L^q_x) after applying J^sigma in space. p or q may be infinity.
struct MixedNormSpec {
  double p = 2.0;
  double q = 2.0;
  double sigma = 0.0;
};

inline constexpr double infinity = std::numeric_limits<double>::infinity();

enum class CutoffProfile { sharp, smooth_bump };

struct CutoffSpec {
  double T = 1.0;
  CutoffProfile profile = CutoffProfile::smooth_bump;
};

enum class PotentialKind { bessel_J, riesz_I };

/// <xi>^s <tau +- |xi|^2>^b at one lattice site.
double dispersive_weight(const WeightSpec& w, double xi_norm_sq, double tau);

double xsb_norm(const FrequencyField& f, const WeightSpec& w);

double mixed_norm(const SpatialField& u, const MixedNormSpec& m);

/// Multiplies by <xi>^sigma (bessel) or |xi|^sigma (riesz). Riesz with
/// sigma < 0 throws SingularSymbolError unless the xi = 0 row vanishes.
FrequencyField apply_potential(const FrequencyField& f, PotentialKind kind, double sigma);

/// Multiplies by <tau +- |xi|^2>^b.
FrequencyField apply_modulation(const FrequencyField& f, double b, Sign sign);

/// psi(t) for the chosen profile and half-width T. Smooth bump: 1 for
/// |t| <= T/2, 0 for |t| >= T, and in between, with y = (|t| - T/2)/(T/2),
/// psi = e(1-y)/(e(1-y) + e(y)) where e(x) = exp(-1/x).
double cutoff_profile(CutoffProfile profile, double t, double T);

/// The field multiplied in physical time by psi(t). Throws GeometryError if T
/// exceeds half the time period of the lattice.
FrequencyField apply_time_cutoff(const FrequencyField& f, const CutoffSpec& c);

/// xsb_norm(psi u): an upper bound for the restriction norm on [-T, T].
double restricted_norm_proxy(const FrequencyField& f, const WeightSpec& w, const CutoffSpec& c);

/// sum measure_weight * F f * conj(F g), the L^2_{xt} inner product.
cplx duality_pairing(const FrequencyField& f, const FrequencyField& g);

}  // namespace xsb
