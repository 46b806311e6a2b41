#pragma once

// Twisted convolutions with symbols |xi1 - xi2|^s, <xi1 - xi2>^s (minus family)
// and |xi1 + 2 xi2|^s, <xi1 + 2 xi2>^s (plus family).
//
// Normalization: F B(u, v)(xi, tau) = (2 pi)^{-(n+1)/2} sum measure_weight *
// symbol(xi1, xi2) F u(xi1, tau1) F v(xi2, tau2) over xi1 + xi2 = xi,
// tau1 + tau2 = tau, so that the symbol 1 reproduces F(u v) exactly. Pairs
// whose sum leaves the band are dropped.

#include <utility>

#include "xsblab/lattice.hpp"

namespace xsb {

enum class BilinearFamily { minus, plus };
enum class Bracket { abs, japanese };

struct BilinearSymbol {
  BilinearFamily family = BilinearFamily::minus;
  Bracket bracket = Bracket::japanese;
  double s = 0.0;

  /// The symbol value. Throws SingularSymbolError for |0|^s with s < 0.
  /// |0|^s is 0 for s > 0 and 1 for s = 0.
  double operator()(const XiVector& xi1, const XiVector& xi2) const;
  bool vanishes_at(const XiVector& xi1, const XiVector& xi2) const;
};

/// I^s_- , J^s_- , I^s_+ , J^s_+ by their usual names.
inline BilinearSymbol I_minus(double s) { return {BilinearFamily::minus, Bracket::abs, s}; }
inline BilinearSymbol J_minus(double s) { return {BilinearFamily::minus, Bracket::japanese, s}; }
inline BilinearSymbol I_plus(double s) { return {BilinearFamily::plus, Bracket::abs, s}; }
inline BilinearSymbol J_plus(double s) { return {BilinearFamily::plus, Bracket::japanese, s}; }

/// Padded-FFT in tau, direct sum over xi pairs.
FrequencyField apply_bilinear(const BilinearSymbol& sym, const FrequencyField& f, const FrequencyField& g);

/// Reference quadruple loop. Same contract as apply_bilinear.
FrequencyField apply_bilinear_oracle(const BilinearSymbol& sym, const FrequencyField& f,
                                     const FrequencyField& g);

/// (<J^s_-(u, v), w>, <v, J^s_+(w, u-bar)>)
std::pair<cplx, cplx> adjoint_check(double s, const FrequencyField& u, const FrequencyField& v,
                                    const FrequencyField& w);

/// (J^s_-(u-bar, v-bar), conjugate of J^s_-(u, v))
std::pair<FrequencyField, FrequencyField> conjugation_identity_check(double s, const FrequencyField& u,
                                                                     const FrequencyField& v);

struct Lemma24Result {
  double lhs = 0.0;           ///< time quadrature of the squared L^2_{xt} norm
  double rhs = 0.0;           ///< (norm_product + cross_term) / 2
  double norm_product = 0.0;  ///< |u1|^2 |u2|^2
  double cross_term = 0.0;    ///< the double frequency sum R
  int time_steps = 0;
};

/// Squared L^2_{xt}([-t_max, t_max]) norm of I^{1/2}_-(e^{it d^2} u1, e^{it d^2} u2)
/// against its closed form. One-dimensional data only. Throws GeometryError
/// when either spectrum has mass in the outer quarter of the band.
Lemma24Result lemma24_identity(const SpatialSpectrum& u1, const SpatialSpectrum& u2, double t_max);

}  // namespace xsb
