#pragma once

// Picard iteration on the Duhamel formula for u_t - i Lap u = c u^j ubar^k on
// a symmetric time grid t_k = (k - S) T / S, k = 0..2S.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "xsblab/lattice.hpp"

namespace xsb {

struct NonlinearitySpec {
  int j = 0;  ///< unconjugated factors
  int k = 2;  ///< conjugated factors
  cplx coefficient{1.0, 0.0};

  int degree() const { return j + k; }
  /// e.g. "ubar^2", "u ubar^2", "u^2 ubar^2"
  std::string name() const;
  /// Accepts products of u, ubar, u^p, ubar^p (separated by spaces or '*'),
  /// the shorthand forms "ubar2", "u3ubar", and "|u|^4". Throws ConfigError.
  static NonlinearitySpec parse(std::string_view text);
};

struct RoughDataSpec {
  double s = 0.0;
  double excess = 0.05;
  std::uint64_t seed = 1;
  double amplitude = 1.0;
};

/// amplitude * g_xi * <xi>^{-(s + n/2 + excess)}, g complex standard normal.
SpatialSpectrum rough_data(const LatticeGeometry& g, const RoughDataSpec& spec);

struct SolveConfig {
  double T = 0.1;
  int time_steps = 64;  ///< steps S on each side of t = 0
  int max_iters = 50;
  double residual_tol = 1e-10;
  double sobolev_index = 0.0;  ///< s of the H^s distances and traces
  LatticeGeometry geometry = LatticeGeometry::unchecked(DomainKind::torus_1d, 32, 1.0, 2, 1.0);
};

struct Trajectory {
  std::vector<double> times;              ///< 2S + 1 samples
  std::vector<std::vector<cplx>> slices;  ///< spatial Fourier coefficients per time
};

struct SolveResult {
  Trajectory trajectory;
  std::vector<double> residuals;
  std::vector<double> hs_trace;
  bool converged = false;
  bool diverged = false;
  int iterations = 0;
  std::string diagnostics;
};

/// Raised when a probe needs a converged solve and does not get one.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double hs_norm(const LatticeGeometry& g, const std::vector<cplx>& c, double s);
double trajectory_distance(const LatticeGeometry& g, const Trajectory& a, const Trajectory& b, double s);

Trajectory free_trajectory(const SpatialSpectrum& u0, const SolveConfig& cfg);

/// Spatial coefficients of c u^j ubar^k for one slice, products formed on a
/// grid padded by (m + 1)/2 per axis so no retained mode is aliased. The
/// -M/2 row of the output is zeroed.
std::vector<cplx> nonlinear_term(const LatticeGeometry& g, const std::vector<cplx>& slice,
                                 const NonlinearitySpec& n);

/// Duhamel right-hand side with u_curr inside the nonlinearity; trapezoid rule
/// on the integrating-factor form, from t = 0 outward in both directions.
Trajectory picard_step(const Trajectory& u_curr, const SpatialSpectrum& u0, const NonlinearitySpec& n,
                       const SolveConfig& cfg);

SolveResult solve_local(const SpatialSpectrum& u0, const NonlinearitySpec& n, const SolveConfig& cfg);

/// max over consecutive residual pairs above round-off of r[i] / r[i-1]; 0 if none.
double contraction_ratio(const std::vector<double>& residuals);

/// sup_t |u - u'|_{H^s} / |u0 - u0'|_{H^s}. Throws std::invalid_argument when
/// the data coincide and SolverError when either solve fails to converge.
double lipschitz_quotient(const SpatialSpectrum& u0, const SpatialSpectrum& u0p, const NonlinearitySpec& n,
                          const SolveConfig& cfg);

struct LipschitzReport {
  double delta = 0.0;
  int trials = 0;
  double quotient = 0.0;       ///< at relative size delta
  double quotient_half = 0.0;  ///< at delta / 2, same directions
};

LipschitzReport lipschitz_probe(const SpatialSpectrum& u0, double delta, const NonlinearitySpec& n,
                                const SolveConfig& cfg, int trials, std::uint64_t seed);

struct PersistenceReport {
  double max_jump = 0.0;
  double max_growth = 1.0;  ///< 1 by convention for zero data
};

PersistenceReport persistence_probe(const SolveResult& r, const SolveConfig& cfg);

struct BisectionReport {
  double T = 0.0;
  int halvings = 0;
  double ratio = 0.0;
  SolveResult result;
};

/// Halves T until the solve converges with contraction_ratio <= 1/2.
/// Throws SolverError after max_halvings.
BisectionReport bisect_time(const SpatialSpectrum& u0, const NonlinearitySpec& n, SolveConfig cfg,
                            int max_halvings = 20);

/// The trajectory as a space-time field on [-T, T) and its smooth-bump
/// restriction proxy in X^+_{s,b}.
FrequencyField trajectory_field(const Trajectory& u, const SolveConfig& cfg);
double xsb_diagnostic(const Trajectory& u, const SolveConfig& cfg, double s, double b);

}  // namespace xsb
