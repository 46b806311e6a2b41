#pragma once

// Explicit failure families n -> (f_1, ..., f_m) in the weighted-function
// formulation, their convolution minorants, and growth-rate regression.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "xsblab/estimates.hpp"
#include "xsblab/patch.hpp"

namespace xsb {

struct CounterexampleFamily {
  std::string id;
  std::string target_case;
  std::string anchor;
  std::string slope_formula;
  DomainKind kind = DomainKind::torus_1d;
  int arity = 2;
  std::function<double(const EstimateParams&)> predicted_slope;
  /// Runner default for b'. The line family needs b' well below zero so the
  /// large-tau part of the convolution does not outgrow the minorant.
  double default_bprime = 0.0;
};

const std::vector<CounterexampleFamily>& families();
/// Throws ConfigError for unknown ids.
const CounterexampleFamily& find_family(const std::string& id);

/// The weighted functions f_i of member n as patches. Exact lattice
/// representation: torus chi is closed |tau - c| <= 1 at tau_spacing 1/2;
/// the line family uses half-open unit intervals, xi_spacing 1/(4n) and
/// tau_spacing 1/4.
std::vector<Patch> family_patches(const CounterexampleFamily& f, int n);

/// The stated minorant of the m-fold convolution. `c` scales the line
/// family's chi_c; it is ignored elsewhere.
Patch family_minorant(const CounterexampleFamily& f, int n, double c = 1.0);

/// Smallest lattice holding every input support, the full convolution box and
/// the minorant, with the paraboloid inside the tau band.
LatticeGeometry minimal_geometry(const CounterexampleFamily& f, int n);

/// Throws GeometryError naming the minimal geometry if `g` cannot hold member n.
void require_resolves(const CounterexampleFamily& f, int n, const LatticeGeometry& g);

/// The f_i placed on a dense lattice.
std::vector<FrequencyField> build_family_member(const CounterexampleFamily& f, int n, const LatticeGeometry& g);

struct LowerBoundReport {
  bool pass = false;
  double margin = 0.0;   ///< min over minorant support of (convolution - minorant)
  std::size_t sites = 0; ///< minorant support size
  double constant = 1.0; ///< c of the line family, 1 elsewhere
};

LowerBoundReport verify_lower_bound(const CounterexampleFamily& f, int n,
                                    const std::optional<LatticeGeometry>& g = std::nullopt);

/// Line family constant: the largest c with conv >= c chi_c(2n xi) chi_c(tau)
/// at n = 4, halved. Computed once.
double line_family_constant();

/// Weighted-formulation quotient of member n for the target case:
/// |<xi>^{s0} <tau +- |xi|^2>^{b0} conv(prod <xi_i>^{-si} <sigma_i>^{-bi} f_i)| / prod |f_i|.
double family_quotient(const CounterexampleFamily& f, const EstimateParams& p, int n);
/// prod |f_i|_{L^2}
double family_rhs(const CounterexampleFamily& f, int n);

struct GrowthReport {
  std::string family_id;
  std::string target_case;
  EstimateParams params;
  std::vector<int> n;
  std::vector<double> quotient;
  std::vector<double> log_quotient;
  std::vector<double> rhs;
  std::vector<std::string> fingerprint;
  double fitted_slope = 0.0;
  double intercept = 0.0;
  double fit_residual = 0.0;
  double predicted_slope = 0.0;
  double margin = 0.0;
  bool admissible = false;
};

using GeometrySchedule = std::function<LatticeGeometry(int n)>;

/// n values must be positive and strictly increasing; members the schedule
/// cannot resolve are skipped, and fewer than three survivors is an error.
GrowthReport fit_growth(const CounterexampleFamily& f, const EstimateParams& p, const std::vector<int>& n_list,
                        const GeometrySchedule& schedule = {});

/// fit_growth after checking that the family targets the case.
GrowthReport inadmissible_probe(const EstimateCase& c, const EstimateParams& p, const CounterexampleFamily& f,
                                const std::vector<int>& n_list);

}  // namespace xsb
