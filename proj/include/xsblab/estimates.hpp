#pragma once

// Multilinear inequalities as data, and a randomized harness that evaluates
// LHS / RHS quotients on lattice fields.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "xsblab/bilinear.hpp"
#include "xsblab/lattice.hpp"
#include "xsblab/norms.hpp"

namespace xsb {

enum class PreOpKind { bessel, riesz, modulation };

struct PreOp {
  PreOpKind kind = PreOpKind::bessel;
  double order = 0.0;
  Sign sign = Sign::plus;  // modulation only
};

/// One factor of the product. The RHS uses the xsb norm of the raw field
/// with `weight`; the LHS uses the field after conjugation and pre_ops.
struct FactorSpec {
  bool conjugated = false;
  WeightSpec weight;
  std::vector<PreOp> pre_ops;
};

enum class LhsNormKind { xsb, mixed };
enum class CombinerKind { pointwise_product, bilinear };

struct LhsSpec {
  LhsNormKind kind = LhsNormKind::xsb;
  WeightSpec xsb;
  MixedNormSpec mixed;
  CombinerKind combiner = CombinerKind::pointwise_product;
  /// Bilinear combiner: the product of factors in slot1 and in slot2 feed the
  /// operator; factors in neither slot multiply its output pointwise.
  BilinearSymbol symbol;
  std::vector<int> slot1, slot2;
};

struct EstimateParams {
  double s = 0.0;
  double b = 0.55;
  double bprime = 0.0;
  double sigma = 0.0;
  double eps = 0.05;
};

struct EstimateInstance {
  LhsSpec lhs;
  std::vector<FactorSpec> factors;
};

enum class CaseStatus { proven, failing, open };

struct GeometrySpec {
  DomainKind kind = DomainKind::torus_1d;
  int modes = 16;
  double xi_spacing = 1.0;
  int tau_count = 260;
  double tau_spacing = 0.5;
  LatticeGeometry build() const;
};

struct EstimateCase {
  std::string id;
  int arity = 1;
  CaseStatus status = CaseStatus::proven;
  /// One-line statement of the inequality and its hypotheses.
  std::string anchor;
  /// How (s, b, bprime, sigma, eps) enter the statement.
  std::string parameter_map;
  GeometrySpec geometry;
  EstimateParams defaults;
  std::function<EstimateInstance(const EstimateParams&)> instantiate;
  std::function<bool(const EstimateParams&)> admissible;
};

const std::vector<EstimateCase>& registry();
/// Throws ConfigError for unknown ids.
const EstimateCase& find_case(const std::string& id);

/// Quotient LHS / RHS for the given fields (one per factor, shared lattice).
/// Throws UndefinedQuotientError if the RHS vanishes.
double evaluate_quotient(const EstimateCase& c, const EstimateParams& p,
                         const std::vector<FrequencyField>& fields);
double evaluate_instance(const EstimateInstance& inst, const std::vector<FrequencyField>& fields);

/// The LHS norm alone, on the zero-padded lattice.
double lhs_norm(const EstimateInstance& inst, const std::vector<FrequencyField>& fields);

/// Toggle conjugation on factor i and flip the sign of its weight and
/// modulation pre-ops. Applied to a conjugated input the quotient is unchanged.
EstimateInstance conjugated_variant(EstimateInstance inst, int i);
/// Flip every sign (LHS, factors, pre-ops).
EstimateInstance mirrored(EstimateInstance inst);

/// g * <xi>^{-alpha} <tau + sign |xi|^2>^{-1}, zero on the tau Nyquist column.
FrequencyField envelope_field(const LatticeGeometry& geo, double alpha, Sign sign,
                              const std::vector<cplx>& g);

/// Independent fields with complex standard normal g drawn once per spatial
/// mode. Deterministic given the seed.
std::vector<FrequencyField> random_ensemble(const LatticeGeometry& geo, double alpha, int count,
                                            std::uint64_t seed, Sign sign = Sign::plus);

/// Complex standard normal amplitudes, one per spatial site.
std::vector<cplx> draw_amplitudes(std::size_t n, std::uint64_t seed);

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

struct MaximizeOptions {
  int budget = 200;      ///< random samples; 0 means the single seeded candidate
  int hill_steps = 40;   ///< multiplicative perturbation attempts
  double alpha = 1.0;    ///< ensemble decay exponent
  bool refine = true;    ///< re-run at tau_spacing / 2, tau_count * 2
  std::optional<GeometrySpec> geometry;
};

struct QuotientReport {
  std::string case_id;
  EstimateParams params;
  std::string fingerprint;
  int samples = 0;
  double max_quotient = 0.0;
  std::uint64_t argmax_seed = 0;
  std::optional<double> refinement_ratio;
  std::uint64_t seed = 0;
  double tau_max = 0.0;
  double time_window = 0.0;
  bool admissible = false;
  std::vector<double> history;  ///< best value after each hill-climb step
};

QuotientReport maximize_quotient(const EstimateCase& c, const EstimateParams& p, std::uint64_t seed,
                                 const MaximizeOptions& opt = {});

}  // namespace xsb
