#include "xsblab/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "xsblab/errors.hpp"
#include "xsblab/parallel.hpp"

namespace xsb {

LatticeGeometry GeometrySpec::build() const {
  return LatticeGeometry::create(kind, modes, xi_spacing, tau_count, tau_spacing);
}

namespace {

int pad_factor(const EstimateInstance& inst) {
  const int m = static_cast<int>(inst.factors.size());
  if (inst.lhs.kind != LhsNormKind::mixed) return m;
  const double e = std::max(inst.lhs.mixed.p, inst.lhs.mixed.q);
  if (std::isinf(e)) return m;
  const int need = static_cast<int>(std::ceil(m * e / 2.0));
  return std::max(m, std::min(4, need));
}

FrequencyField prepare(const FrequencyField& raw, const FactorSpec& spec, const LatticeGeometry& work) {
  // Conjugation after padding: the reflected Nyquist row then lands in band.
  FrequencyField f = zero_pad(raw, work);
  if (spec.conjugated) f = conjugate_field(f);
  for (const PreOp& op : spec.pre_ops) {
    switch (op.kind) {
      case PreOpKind::bessel: f = apply_potential(f, PotentialKind::bessel_J, op.order); break;
      case PreOpKind::riesz: f = apply_potential(f, PotentialKind::riesz_I, op.order); break;
      case PreOpKind::modulation: f = apply_modulation(f, op.order, op.sign); break;
    }
  }
  return f;
}

FrequencyField product(const std::vector<const FrequencyField*>& parts) {
  if (parts.size() == 1) return *parts[0];
  const LatticeGeometry& g = parts[0]->geometry();
  SpatialField first = inverse_transform(*parts[0]);
  std::vector<cplx> acc(first.values().begin(), first.values().end());
  for (std::size_t i = 1; i < parts.size(); ++i) {
    SpatialField u = inverse_transform(*parts[i]);
    auto v = u.values();
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] *= v[k];
  }
  return forward_transform(SpatialField(g, std::move(acc)));
}

void check_fields(const EstimateInstance& inst, const std::vector<FrequencyField>& fields) {
  if (fields.size() != inst.factors.size())
    throw std::invalid_argument("expected " + std::to_string(inst.factors.size()) + " fields, got " +
                                std::to_string(fields.size()));
  for (const auto& f : fields)
    if (!(f.geometry() == fields[0].geometry())) throw GeometryError("fields live on different lattices");
}

void check_grouping(const EstimateInstance& inst) {
  const int m = static_cast<int>(inst.factors.size());
  std::vector<int> seen(m, 0);
  for (const auto* slot : {&inst.lhs.slot1, &inst.lhs.slot2}) {
    if (slot->empty()) throw std::invalid_argument("bilinear grouping has an empty slot");
    for (int i : *slot) {
      if (i < 0 || i >= m || seen[i]++) throw std::invalid_argument("bilinear grouping indices invalid or repeated");
    }
  }
}

}  // namespace

double lhs_norm(const EstimateInstance& inst, const std::vector<FrequencyField>& fields) {
  check_fields(inst, fields);
  const LatticeGeometry& base = fields[0].geometry();
  const int pad = pad_factor(inst);
  const LatticeGeometry work = base.padded(base.modes() * pad, base.tau_count() * pad);

  std::vector<FrequencyField> prepared;
  prepared.reserve(fields.size());
  for (std::size_t i = 0; i < fields.size(); ++i) prepared.push_back(prepare(fields[i], inst.factors[i], work));

  std::vector<const FrequencyField*> all;
  for (const auto& f : prepared) all.push_back(&f);

  FrequencyField combined(work);
  if (inst.lhs.combiner == CombinerKind::pointwise_product) {
    combined = product(all);
  } else {
    check_grouping(inst);
    auto gather = [&](const std::vector<int>& idx) {
      std::vector<const FrequencyField*> out;
      for (int i : idx) out.push_back(&prepared[i]);
      return out;
    };
    FrequencyField a = product(gather(inst.lhs.slot1));
    FrequencyField b = product(gather(inst.lhs.slot2));
    combined = apply_bilinear(inst.lhs.symbol, a, b);
    std::vector<const FrequencyField*> rest{&combined};
    for (std::size_t i = 0; i < prepared.size(); ++i) {
      const int ii = static_cast<int>(i);
      if (std::find(inst.lhs.slot1.begin(), inst.lhs.slot1.end(), ii) == inst.lhs.slot1.end() &&
          std::find(inst.lhs.slot2.begin(), inst.lhs.slot2.end(), ii) == inst.lhs.slot2.end())
        rest.push_back(&prepared[i]);
    }
    if (rest.size() > 1) combined = product(rest);
  }

  if (inst.lhs.kind == LhsNormKind::xsb) return xsb_norm(combined, inst.lhs.xsb);
  return mixed_norm(inverse_transform(combined), inst.lhs.mixed);
}

double evaluate_instance(const EstimateInstance& inst, const std::vector<FrequencyField>& fields) {
  check_fields(inst, fields);
  double rhs = 1.0;
  for (std::size_t i = 0; i < fields.size(); ++i) rhs *= xsb_norm(fields[i], inst.factors[i].weight);
  if (!(rhs > 0.0) || !std::isfinite(rhs)) throw UndefinedQuotientError("right-hand side vanishes");
  return lhs_norm(inst, fields) / rhs;
}

double evaluate_quotient(const EstimateCase& c, const EstimateParams& p,
                         const std::vector<FrequencyField>& fields) {
  if (static_cast<int>(fields.size()) != c.arity)
    throw std::invalid_argument(c.id + ": arity " + std::to_string(c.arity) + ", got " +
                                std::to_string(fields.size()) + " fields");
  return evaluate_instance(c.instantiate(p), fields);
}

EstimateInstance conjugated_variant(EstimateInstance inst, int i) {
  FactorSpec& f = inst.factors.at(i);
  f.conjugated = !f.conjugated;
  f.weight.sign = flipped(f.weight.sign);
  for (PreOp& op : f.pre_ops)
    if (op.kind == PreOpKind::modulation) op.sign = flipped(op.sign);
  return inst;
}

EstimateInstance mirrored(EstimateInstance inst) {
  inst.lhs.xsb.sign = flipped(inst.lhs.xsb.sign);
  for (FactorSpec& f : inst.factors) {
    f.weight.sign = flipped(f.weight.sign);
    for (PreOp& op : f.pre_ops)
      if (op.kind == PreOpKind::modulation) op.sign = flipped(op.sign);
  }
  return inst;
}

// ------------------------------------------------------------------ ensembles

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined word
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<cplx> draw_amplitudes(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  std::vector<cplx> g(n);
  for (auto& z : g) {
    const double re = normal(rng);
    z = cplx(re, normal(rng));
  }
  return g;
}

FrequencyField envelope_field(const LatticeGeometry& geo, double alpha, Sign sign, const std::vector<cplx>& g) {
  if (g.size() != geo.spatial_size()) throw std::invalid_argument("amplitude count does not match the lattice");
  const int k = geo.tau_count();
  const double sv = sign_value(sign);
  std::vector<cplx> c(geo.size());
  for (std::size_t s = 0; s < geo.spatial_size(); ++s) {
    const double xi2 = geo.xi_norm_sq(s);
    const cplx a = g[s] * std::pow(1.0 + xi2, -0.5 * alpha);
    for (int j = 0; j < k; ++j) {
      if (j == k / 2) continue;
      const double m = geo.tau_value(j) + sv * xi2;
      c[s * k + j] = a / japanese(m);
    }
  }
  return FrequencyField(geo, std::move(c));
}

std::vector<FrequencyField> random_ensemble(const LatticeGeometry& geo, double alpha, int count,
                                            std::uint64_t seed, Sign sign) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("decay exponent alpha must be >= 0");
  std::vector<FrequencyField> out;
  out.reserve(std::max(count, 0));
  for (int i = 0; i < count; ++i)
    out.push_back(envelope_field(geo, alpha, sign, draw_amplitudes(geo.spatial_size(), derive_seed(seed, i))));
  return out;
}

// ------------------------------------------------------------------ search

namespace {

using Amplitudes = std::vector<std::vector<cplx>>;

struct SearchResult {
  double best = 0.0;
  std::uint64_t argmax_seed = 0;
  std::vector<double> history;
};

std::vector<FrequencyField> realize(const EstimateInstance& inst, const LatticeGeometry& geo, double alpha,
                                    const Amplitudes& amps) {
  std::vector<FrequencyField> fields;
  for (std::size_t i = 0; i < amps.size(); ++i)
    fields.push_back(envelope_field(geo, alpha, inst.factors[i].weight.sign, amps[i]));
  return fields;
}

Amplitudes candidate(std::size_t factors, std::size_t sites, std::uint64_t sample_seed) {
  Amplitudes a;
  for (std::size_t i = 0; i < factors; ++i) a.push_back(draw_amplitudes(sites, derive_seed(sample_seed, i)));
  return a;
}

SearchResult search(const EstimateInstance& inst, const LatticeGeometry& geo, std::uint64_t seed,
                    const MaximizeOptions& opt) {
  const std::size_t m = inst.factors.size();
  const std::size_t sites = geo.spatial_size();
  const int samples = std::max(1, opt.budget);
  std::vector<double> q(samples);
  parallel_for(samples, [&](std::size_t i) {
    q[i] = evaluate_instance(inst, realize(inst, geo, opt.alpha, candidate(m, sites, derive_seed(seed, i))));
  });
  const auto best_it = std::max_element(q.begin(), q.end());
  const std::size_t best_i = static_cast<std::size_t>(best_it - q.begin());

  SearchResult r;
  r.best = *best_it;
  r.argmax_seed = derive_seed(seed, best_i);
  if (opt.budget == 0) return r;

  Amplitudes amps = candidate(m, sites, r.argmax_seed);
  std::mt19937_64 rng(derive_seed(seed, 0x6869'6c6cULL));
  std::uniform_int_distribution<std::size_t> pick_factor(0, m - 1), pick_site(0, sites - 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int step = 0; step < opt.hill_steps; ++step) {
    const std::size_t fi = pick_factor(rng);
    const std::size_t si = pick_site(rng);
    const double z = normal(rng);
    const cplx old = amps[fi][si];
    amps[fi][si] = old * (1.0 + 0.3 * z);
    double trial = -1.0;
    try {
      trial = evaluate_instance(inst, realize(inst, geo, opt.alpha, amps));
    } catch (const UndefinedQuotientError&) {
    }
    if (trial > r.best) {
      r.best = trial;
    } else {
      amps[fi][si] = old;
    }
    r.history.push_back(r.best);
  }
  return r;
}

}  // namespace

QuotientReport maximize_quotient(const EstimateCase& c, const EstimateParams& p, std::uint64_t seed,
                                 const MaximizeOptions& opt) {
  const GeometrySpec gspec = opt.geometry.value_or(c.geometry);
  const LatticeGeometry geo = gspec.build();
  const EstimateInstance inst = c.instantiate(p);

  QuotientReport rep;
  rep.case_id = c.id;
  rep.params = p;
  rep.fingerprint = geo.fingerprint();
  rep.samples = opt.budget;
  rep.seed = seed;
  rep.tau_max = geo.tau_max();
  rep.time_window = geo.time_period();
  rep.admissible = c.admissible(p);

  SearchResult base = search(inst, geo, seed, opt);
  rep.max_quotient = base.best;
  rep.argmax_seed = base.argmax_seed;
  rep.history = std::move(base.history);

  if (opt.refine) {
    GeometrySpec fine = gspec;
    fine.tau_spacing *= 0.5;
    fine.tau_count *= 2;
    const SearchResult r = search(inst, fine.build(), seed, opt);
    if (base.best > 0.0) rep.refinement_ratio = r.best / base.best;
  }
  return rep;
}

}  // namespace xsb
