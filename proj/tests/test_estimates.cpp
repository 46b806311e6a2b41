#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "oracles.hpp"
#include "xsblab/errors.hpp"
#include "xsblab/estimates.hpp"

using namespace xsb;

namespace {

using Sparse = std::map<std::pair<int, int>, cplx>;  // (signed xi, signed tau) -> value, torus_1d only

Sparse to_sparse(const FrequencyField& f, bool conj) {
  const LatticeGeometry& g = f.geometry();
  Sparse out;
  for (std::size_t s = 0; s < g.spatial_size(); ++s)
    for (int j = 0; j < g.tau_count(); ++j) {
      const cplx z = f.at(s, j);
      if (z == cplx{}) continue;
      const int k = g.signed_index(static_cast<int>(s)), t = g.tau_signed_index(j);
      if (conj)
        out[{-k, -t}] += std::conj(z);
      else
        out[{k, t}] += z;
    }
  return out;
}

Sparse convolve(const Sparse& a, const Sparse& b, double w) {
  Sparse out;
  for (const auto& [p, x] : a)
    for (const auto& [q, y] : b) out[{p.first + q.first, p.second + q.second}] += w * x * y;
  return out;
}

double weighted_norm(const Sparse& f, const WeightSpec& ws, double mw) {
  double acc = 0.0;
  for (const auto& [p, z] : f) {
    const double xi = p.first, tau = p.second;  // unit spacings
    acc += std::pow(oracle::jb(xi), 2 * ws.s) * std::pow(oracle::jb(tau + sign_value(ws.sign) * xi * xi), 2 * ws.b) *
           std::norm(z);
  }
  return std::sqrt(acc * mw);
}

const LatticeGeometry& geo() {
  static const auto g = LatticeGeometry::create(DomainKind::torus_1d, 8, 1.0, 36, 1.0);
  return g;
}

EstimateInstance trilinear() {
  EstimateInstance inst;
  inst.lhs.xsb = {-0.3, -0.45, Sign::plus};
  inst.factors = {{false, {-0.3, 0.55, Sign::plus}, {}},
                  {true, {-0.3, 0.55, Sign::plus}, {}},
                  {true, {-0.3, 0.55, Sign::plus}, {}}};
  return inst;
}

}  // namespace

TEST_CASE("registry") {
  const auto& r = registry();
  CHECK(r.size() == 41);
  std::set<std::string> ids;
  for (std::size_t i = 0; i < r.size(); ++i) {
    ids.insert(r[i].id);
    if (i > 0) CHECK(r[i - 1].id < r[i].id);
    CHECK(!r[i].anchor.empty());
    CHECK(!r[i].parameter_map.empty());
    const EstimateInstance inst = r[i].instantiate(r[i].defaults);
    CHECK(static_cast<int>(inst.factors.size()) == r[i].arity);
    CHECK_NOTHROW(r[i].geometry.build());
  }
  CHECK(ids.size() == r.size());
  CHECK(find_case("thm41").id == "thm41");
  CHECK_THROWS_AS(find_case("no-such-case"), ConfigError);
  CHECK(find_case("thm41").admissible({-0.3, 0.55, -0.46, 0, 0.05}));
  CHECK_FALSE(find_case("thm41").admissible({-0.5, 0.55, -0.46, 0, 0.05}));
}

TEST_CASE("trilinear quotient against a sparse convolution") {
  const auto& g = geo();
  const EstimateInstance inst = trilinear();
  std::vector<FrequencyField> f;
  for (std::uint64_t s = 0; s < 3; ++s) f.push_back(oracle::random_field(g, 60 + s));

  const double mw = g.measure_weight(), c = 1.0 / (2 * oracle::pi);
  Sparse acc = to_sparse(f[0], false);
  acc = convolve(acc, to_sparse(f[1], true), c * mw);
  acc = convolve(acc, to_sparse(f[2], true), c * mw);
  const double lhs = weighted_norm(acc, inst.lhs.xsb, mw);
  double rhs = 1.0;
  for (const auto& x : f) rhs *= oracle::xsb_direct(x, -0.3, 0.55, 1);

  CHECK(lhs_norm(inst, f) == doctest::Approx(lhs).epsilon(1e-10));
  CHECK(evaluate_instance(inst, f) == doctest::Approx(lhs / rhs).epsilon(1e-10));
}

TEST_CASE("conjugated variant leaves the quotient unchanged") {
  const auto& g = geo();
  const EstimateInstance inst = trilinear();
  std::vector<FrequencyField> f;
  for (std::uint64_t s = 0; s < 3; ++s) f.push_back(oracle::inner_field(g, 80 + s));
  const double q = evaluate_instance(inst, f);
  for (int i = 0; i < 3; ++i) {
    auto h = f;
    h[i] = conjugate_field(f[i]);
    CHECK(evaluate_instance(conjugated_variant(inst, i), h) == doctest::Approx(q).epsilon(1e-12));
  }
  // all factors conjugated and every sign flipped: the LHS is the conjugate product
  std::vector<FrequencyField> h;
  for (const auto& x : f) h.push_back(conjugate_field(x));
  CHECK(evaluate_instance(mirrored(inst), h) == doctest::Approx(q).epsilon(1e-12));
}

TEST_CASE("undefined quotient and bad inputs") {
  const auto& g = geo();
  const EstimateInstance inst = trilinear();
  std::vector<FrequencyField> f{oracle::random_field(g, 1), FrequencyField(g), oracle::random_field(g, 2)};
  CHECK_THROWS_AS(evaluate_instance(inst, f), UndefinedQuotientError);
  CHECK(lhs_norm(inst, f) == 0.0);
  f.pop_back();
  CHECK_THROWS_AS(evaluate_instance(inst, f), std::invalid_argument);
  CHECK_THROWS_AS(evaluate_quotient(find_case("thm41"), {}, f), std::invalid_argument);
}

TEST_CASE("envelope fields") {
  const auto& g = geo();
  const auto amp = draw_amplitudes(g.spatial_size(), 3);
  CHECK(amp == draw_amplitudes(g.spatial_size(), 3));
  CHECK(amp != draw_amplitudes(g.spatial_size(), 4));
  const FrequencyField f = envelope_field(g, 1.0, Sign::minus, amp);
  const int k = g.tau_count();
  for (std::size_t s = 0; s < g.spatial_size(); ++s) {
    const double x2 = g.xi_norm_sq(s);
    CHECK(f.at(s, k / 2) == cplx{});
    for (int j : {0, 1, k - 1}) {
      const cplx ref = amp[s] / std::sqrt(1 + x2) / oracle::jb(g.tau_value(j) - x2);
      CHECK(std::abs(f.at(s, j) - ref) < 1e-15);
    }
  }
  const auto e1 = random_ensemble(g, 1.0, 3, 9), e2 = random_ensemble(g, 1.0, 3, 9);
  for (int i = 0; i < 3; ++i) CHECK(oracle::max_diff(e1[i].coeffs(), e2[i].coeffs()) == 0.0);
  CHECK(oracle::max_diff(e1[0].coeffs(), e1[1].coeffs()) > 0.0);
  CHECK_THROWS_AS(random_ensemble(g, -1.0, 1, 1), std::invalid_argument);
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("maximize_quotient is deterministic and monotone") {
  const EstimateCase& c = find_case("thm41");
  EstimateParams p{-0.3, 0.55, -0.46, 0, 0.05};
  MaximizeOptions opt;
  opt.budget = 6;
  opt.hill_steps = 4;
  opt.refine = false;
  opt.geometry = GeometrySpec{DomainKind::torus_1d, 8, 1.0, 68, 0.5};
  const QuotientReport a = maximize_quotient(c, p, 5, opt), b = maximize_quotient(c, p, 5, opt);
  CHECK(a.max_quotient == b.max_quotient);
  CHECK(a.argmax_seed == b.argmax_seed);
  CHECK(a.history == b.history);
  CHECK(a.max_quotient > 0.0);
  CHECK(a.admissible);
  CHECK_FALSE(a.refinement_ratio.has_value());
  CHECK(a.fingerprint == "torus_1d/M=8/dxi=1/K=68/dtau=0.5");
  CHECK(std::is_sorted(a.history.begin(), a.history.end()));
  CHECK(maximize_quotient(c, p, 6, opt).max_quotient != a.max_quotient);
}
