#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "xsblab/counterexamples.hpp"
#include "xsblab/errors.hpp"
#include "xsblab/regression.hpp"

using namespace xsb;

namespace {

Patch random_patch(int dim, MultiIndex lo, std::array<int, 3> ext, int tlo, int text, std::uint64_t seed) {
  Patch p = Patch::zeros(dim, 1.0, 0.5, lo, ext, tlo, text);
  std::mt19937_64 rng(seed);
  for (cplx& z : p.data) z = oracle::gauss(rng);
  return p;
}

// Family quotient recomputed on a dense lattice: pointwise product in physical
// space, rescaled from the transform normalization to a plain convolution.
double dense_quotient(const CounterexampleFamily& f, const EstimateParams& p, int n) {
  const LatticeGeometry g = minimal_geometry(f, n);
  const EstimateInstance inst = find_case(f.target_case).instantiate(p);
  const std::vector<FrequencyField> raw = build_family_member(f, n, g);
  const int m = static_cast<int>(raw.size()), dim = g.dim();
  std::vector<cplx> prod(g.size(), 1.0);
  double rhs = 1.0;
  for (int i = 0; i < m; ++i) {
    const FactorSpec& fs = inst.factors[i];
    const double sg = sign_value(fs.conjugated ? flipped(fs.weight.sign) : fs.weight.sign);
    std::vector<cplx> c(raw[i].coeffs().begin(), raw[i].coeffs().end());
    for (std::size_t s = 0; s < g.spatial_size(); ++s) {
      const double x2 = g.xi_norm_sq(s);
      for (int j = 0; j < g.tau_count(); ++j)
        c[s * g.tau_count() + j] *=
            std::pow(oracle::jb(std::sqrt(x2)), -fs.weight.s) * std::pow(oracle::jb(g.tau_value(j) + sg * x2), -fs.weight.b);
    }
    const SpatialField u = inverse_transform(FrequencyField(g, c));
    for (std::size_t k = 0; k < prod.size(); ++k) prod[k] *= u.values()[k];
    rhs *= raw[i].l2_norm();
  }
  const FrequencyField conv =
      forward_transform(SpatialField(g, prod)).scaled(std::pow(2 * oracle::pi, 0.5 * (m - 1) * (dim + 1)));
  const WeightSpec& w = inst.lhs.xsb;
  return oracle::xsb_direct(conv, w.s, w.b, w.sign == Sign::plus ? 1 : -1) / rhs;
}

}  // namespace

TEST_CASE("patch convolution matches the nested sum") {
  std::uint64_t seed = 1;
  const Patch a = random_patch(1, {-3, 0, 0}, {5, 1, 1}, 7, 4, seed++);
  const Patch b = random_patch(1, {10, 0, 0}, {3, 1, 1}, -20, 9, seed++);
  const Patch fast = convolve(a, b), slow = convolve_bruteforce(a, b);
  CHECK(fast.lo == slow.lo);
  CHECK(fast.tau_lo == slow.tau_lo);
  CHECK(oracle::max_diff(fast.data, slow.data) < 1e-12 * oracle::max_abs(slow.data));

  const Patch c = random_patch(2, {-2, 4, 0}, {3, 2, 1}, 0, 5, seed++);
  const Patch d = random_patch(2, {1, -6, 0}, {2, 4, 1}, -3, 3, seed++);
  const Patch f2 = convolve(c, d), s2 = convolve_bruteforce(c, d);
  CHECK(oracle::max_diff(f2.data, s2.data) < 1e-12 * oracle::max_abs(s2.data));

  // one site by hand: corner of the sum box is the product of the corners
  CHECK(std::abs(slow.data[0] - a.data[0] * b.data[0] * a.measure_weight()) < 1e-14);
  CHECK(a.value({-3, 0, 0}, 7) == a.data[0]);
  CHECK(a.value({-4, 0, 0}, 7) == cplx{});
}

TEST_CASE("patch on a lattice") {
  const Patch a = random_patch(1, {-3, 0, 0}, {5, 1, 1}, 7, 4, 3);
  const auto g = LatticeGeometry::create(DomainKind::torus_1d, 16, 1.0, 260, 0.5);
  const FrequencyField f = a.to_field(g);
  CHECK(f.l2_norm() == doctest::Approx(a.l2_norm()).epsilon(1e-14));
  CHECK(f.at(g.storage_of(-3), g.tau_storage_of(7)) == a.data[0]);
  const auto small = LatticeGeometry::create(DomainKind::torus_1d, 16, 1.0, 260, 0.5).padded(4, 260);
  CHECK_THROWS_AS(a.to_field(small), GeometryError);
}

TEST_CASE("dense lattice and patch quotients agree") {
  for (const char* id : {"ex51r", "ex52r", "ex42f", "ex41"}) {
    const CounterexampleFamily& f = find_family(id);
    const EstimateParams p{-0.5, 0.55, 0.0, 0.0, 0.05};
    const double q = family_quotient(f, p, 2);
    CHECK(q == doctest::Approx(dense_quotient(f, p, 2)).epsilon(1e-9));
  }
}

TEST_CASE("families") {
  CHECK(families().size() == 8);
  CHECK_THROWS_AS(find_family("ex99"), ConfigError);
  for (const auto& f : families()) {
    CHECK(find_case(f.target_case).arity == f.arity);
    CHECK(static_cast<int>(family_patches(f, 4).size()) == f.arity);
    const LowerBoundReport lb = verify_lower_bound(f, 4);
    CHECK_MESSAGE(lb.pass, f.id);
    CHECK(lb.sites > 0);
  }
  CHECK(find_family("ex53").default_bprime == -1.0);
  CHECK(line_family_constant() > 0.0);
  CHECK(line_family_constant() == line_family_constant());
}

TEST_CASE("require_resolves names the minimal geometry") {
  const CounterexampleFamily& f = find_family("ex51r");
  const LatticeGeometry need = minimal_geometry(f, 8);
  CHECK_NOTHROW(require_resolves(f, 8, need));
  const auto small = LatticeGeometry::create(DomainKind::torus_1d, 16, 1.0, 260, 0.5);
  try {
    require_resolves(f, 8, small);
    FAIL("expected GeometryError");
  } catch (const GeometryError& e) {
    CHECK(std::string(e.what()).find(need.fingerprint()) != std::string::npos);
  }
  CHECK_THROWS_AS(verify_lower_bound(f, 8, small), GeometryError);
  CHECK_THROWS_AS(require_resolves(find_family("ex53"), 4, small), GeometryError);
  CHECK_THROWS_AS(family_patches(find_family("ex53"), 0), GeometryError);
}

TEST_CASE("growth fit") {
  const CounterexampleFamily& f = find_family("ex52r");
  const EstimateParams p{-0.5, 0.55, 0.0, 0.0, 0.05};
  const GrowthReport r = fit_growth(f, p, {4, 8, 16});
  CHECK(r.n == std::vector<int>{4, 8, 16});
  CHECK(r.predicted_slope == doctest::Approx(1.0));
  CHECK(std::abs(r.fitted_slope - r.predicted_slope) < 0.1);
  CHECK_FALSE(r.admissible);
  const LinearFit direct = loglog_fit({4, 8, 16}, r.quotient);
  CHECK(r.fitted_slope == direct.slope);

  CHECK_THROWS_AS(fit_growth(f, p, {4, 4, 8}), ConfigError);
  CHECK_THROWS_AS(fit_growth(f, p, {0, 4, 8}), ConfigError);
  const auto fixed = LatticeGeometry::create(DomainKind::torus_1d, 16, 1.0, 260, 0.5);
  CHECK_THROWS_AS(fit_growth(f, p, {4, 8, 16}, [&](int) { return fixed; }), GeometryError);
  CHECK_THROWS_AS(inadmissible_probe(find_case("thm41"), p, f, {4, 8, 16}), ConfigError);
}

TEST_CASE("regression") {
  const LinearFit f = loglog_fit({1, 2, 4, 8}, {3, 3 * std::pow(2, 1.5), 3 * std::pow(4, 1.5), 3 * std::pow(8, 1.5)});
  CHECK(f.slope == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(f.residual < 1e-13);
  const LinearFit g = least_squares({0, 1, 2, 3}, {1, 0, 1, 0});
  CHECK(g.slope == doctest::Approx(-0.2));
  CHECK(g.residual == doctest::Approx(std::sqrt(0.2)));
  CHECK_THROWS_AS(least_squares({1, 1}, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(loglog_fit({1, 2}, {0, 1}), std::invalid_argument);
}
