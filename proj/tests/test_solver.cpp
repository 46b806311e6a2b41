#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "xsblab/errors.hpp"
#include "xsblab/estimates.hpp"
#include "xsblab/solver.hpp"

using namespace xsb;

namespace {

SolveConfig torus_cfg(int M, double T, int steps) {
  SolveConfig cfg;
  cfg.T = T;
  cfg.time_steps = steps;
  cfg.geometry = LatticeGeometry::unchecked(DomainKind::torus_1d, M, 1.0, 2, 1.0);
  return cfg;
}

// Smooth data supported on |xi| <= 2.
SpatialSpectrum smooth_data(const LatticeGeometry& g, double amp) {
  return SpatialSpectrum::from_function(g, [amp](const XiVector& x) {
    return std::abs(x[0]) <= 2 ? cplx(amp * std::exp(-x[0] * x[0] / 2), 0.3 * amp * x[0]) : cplx{};
  });
}

double sup_distance(const LatticeGeometry& g, const Trajectory& a, const Trajectory& b) {
  return trajectory_distance(g, a, b, 0.0);
}

}  // namespace

TEST_CASE("nonlinearity parsing") {
  auto p = NonlinearitySpec::parse("u ubar^2");
  CHECK(p.j == 1);
  CHECK(p.k == 2);
  CHECK(p.name() == "u ubar^2");
  CHECK(NonlinearitySpec::parse("u*ubar").degree() == 2);
  CHECK(NonlinearitySpec::parse("ubar2").k == 2);
  CHECK(NonlinearitySpec::parse("u3ubar").j == 3);
  const auto a = NonlinearitySpec::parse("|u|^4");
  CHECK(a.j == 2);
  CHECK(a.k == 2);
  CHECK(NonlinearitySpec::parse("ubar^3").name() == "ubar^3");
  CHECK(NonlinearitySpec::parse(NonlinearitySpec::parse("u^2 ubar").name()).name() == "u^2 ubar");
  CHECK_THROWS_AS(NonlinearitySpec::parse("v^2"), ConfigError);
  CHECK_THROWS_AS(NonlinearitySpec::parse(""), ConfigError);
  CHECK_THROWS_AS(NonlinearitySpec::parse("u^"), ConfigError);
}

TEST_CASE("rough data") {
  const auto g = LatticeGeometry::unchecked(DomainKind::torus_2d, 8, 1.0, 2, 1.0);
  const SpatialSpectrum u = rough_data(g, {-0.3, 0.05, 4, 2.0});
  const auto amp = draw_amplitudes(g.spatial_size(), 4);
  for (std::size_t s = 0; s < g.spatial_size(); ++s) {
    const double w = std::pow(1 + g.xi_norm_sq(s), -0.5 * (-0.3 + 1 + 0.05));
    CHECK(std::abs(u.at(s) - 2.0 * amp[s] * w) < 1e-14);
  }
  CHECK(hs_norm(g, std::vector<cplx>(u.coeffs().begin(), u.coeffs().end()), 0.2) == doctest::Approx(u.hs_norm(0.2)));
}

TEST_CASE("nonlinear term is the dealiased product") {
  const auto g = LatticeGeometry::unchecked(DomainKind::torus_1d, 16, 1.0, 2, 1.0);
  const SpatialSpectrum u = smooth_data(g, 1.0);
  const std::vector<cplx> c(u.coeffs().begin(), u.coeffs().end());
  const NonlinearitySpec n{1, 2, {0.0, 2.0}};
  const std::vector<cplx> got = nonlinear_term(g, c, n);
  // coefficient normalization: the product of e^{i a x} and e^{i b x} carries (2 pi)^{-1/2}
  std::vector<cplx> ref(16);
  const double w = 1.0 / std::sqrt(2 * oracle::pi);
  for (int a = -8; a < 8; ++a)
    for (int b = -8; b < 8; ++b)
      for (int d = -8; d < 8; ++d) {
        const int k = a - b - d;
        if (k <= -8 || k >= 8) continue;  // -8 has no partner and is dropped
        const cplx ua = c[g.storage_of(a)], ub = std::conj(c[g.storage_of(b)]), ud = std::conj(c[g.storage_of(d)]);
        ref[g.storage_of(k)] += cplx(0.0, 2.0) * w * w * ua * ub * ud;
      }
  CHECK(oracle::max_diff(got, ref) < 1e-12 * oracle::max_abs(ref));
}

TEST_CASE("zero nonlinearity") {
  SolveConfig cfg = torus_cfg(16, 0.2, 32);
  cfg.sobolev_index = -0.3;
  const SpatialSpectrum u0 = rough_data(cfg.geometry, {-0.3, 0.05, 1, 1.0});
  const SolveResult r = solve_local(u0, {0, 2, 0.0}, cfg);
  CHECK(r.converged);
  CHECK(r.iterations == 1);
  const double h0 = u0.hs_norm(-0.3);
  for (double h : r.hs_trace) CHECK(std::abs(h - h0) < 1e-12 * h0);
  const Trajectory free = free_trajectory(u0, cfg);
  CHECK(sup_distance(cfg.geometry, r.trajectory, free) < 1e-13 * h0);
  CHECK(r.trajectory.times.size() == 65);
  CHECK(r.trajectory.times.front() == doctest::Approx(-0.2));
  CHECK(r.trajectory.times[32] == 0.0);
  const PersistenceReport pr = persistence_probe(r, cfg);
  CHECK(pr.max_growth == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lipschitz_quotient(u0, rough_data(cfg.geometry, {-0.3, 0.05, 2, 0.1}), {0, 2, 0.0}, cfg) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("free flow rotates each mode") {
  const SolveConfig cfg = torus_cfg(16, 0.3, 8);
  const SpatialSpectrum u0 = smooth_data(cfg.geometry, 1.0);
  const Trajectory tr = free_trajectory(u0, cfg);
  for (std::size_t k = 0; k < tr.times.size(); ++k)
    for (int xi = -2; xi <= 2; ++xi) {
      const std::size_t s = cfg.geometry.storage_of(xi);
      CHECK(std::abs(tr.slices[k][s] - std::polar(1.0, -xi * xi * tr.times[k]) * u0.at(s)) < 1e-14);
    }
}

TEST_CASE("one-mode quadratic closed form") {
  // u0 = A e^{ix}, N = ubar^2: the first Picard iterate puts
  // sqrt(2 pi) conj(A)^2 (e^{2it} - e^{-4it}) / (6i) on mode -2
  const SolveConfig cfg = torus_cfg(16, 0.5, 8192);
  const cplx A(0.3, 0.2);
  const auto& g = cfg.geometry;
  std::vector<cplx> c(16);
  c[g.storage_of(1)] = std::sqrt(2 * oracle::pi) * A;
  const SpatialSpectrum u0(g, c);
  const NonlinearitySpec n{0, 2, 1.0};
  const Trajectory it = picard_step(free_trajectory(u0, cfg), u0, n, cfg);
  double err = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < it.times.size(); k += 64) {
    const double t = it.times[k];
    const cplx ref = std::sqrt(2 * oracle::pi) * std::conj(A) * std::conj(A) *
                     (std::polar(1.0, 2 * t) - std::polar(1.0, -4 * t)) / cplx(0.0, 6.0);
    err = std::max(err, std::abs(it.slices[k][g.storage_of(-2)] - ref));
    scale = std::max(scale, std::abs(ref));
    const cplx lin = std::polar(1.0, -t) * c[g.storage_of(1)];
    err = std::max(err, std::abs(it.slices[k][g.storage_of(1)] - lin));
    for (int xi : {0, 2, -1, 3}) err = std::max(err, std::abs(it.slices[k][g.storage_of(xi)]));
  }
  CHECK(scale > 0.01);
  CHECK(err < 1e-8);
}

TEST_CASE("contraction at the bisected time") {
  SolveConfig cfg = torus_cfg(16, 2.0, 64);
  const SpatialSpectrum u0 = smooth_data(cfg.geometry, 0.5);
  const BisectionReport b = bisect_time(u0, {0, 2, 1.0}, cfg);
  CHECK(b.result.converged);
  CHECK(b.ratio <= 0.5);
  CHECK(b.T == doctest::Approx(2.0 / std::pow(2.0, b.halvings)));
  CHECK(b.halvings >= 1);
  const auto& r = b.result.residuals;
  CHECK(r.size() >= 3);
  CHECK(contraction_ratio(r) == b.ratio);
  for (std::size_t i = 1; i < r.size(); ++i)
    if (r[i - 1] > 1e-12) CHECK(r[i] <= 0.5 * r[i - 1]);

  // the converged trajectory is a fixed point of one more step
  cfg.T = b.T;
  const Trajectory again = picard_step(b.result.trajectory, u0, {0, 2, 1.0}, cfg);
  CHECK(sup_distance(cfg.geometry, again, b.result.trajectory) < 1e-9);

  CHECK_THROWS_AS(bisect_time(rough_data(cfg.geometry, {0.0, 0.05, 1, 1e6}), {0, 2, 1.0}, cfg, 1), SolverError);
}

TEST_CASE("contraction_ratio") {
  CHECK(contraction_ratio({}) == 0.0);
  CHECK(contraction_ratio({1.0}) == 0.0);
  CHECK(contraction_ratio({1.0, 0.25, 0.1}) == doctest::Approx(0.4));
  CHECK(contraction_ratio({1.0, 0.1, 1e-18, 1e-17}) == doctest::Approx(0.1));
}

TEST_CASE("small data: deviation from the free flow is quadratic in the amplitude") {
  const SolveConfig cfg = torus_cfg(16, 0.2, 64);
  auto dev = [&](double a) {
    const SpatialSpectrum u0 = smooth_data(cfg.geometry, a);
    const SolveResult r = solve_local(u0, {0, 2, 1.0}, cfg);
    REQUIRE(r.converged);
    return sup_distance(cfg.geometry, r.trajectory, free_trajectory(u0, cfg));
  };
  const double slope = std::log(dev(2e-3) / dev(1e-3)) / std::log(2.0);
  CHECK(std::abs(slope - 2.0) < 0.01);
}

TEST_CASE("time reversal symmetry for i ubar^2 with real data") {
  const SolveConfig cfg = torus_cfg(16, 0.3, 64);
  const auto& g = cfg.geometry;
  const SpatialSpectrum raw = rough_data(g, {0.0, 0.5, 3, 0.5});
  std::vector<cplx> c(g.spatial_size());
  for (std::size_t s = 0; s < c.size(); ++s) c[s] = 0.5 * (raw.at(s) + std::conj(raw.at(g.negated_spatial(s))));
  c[g.storage_of(-8)] = 0.0;  // the unpaired row
  const SpatialSpectrum u0(g, c);
  const SolveResult r = solve_local(u0, {0, 2, {0.0, 1.0}}, cfg);
  REQUIRE(r.converged);
  const auto& sl = r.trajectory.slices;
  const std::size_t last = sl.size() - 1;
  double err = 0.0, scale = 0.0;
  for (std::size_t k = 0; k <= last; ++k)
    for (std::size_t s = 0; s < g.spatial_size(); ++s) {
      err = std::max(err, std::abs(sl[k][s] - std::conj(sl[last - k][g.negated_spatial(s)])));
      scale = std::max(scale, std::abs(sl[k][s]));
    }
  CHECK(err < 1e-10 * scale);
}

TEST_CASE("dealiasing: more modes do not change retained modes") {
  // data on |xi| <= 2 and a cubic term: one step reaches |xi| <= 6, inside both bands,
  // so any aliasing would show up as a difference
  const SolveConfig c16 = torus_cfg(16, 0.05, 32), c32 = torus_cfg(32, 0.05, 32);
  const NonlinearitySpec n{1, 2, 1.0};
  const SpatialSpectrum d16 = smooth_data(c16.geometry, 0.5), d32 = smooth_data(c32.geometry, 0.5);
  const Trajectory a = picard_step(free_trajectory(d16, c16), d16, n, c16);
  const Trajectory b = picard_step(free_trajectory(d32, c32), d32, n, c32);
  double err = 0.0, outside = 0.0;
  for (std::size_t k = 0; k < a.slices.size(); ++k) {
    for (int xi = -8; xi < 8; ++xi)
      err = std::max(err, std::abs(a.slices[k][c16.geometry.storage_of(xi)] - b.slices[k][c32.geometry.storage_of(xi)]));
    for (int xi : {7, -7, 8, 12, -16}) outside = std::max(outside, std::abs(b.slices[k][c32.geometry.storage_of(xi)]));
  }
  CHECK(err < 1e-13);
  CHECK(outside < 1e-13);

  // converged smooth solutions: doubling the modes moves sup_t H^0 (tail included) by < 1e-6
  const SolveConfig c64 = torus_cfg(64, 0.05, 32);
  const SpatialSpectrum d64 = smooth_data(c64.geometry, 0.5);
  const SolveResult ra = solve_local(d32, n, c32), rb = solve_local(d64, n, c64);
  REQUIRE(ra.converged);
  REQUIRE(rb.converged);
  double full = 0.0;
  for (std::size_t k = 0; k < ra.trajectory.slices.size(); ++k) {
    double h = 0.0;
    for (int xi = -32; xi < 32; ++xi) {
      const cplx lo = xi >= -16 && xi < 16 ? ra.trajectory.slices[k][c32.geometry.storage_of(xi)] : cplx{};
      h += std::norm(lo - rb.trajectory.slices[k][c64.geometry.storage_of(xi)]);
    }
    full = std::max(full, std::sqrt(h));
  }
  CHECK(full < 1e-6);
}

TEST_CASE("probes and guards") {
  SolveConfig cfg = torus_cfg(16, 0.05, 32);
  cfg.sobolev_index = -0.3;
  const NonlinearitySpec n{0, 3, 1.0};
  const SpatialSpectrum u0 = rough_data(cfg.geometry, {-0.3, 0.05, 1, 0.5});
  CHECK_THROWS_AS(lipschitz_quotient(u0, u0, n, cfg), std::invalid_argument);
  CHECK_THROWS_AS(lipschitz_probe(u0, 0.0, n, cfg, 2, 1), std::invalid_argument);
  const LipschitzReport lr = lipschitz_probe(u0, 1e-3, n, cfg, 2, 1);
  CHECK(lr.trials == 2);
  CHECK(lr.quotient > 0.5);
  CHECK(std::abs(lr.quotient / lr.quotient_half - 1) < 0.3);
  const LipschitzReport lr2 = lipschitz_probe(u0, 1e-3, n, cfg, 2, 1);
  CHECK(lr2.quotient == lr.quotient);

  const SolveResult zero = solve_local(SpatialSpectrum(cfg.geometry), n, cfg);
  CHECK(zero.converged);
  const PersistenceReport pz = persistence_probe(zero, cfg);
  CHECK(pz.max_jump == 0.0);
  CHECK(pz.max_growth == 1.0);

  const SolveResult blow = solve_local(rough_data(cfg.geometry, {-0.3, 0.05, 1, 1e4}), n, cfg);
  CHECK_FALSE(blow.converged);
  CHECK(blow.diverged);
  CHECK_THROWS_AS(lipschitz_probe(rough_data(cfg.geometry, {-0.3, 0.05, 1, 1e4}), 1e-3, n, cfg, 1, 1), SolverError);
}

TEST_CASE("space-time diagnostic field") {
  const SolveConfig cfg = torus_cfg(16, 0.5, 16);
  const SpatialSpectrum u0 = smooth_data(cfg.geometry, 1.0);
  const Trajectory tr = free_trajectory(u0, cfg);
  const FrequencyField f = trajectory_field(tr, cfg);
  CHECK(f.geometry().tau_count() == 32);
  CHECK(f.geometry().tau_spacing() == doctest::Approx(oracle::pi / 0.5));
  CHECK(xsb_diagnostic(tr, cfg, 0.0, 0.55) > 0.0);
  CHECK(xsb_diagnostic(free_trajectory(SpatialSpectrum(cfg.geometry), cfg), cfg, 0.0, 0.55) == 0.0);
}
