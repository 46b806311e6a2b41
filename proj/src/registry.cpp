// The estimate cases. Each admissible predicate is the hypothesis list of the
// statement, transcribed term by term.

#include <algorithm>

#include "xsblab/errors.hpp"
#include "xsblab/estimates.hpp"

namespace xsb {

namespace {

constexpr Sign P = Sign::plus;

WeightSpec X(double s, double b) { return {s, b, P}; }

FactorSpec plain(double s, double b) { return {false, X(s, b), {}}; }
FactorSpec bar(double s, double b) { return {true, X(s, b), {}}; }

EstimateInstance xsb_lhs(WeightSpec w, std::vector<FactorSpec> f) {
  EstimateInstance inst;
  inst.lhs.kind = LhsNormKind::xsb;
  inst.lhs.xsb = w;
  inst.factors = std::move(f);
  return inst;
}

EstimateInstance mixed_lhs(double p, double q, double sigma, std::vector<FactorSpec> f) {
  EstimateInstance inst;
  inst.lhs.kind = LhsNormKind::mixed;
  inst.lhs.mixed = {p, q, sigma};
  inst.factors = std::move(f);
  return inst;
}

EstimateInstance bilinear_lhs(WeightSpec w, BilinearSymbol sym, int a, int b, std::vector<FactorSpec> f) {
  EstimateInstance inst = xsb_lhs(w, std::move(f));
  inst.lhs.combiner = CombinerKind::bilinear;
  inst.lhs.symbol = sym;
  inst.lhs.slot1 = {a};
  inst.lhs.slot2 = {b};
  return inst;
}

const GeometrySpec torus1{DomainKind::torus_1d, 16, 1.0, 260, 0.5};
const GeometrySpec torus2{DomainKind::torus_2d, 8, 1.0, 130, 0.5};
const GeometrySpec torus3{DomainKind::torus_3d, 8, 1.0, 194, 0.5};
const GeometrySpec line{DomainKind::line_1d, 32, 0.25, 66, 0.5};

EstimateParams params(double s, double b, double bprime = 0.0, double sigma = 0.0) {
  EstimateParams p;
  p.s = s;
  p.b = b;
  p.bprime = bprime;
  p.sigma = sigma;
  return p;
}

std::vector<EstimateCase> build() {
  std::vector<EstimateCase> r;
  auto add = [&](EstimateCase c) { r.push_back(std::move(c)); };
  const std::string eps_map = "eps: spatial index of the right side; b: modulation index";
  const std::string sb_map = "s, b as in the statement";
  const std::string b0_map = "b: the index b0 of the factor in X_{0,b0}; bprime: the second index b";

  // ---- Strichartz type embeddings
  add({"lemma21", 1, CaseStatus::proven, "|u|_{L^6_t L^6_x(T)} <= c |u|_{X_{eps,b}}, n = 1, eps > 0, b > 1/2", eps_map,
       torus1, params(0, 0.55),
       [](const EstimateParams& p) { return mixed_lhs(6, 6, 0, {plain(p.eps, p.b)}); },
       [](const EstimateParams& p) { return p.eps > 0 && p.b > 0.5; }});
  add({"cor21", 1, CaseStatus::proven, "|u|_{L^8_t L^4_x(T)} <= c |u|_{X_{eps,b}}, n = 1, eps > 0, b > 1/2", eps_map,
       torus1, params(0, 0.55),
       [](const EstimateParams& p) { return mixed_lhs(8, 4, 0, {plain(p.eps, p.b)}); },
       [](const EstimateParams& p) { return p.eps > 0 && p.b > 0.5; }});
  add({"lemma22i", 1, CaseStatus::proven, "|u|_{L^4_t L^4_x(T^2)} <= c |u|_{X_{eps,b}}, eps > 0, b > 1/2", eps_map,
       torus2, params(0, 0.55),
       [](const EstimateParams& p) { return mixed_lhs(4, 4, 0, {plain(p.eps, p.b)}); },
       [](const EstimateParams& p) { return p.eps > 0 && p.b > 0.5; }});
  add({"lemma22ii", 1, CaseStatus::proven, "|u|_{L^4_t L^4_x(T^3)} <= c |u|_{X_{s,b}}, s > 1/4, b > 1/2", sb_map,
       torus3, params(0.30, 0.55),
       [](const EstimateParams& p) { return mixed_lhs(4, 4, 0, {plain(p.s, p.b)}); },
       [](const EstimateParams& p) { return p.s > 0.25 && p.b > 0.5; }});
  add({"cor22", 1, CaseStatus::proven, "|u|_{L^4_t L^{10/3}_x(T^3)} <= c |u|_{X_{s,b}}, s > 1/5, b > 9/20", sb_map,
       torus3, params(0.25, 0.50),
       [](const EstimateParams& p) { return mixed_lhs(4, 10.0 / 3.0, 0, {plain(p.s, p.b)}); },
       [](const EstimateParams& p) { return p.s > 0.2 && p.b > 0.45; }});
  add({"open-l4l3-torus3", 1, CaseStatus::open,
       "open: is X_{eps,b} contained in L^4_t L^3_x(T^3) for b > 1/2, eps > 0", eps_map, torus3, params(0, 0.55),
       [](const EstimateParams& p) { return mixed_lhs(4, 3, 0, {plain(p.eps, p.b)}); },
       [](const EstimateParams& p) { return p.eps > 0 && p.b > 0.5; }});

  // ---- bilinear estimates on the line
  add({"lemma23i", 2, CaseStatus::proven,
       "|u vbar|_{L^2_t H^s_x} <= c |v|_{X_{0,b0}} |u|_{X_{0,b}}, b0 > 1/2 >= s >= 0, b > 1/4 + s/2", b0_map, line,
       params(0.25, 0.55, 0.425),
       [](const EstimateParams& p) { return mixed_lhs(2, 2, p.s, {plain(0, p.bprime), bar(0, p.b)}); },
       [](const EstimateParams& p) {
         return p.b > 0.5 && 0.5 >= p.s && p.s >= 0 && p.bprime > 0.25 + p.s / 2;
       }});
  add({"lemma23ii", 2, CaseStatus::proven,
       "|u vbar|_{L^p_t H^s_x} <= c |v|_{X_{0,b0}} |u|_{X_{0,b0}}, b0 > 1/2 >= s >= 0, 1/p = 1/4 + s/2",
       "b: the index b0; the time exponent p follows from s", line, params(0.25, 0.55),
       [](const EstimateParams& p) {
         return mixed_lhs(1.0 / (0.25 + p.s / 2), 2, p.s, {plain(0, p.b), bar(0, p.b)});
       },
       [](const EstimateParams& p) { return p.b > 0.5 && 0.5 >= p.s && p.s >= 0; }});
  add({"lemma23iii", 2, CaseStatus::proven,
       "|v w|_{X_{sigma,b'}} <= c |v|_{X_{sigma,b0}} |w|_{L^2_t H^{-s-sigma}_x}, b0 > 1/2 >= s >= 0, sigma <= 0, "
       "b' < -1/4 - s/2",
       "b: the index b0; bprime: b'; sigma as stated", line, params(0.25, 0.55, -0.425, -0.1),
       [](const EstimateParams& p) {
         return xsb_lhs(X(p.sigma, p.bprime), {plain(p.sigma, p.b), plain(-p.s - p.sigma, 0)});
       },
       [](const EstimateParams& p) {
         return p.b > 0.5 && 0.5 >= p.s && p.s >= 0 && p.sigma <= 0 && p.bprime < -0.25 - p.s / 2;
       }});
  add({"lemma24", 2, CaseStatus::proven,
       "|I^{1/2}_-(u, v)|_{L^2_{xt}} <= c |u|_{X_{0,b0}} |v|_{X_{0,b}}, b, b0 > 1/2 (transferred free-wave bound)",
       b0_map, line, params(0, 0.55, 0.55),
       [](const EstimateParams& p) {
         return bilinear_lhs(X(0, 0), I_minus(0.5), 0, 1, {plain(0, p.b), plain(0, p.bprime)});
       },
       [](const EstimateParams& p) { return p.b > 0.5 && p.bprime > 0.5; }});
  add({"cor23i", 2, CaseStatus::proven,
       "|J^s_-(u, v)|_{L^2_{xt}} <= c |u|_{X_{0,b0}} |v|_{X_{0,b}}, b0 > 1/2, 0 <= s <= 1/2, b > 1/4 + s/2", b0_map,
       line, params(0.25, 0.55, 0.425),
       [](const EstimateParams& p) {
         return bilinear_lhs(X(0, 0), J_minus(p.s), 0, 1, {plain(0, p.b), plain(0, p.bprime)});
       },
       [](const EstimateParams& p) {
         return p.b > 0.5 && 0 <= p.s && p.s <= 0.5 && p.bprime > 0.25 + p.s / 2;
       }});
  add({"cor23i-conj", 2, CaseStatus::proven,
       "|J^s_-(ubar, vbar)|_{L^2_{xt}} <= c |u|_{X_{0,b0}} |v|_{X_{0,b}}, same hypotheses as cor23i", b0_map, line,
       params(0.25, 0.55, 0.425),
       [](const EstimateParams& p) {
         return bilinear_lhs(X(0, 0), J_minus(p.s), 0, 1, {bar(0, p.b), bar(0, p.bprime)});
       },
       [](const EstimateParams& p) {
         return p.b > 0.5 && 0 <= p.s && p.s <= 0.5 && p.bprime > 0.25 + p.s / 2;
       }});
  add({"cor23ii", 2, CaseStatus::proven,
       "|J^s_+(v, ubar)|_{X_{0,b'}} <= c |u|_{X_{0,b0}} |v|_{L^2_{xt}}, b0 > 1/2, 0 <= s <= 1/2, b' > -1/4 - s/2",
       "b: the index b0; bprime: b'; factors ordered (u, v)", line, params(0.25, 0.55, -0.325),
       [](const EstimateParams& p) {
         return bilinear_lhs(X(0, p.bprime), J_plus(p.s), 1, 0, {bar(0, p.b), plain(0, 0)});
       },
       [](const EstimateParams& p) {
         return p.b > 0.5 && 0 <= p.s && p.s <= 0.5 && p.bprime > -0.25 - p.s / 2;
       }});

  // ---- trilinear refinements on the line
  auto lemma31_adm = [](const EstimateParams& p) { return 0 <= p.s && p.s <= 0.25 && p.b > 0.5; };
  add({"lemma31", 3, CaseStatus::proven,
       "|u1 u2 u3|_{L^2_{xt}} <= c |u1|_{X_{s,b}} |u2|_{X_{-s,b}} |u3|_{X_{0,b}}, 0 <= s <= 1/4, b > 1/2", sb_map, line,
       params(0.2, 0.55),
       [](const EstimateParams& p) {
         return xsb_lhs(X(0, 0), {plain(p.s, p.b), plain(-p.s, p.b), plain(0, p.b)});
       },
       lemma31_adm});
  add({"cor31i", 3, CaseStatus::proven,
       "|u1bar u2 u3bar|_{L^2_{xt}} <= c |u1|_{X_{s,b}} |u2|_{X_{-s,b}} |u3|_{X_{0,b}}, 0 <= s <= 1/4, b > 1/2", sb_map,
       line, params(0.2, 0.55),
       [](const EstimateParams& p) { return xsb_lhs(X(0, 0), {bar(p.s, p.b), plain(-p.s, p.b), bar(0, p.b)}); },
       lemma31_adm});
  add({"cor31ii", 3, CaseStatus::proven,
       "|u1bar u2 u3bar|_{X_{-s,-b}} <= c |u1|_{L^2_{xt}} |u2|_{X_{-s,b}} |u3|_{X_{0,b}}, 0 <= s <= 1/4, b > 1/2", sb_map,
       line, params(0.2, 0.55),
       [](const EstimateParams& p) { return xsb_lhs(X(-p.s, -p.b), {bar(0, 0), plain(-p.s, p.b), bar(0, p.b)}); },
       lemma31_adm});
  add({"cor31iii", 3, CaseStatus::proven,
       "|u1bar u2 u3bar|_{L^2_t H^s_x} <= c |u1|_{X_{s,b}} |u2|_{X_{0,b}} |u3|_{X_{0,b}}, 0 <= s <= 1/4, b > 1/2", sb_map,
       line, params(0.2, 0.55),
       [](const EstimateParams& p) { return mixed_lhs(2, 2, p.s, {bar(p.s, p.b), plain(0, p.b), bar(0, p.b)}); },
       lemma31_adm});
  add({"cor31iv", 3, CaseStatus::proven,
       "|u1bar u2 u3bar|_{X_{-s,-b}} <= c |u1|_{L^2_t H^{-s}_x} |u2|_{X_{0,b}} |u3|_{X_{0,b}}, 0 <= s <= 1/4, b > 1/2",
       sb_map, line, params(0.2, 0.55),
       [](const EstimateParams& p) { return xsb_lhs(X(-p.s, -p.b), {bar(-p.s, 0), plain(0, p.b), bar(0, p.b)}); },
       lemma31_adm});
  add({"lemma32i", 3, CaseStatus::proven,
       "|u1 u2bar u3|_{L^2_t H^s_x} <= c |u1|_{X_{0,b}} |u2|_{X_{0,b}} |u3|_{X_{s,b}}, |s| < 1/2 < b", sb_map, line,
       params(-0.2, 0.55),
       [](const EstimateParams& p) { return mixed_lhs(2, 2, p.s, {plain(0, p.b), bar(0, p.b), plain(p.s, p.b)}); },
       [](const EstimateParams& p) { return std::abs(p.s) < 0.5 && 0.5 < p.b; }});
  add({"lemma32ii", 3, CaseStatus::proven,
       "|u1 u2bar u3|_{L^2_t H^s_x} <= c |u1|_{X_{0,b}} |u2|_{X_{s,b}} |u3|_{X_{0,b}}, -1/2 < s <= 0, b > 1/2", sb_map,
       line, params(-0.2, 0.55),
       [](const EstimateParams& p) { return mixed_lhs(2, 2, p.s, {plain(0, p.b), bar(p.s, p.b), plain(0, p.b)}); },
       [](const EstimateParams& p) { return -0.5 < p.s && p.s <= 0 && p.b > 0.5; }});
  const std::string split_map = "s1 = s3 = sigma, s2 = s - 2 sigma";
  auto split_adm = [](const EstimateParams& p) {
    const double s2 = p.s - 2 * p.sigma;
    return -0.5 < p.s && p.s <= 0 && p.b > 0.5 && p.sigma <= 0 && s2 <= 0;
  };
  add({"lemma32r", 3, CaseStatus::proven,
       "|u1 u2bar u3|_{L^2_t H^s_x} <= c prod |ui|_{X_{si,b}}, -1/2 < s <= 0, b > 1/2, si <= 0, s1 + s2 + s3 = s",
       split_map, line, params(-0.3, 0.55, 0, -0.1),
       [](const EstimateParams& p) {
         return mixed_lhs(2, 2, p.s,
                          {plain(p.sigma, p.b), bar(p.s - 2 * p.sigma, p.b), plain(p.sigma, p.b)});
       },
       split_adm});
  add({"lemma33", 3, CaseStatus::proven,
       "|u1 u2 u3|_{L^2_t H^s_x} <= c |u1|_{X_{s,b}} |u2|_{X_{0,b}} |u3|_{X_{0,b}}, -1/2 < s <= 0, b > 1/2", sb_map,
       line, params(-0.2, 0.55),
       [](const EstimateParams& p) { return mixed_lhs(2, 2, p.s, {plain(p.s, p.b), plain(0, p.b), plain(0, p.b)}); },
       [](const EstimateParams& p) { return -0.5 < p.s && p.s <= 0 && p.b > 0.5; }});
  add({"lemma33r", 3, CaseStatus::proven,
       "|u1bar u2bar u3bar|_{L^2_t H^s_x} <= c prod |ui|_{X_{si,b}}, -1/2 < s <= 0, b > 1/2, si <= 0, s1 + s2 + s3 = s",
       split_map, line, params(-0.3, 0.55, 0, -0.1),
       [](const EstimateParams& p) {
         return mixed_lhs(2, 2, p.s, {bar(p.sigma, p.b), bar(p.s - 2 * p.sigma, p.b), bar(p.sigma, p.b)});
       },
       split_adm});

  // ---- quadratic and cubic nonlinearities
  add({"thm41", 3, CaseStatus::proven,
       "|u1bar u2bar u3bar|_{X_{0,b'}} <= c prod |ui|_{X_{s,b}}, n = 1, m = 3, 0 >= s > -1/m, -1/2 < b' < ms/2, b > 1/2",
       "bprime: b'", torus1, params(-0.3, 0.55, -0.46),
       [](const EstimateParams& p) {
         return xsb_lhs(X(0, p.bprime), {bar(p.s, p.b), bar(p.s, p.b), bar(p.s, p.b)});
       },
       [](const EstimateParams& p) {
         const double m = 3;
         return 0 >= p.s && p.s > -1 / m && -0.5 < p.bprime && p.bprime < m * p.s / 2 && p.b > 0.5;
       }});
  add({"thm41-n2m2", 2, CaseStatus::proven,
       "|u1bar u2bar|_{X_{0,b'}} <= c prod |ui|_{X_{s,b}}, n = 2, m = 2, 0 >= s > -1/m, -1/2 < b' < ms/2, b > 1/2",
       "bprime: b'", torus2, params(-0.3, 0.55, -0.35),
       [](const EstimateParams& p) { return xsb_lhs(X(0, p.bprime), {bar(p.s, p.b), bar(p.s, p.b)}); },
       [](const EstimateParams& p) {
         const double m = 2;
         return 0 >= p.s && p.s > -1 / m && -0.5 < p.bprime && p.bprime < m * p.s / 2 && p.b > 0.5;
       }});
  add({"thm42", 2, CaseStatus::proven,
       "|u1bar u2bar|_{X_{s,b'}(T^3)} <= c prod |ui|_{X_{s,b}}, 0 >= s > -3/10, -1/2 < b' < s/2 - 7/20, b > 1/2",
       "bprime: b'", torus3, params(-0.2, 0.55, -0.475),
       [](const EstimateParams& p) { return xsb_lhs(X(p.s, p.bprime), {bar(p.s, p.b), bar(p.s, p.b)}); },
       [](const EstimateParams& p) {
         return 0 >= p.s && p.s > -0.3 && -0.5 < p.bprime && p.bprime < p.s / 2 - 0.35 && p.b > 0.5;
       }});
  auto thm43_adm = [](const EstimateParams& p) {
    return 0 >= p.s && p.s > -5.0 / 12 && -0.5 < p.bprime && p.bprime < 0.5 * (0.25 + 3 * p.s) &&
           p.sigma < std::min(0.0, 3 * p.s - 2 * p.bprime) && p.b > 0.5;
  };
  add({"thm43-42", 3, CaseStatus::proven,
       "|u1bar u2bar u3bar|_{X_{sigma,b'}(R)} <= c prod |ui|_{X_{s,b}}, 0 >= s > -5/12, -1/2 < b' < (1/4 + 3s)/2, "
       "sigma < min(0, 3s - 2b'), b > 1/2",
       "bprime: b'; sigma: LHS spatial index", line, params(-0.3, 0.55, -0.375, -0.2),
       [](const EstimateParams& p) {
         return xsb_lhs(X(p.sigma, p.bprime), {bar(p.s, p.b), bar(p.s, p.b), bar(p.s, p.b)});
       },
       thm43_adm});
  add({"thm43-43", 3, CaseStatus::proven,
       "|u1 u2 u3|_{X_{sigma,b'}(R)} <= c prod |ui|_{X_{s,b}}, 0 >= s > -5/12, -1/2 < b' < (1/4 + 3s)/2, "
       "sigma < min(0, 3s - 2b'), b > 1/2",
       "bprime: b'; sigma: LHS spatial index", line, params(-0.3, 0.55, -0.375, -0.2),
       [](const EstimateParams& p) {
         return xsb_lhs(X(p.sigma, p.bprime), {plain(p.s, p.b), plain(p.s, p.b), plain(p.s, p.b)});
       },
       thm43_adm});
  add({"thm44", 3, CaseStatus::proven,
       "|u1 u2bar u3bar|_{X_{s,b'}(R)} <= c prod |ui|_{X_{s,b}}, -1/4 >= s > -2/5, "
       "-1/2 < b' < min(s - 1/10, -1/4 + s/2), b > 1/2",
       "bprime: b'", line, params(-0.3, 0.55, -0.45),
       [](const EstimateParams& p) {
         return xsb_lhs(X(p.s, p.bprime), {plain(p.s, p.b), bar(p.s, p.b), bar(p.s, p.b)});
       },
       [](const EstimateParams& p) {
         return -0.25 >= p.s && p.s > -0.4 && -0.5 < p.bprime && p.bprime < std::min(p.s - 0.1, -0.25 + p.s / 2) &&
                p.b > 0.5;
       }});
  add({"thm44r", 3, CaseStatus::proven,
       "|u1 u2bar u3bar|_{X_{s,b'}(R)} <= c prod |ui|_{X_{s,b}}, s >= -1/4, b' < -3/8, b > 1/2", "bprime: b'", line,
       params(-0.2, 0.55, -0.425),
       [](const EstimateParams& p) {
         return xsb_lhs(X(p.s, p.bprime), {plain(p.s, p.b), bar(p.s, p.b), bar(p.s, p.b)});
       },
       [](const EstimateParams& p) { return p.s >= -0.25 && p.bprime < -0.375 && p.b > 0.5; }});

  // ---- quartic nonlinearities
  auto quartic_adm = [](const EstimateParams& p) {
    return 0 >= p.s && p.s > -1.0 / 6 && -0.5 < p.bprime && p.bprime < 1.5 * p.s - 0.25 && p.b > 0.5;
  };
  add({"thm51", 4, CaseStatus::proven,
       "|u1bar u2bar u3bar u4bar|_{X_{s,b'}} <= c prod |ui|_{X_{s,b}}, n = 1, 0 >= s > -1/6, -1/2 < b' < 3s/2 - 1/4, "
       "b > 1/2",
       "bprime: b'", torus1, params(-0.1, 0.55, -0.41),
       [](const EstimateParams& p) {
         return xsb_lhs(X(p.s, p.bprime), {bar(p.s, p.b), bar(p.s, p.b), bar(p.s, p.b), bar(p.s, p.b)});
       },
       quartic_adm});
  add({"prop51", 4, CaseStatus::proven,
       "|u1 u2 u3bar u4bar|_{X_{s,b'}(R)} <= c prod |ui|_{X_{s,b}}, 0 >= s > -1/8, -1/2 < b' < -1/4 + 2s, b > 1/2",
       "bprime: b'", line, params(-0.05, 0.55, -0.4),
       [](const EstimateParams& p) {
         return xsb_lhs(X(p.s, p.bprime), {plain(p.s, p.b), plain(p.s, p.b), bar(p.s, p.b), bar(p.s, p.b)});
       },
       [](const EstimateParams& p) {
         return 0 >= p.s && p.s > -0.125 && -0.5 < p.bprime && p.bprime < -0.25 + 2 * p.s && p.b > 0.5;
       }});
  const std::array<std::pair<const char*, std::array<bool, 4>>, 3> thm52{{
      {"thm52-u4", {false, false, false, false}},
      {"thm52-u3ubar", {false, false, false, true}},
      {"thm52-ubar3u", {true, true, true, false}},
  }};
  for (const auto& [id, conj] : thm52) {
    std::string word;
    for (int i = 0; i < 4; ++i) word += std::string(i ? " u" : "u") + std::to_string(i + 1) + (conj[i] ? "bar" : "");
    add({id, 4, CaseStatus::proven,
         "|" + word + "|_{X_{s,b'}(R)} <= c prod |ui|_{X_{s,b}}, 0 >= s > -1/6, -1/2 < b' < 3s/2 - 1/4, b > 1/2",
         "bprime: b'", line, params(-0.1, 0.55, -0.41),
         [conj](const EstimateParams& p) {
           std::vector<FactorSpec> f;
           for (bool c : conj) f.push_back(c ? bar(p.s, p.b) : plain(p.s, p.b));
           return xsb_lhs(X(p.s, p.bprime), f);
         },
         quartic_adm});
  }

  // ---- targets of the failure families. admissible = outside the failure region.
  add({"ex41-target", 2, CaseStatus::failing,
       "|u1 u2|_{X_{s,b'}(T^d)} <= c prod |ui|_{X_{s,b}}, d >= 2: fails for all s < 0, all b, b'", "bprime: b'",
       torus2, params(-0.25, 0.55, 0),
       [](const EstimateParams& p) { return xsb_lhs(X(p.s, p.bprime), {plain(p.s, p.b), plain(p.s, p.b)}); },
       [](const EstimateParams& p) { return p.s >= 0; }});
  add({"ex42-target", 3, CaseStatus::failing,
       "|u1bar u2bar u3bar|_{X_{s,b'}(T)} <= c prod |ui|_{X_{s,b}}: fails for all s< -1/3 if b - b' <= 1",
       "bprime: b'", torus1, params(-0.5, 0.55, 0),
       [](const EstimateParams& p) {
         return xsb_lhs(X(p.s, p.bprime), {bar(p.s, p.b), bar(p.s, p.b), bar(p.s, p.b)});
       },
       [](const EstimateParams& p) { return !(p.s < -1.0 / 3 && p.b - p.bprime <= 1); }});
  add({"ex51-target", 4, CaseStatus::failing,
       "|u1 u2 u3 u4|_{X_{s,b'}(T)} <= c prod |ui|_{X_{s,b}}: fails for all s < 0, all b, b'", "bprime: b'", torus1,
       params(-0.25, 0.55, 0),
       [](const EstimateParams& p) {
         return xsb_lhs(X(p.s, p.bprime), {plain(p.s, p.b), plain(p.s, p.b), plain(p.s, p.b), plain(p.s, p.b)});
       },
       [](const EstimateParams& p) { return p.s >= 0; }});
  add({"ex51r-target", 3, CaseStatus::failing,
       "|u1 u2 u3|_{X_{s,b'}(T)} <= c prod |ui|_{X_{s,b}}: fails for all s < 0, all b, b'", "bprime: b'", torus1,
       params(-0.25, 0.55, 0),
       [](const EstimateParams& p) {
         return xsb_lhs(X(p.s, p.bprime), {plain(p.s, p.b), plain(p.s, p.b), plain(p.s, p.b)});
       },
       [](const EstimateParams& p) { return p.s >= 0; }});
  add({"ex52-target", 4, CaseStatus::failing,
       "|u1 u2bar u3 u4bar|_{X_{s,b'}(T)} <= c prod |ui|_{X_{s,b}}: fails for all s < 0, all b, b'", "bprime: b'",
       torus1, params(-0.25, 0.55, 0),
       [](const EstimateParams& p) {
         return xsb_lhs(X(p.s, p.bprime), {plain(p.s, p.b), bar(p.s, p.b), plain(p.s, p.b), bar(p.s, p.b)});
       },
       [](const EstimateParams& p) { return p.s >= 0; }});
  add({"ex52r-target", 3, CaseStatus::failing,
       "|u1 u2bar u3|_{X_{s,b'}(T)} <= c prod |ui|_{X_{s,b}}: fails for all s < 0, all b, b'", "bprime: b'", torus1,
       params(-0.25, 0.55, 0),
       [](const EstimateParams& p) {
         return xsb_lhs(X(p.s, p.bprime), {plain(p.s, p.b), bar(p.s, p.b), plain(p.s, p.b)});
       },
       [](const EstimateParams& p) { return p.s >= 0; }});

  std::sort(r.begin(), r.end(), [](const EstimateCase& a, const EstimateCase& b) { return a.id < b.id; });
  return r;
}

}  // namespace

const std::vector<EstimateCase>& registry() {
  static const std::vector<EstimateCase> cases = build();
  return cases;
}

const EstimateCase& find_case(const std::string& id) {
  for (const auto& c : registry())
    if (c.id == id) return c;
  throw ConfigError("unknown estimate case '" + id + "'");
}

}  // namespace xsb
