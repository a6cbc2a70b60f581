#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "cfbound/charfn.hpp"
#include "cfbound/errors.hpp"
#include "cfbound/filters.hpp"
#include "cfbound/inversion.hpp"
#include "cfbound/nonuniform.hpp"
#include "cfbound/specfun.hpp"

using namespace cfb;
using cplx = std::complex<double>;

TEST_CASE("difference cascade on polynomials") {
  // h(t) = t^2, k = 1: L h = -(1/t)(h(0) - h(t) + t h'(t)) = -t.
  ComplexJet h = [](double t, int q) -> cplx {
    if (q == 0) return t * t;
    if (q == 1) return 2.0 * t;
    if (q == 2) return 2.0;
    return 0.0;
  };
  LambdaEvaluator lam(h, 1);
  for (double t : {-2.0, -0.2, 0.1, 0.49, 0.51, 3.0}) {
    CHECK(std::abs(lam(t) - cplx(-t)) < 1e-11);
    CHECK(std::abs(lam.finite_sum_form(t) - cplx(-t)) < 1e-9);
    CHECK(std::abs(lam.integral_form(t) - cplx(-t)) < 1e-11);
  }
  CHECK(lam(0.0) == cplx(0.0));
}

TEST_CASE("difference cascade on the exponential") {
  // h(t) = e^{iat}: L^k h = -(k!/t^k)(1 - e^{iat} sum_{j<=k} (-iat)^j / j!).
  const double a = 1.7;
  ComplexJet h = [a](double t, int q) -> cplx {
    return std::pow(cplx(0.0, a), q) * std::exp(cplx(0.0, a * t));
  };
  for (int k = 1; k <= 3; ++k) {
    LambdaEvaluator lam(h, k);
    for (double t : {-1.2, 0.03, 0.4, 2.5}) {
      double kfac = 1.0;
      cplx partial = 0.0, term = 1.0;
      for (int j = 0; j <= k; ++j) {
        if (j > 0) {
          kfac *= j;
          term *= cplx(0.0, -a * t) / double(j);
        }
        partial += term;
      }
      const cplx want =
          -kfac / std::pow(t, k) * (1.0 - std::exp(cplx(0.0, a * t)) * partial);
      CHECK(std::abs(lam(t) - want) < 1e-9 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("cascade branch agreement near the switch radius") {
  const double a = -0.9;
  ComplexJet h = [a](double t, int q) -> cplx {
    return std::pow(cplx(0.0, a), q) * std::exp(cplx(0.0, a * t));
  };
  for (int k = 1; k <= 3; ++k) {
    LambdaEvaluator lam(h, k);
    for (double t : {0.45, 0.5, 0.55, -0.48}) {
      CHECK(std::abs(lam.finite_sum_form(t) - lam.integral_form(t)) < 1e-9);
    }
  }
}

TEST_CASE("cascade far-field is a pure power") {
  // Once h and its derivatives vanish, (L^k h)(t) = -k! h(0) / t^k with
  // h(0) = 1 normalization absorbed; check against a compactly supported h.
  const double R = 2.0;
  ComplexJet h = [R](double t, int q) -> cplx {
    if (std::abs(t) >= R) return 0.0;
    const double u = t / R;
    const double w = 1.0 - u * u;
    const double w2 = w * w;
    switch (q) {
      case 0: return w2 * w2;
      case 1: return -8.0 * u * w2 * w / R;
      case 2: return (48.0 * u * u * w2 - 8.0 * w2 * w) / (R * R);
      default:
        return (144.0 * u * w2 - 192.0 * u * u * u * w) / (R * R * R);
    }
  };
  for (int k = 1; k <= 3; ++k) {
    LambdaEvaluator lam(h, k);
    double kfac = 1.0;
    for (int j = 2; j <= k; ++j) kfac *= j;
    for (double t : {2.5, 7.0, -4.0}) {
      CHECK(std::abs(lam(t) - cplx(-kfac / std::pow(t, k))) < 1e-12);
    }
  }
}

TEST_CASE("oscillatory average function") {
  CHECK(i_function(0.0) == cplx(0.0));
  const cplx v = i_function(0.3);
  CHECK(std::abs(v - cplx(-0.070142227189517, -0.12123822947397)) < 1e-11);
  CHECK(std::abs(std::abs(i_function(10.0)) - 0.93993971511759) < 1e-9);
  for (double u : {0.05, 0.7, 3.0, 200.0}) {
    CHECK(std::abs(i_function(-u) - std::conj(i_function(u))) < 1e-10);
    const double m = std::abs(i_function(u));
    CHECK(m <= std::min(1.0, u / 2.0) + 1e-12);
    CHECK(i_function_upper(u) >= m - 1e-12);
    CHECK(i_function_upper(u) <= std::min(1.0, u / 2.0) + 1e-9);
  }
}

TEST_CASE("averaged majorant") {
  PVQuadratureConfig cfg;
  cfg.outer_cutoff = 1.0;
  auto H = [](double t) { return cplx(std::abs(t) <= 1.0 ? 1.0 : 0.0, 0.0); };
  CHECK(averaged_l_bound(H, 0.0, cfg) == 0.0);
  // For small x, |I(tx)| ~ |tx|/2 so the average is ~ x/(2 pi) int_{-1}^1
  // dt / 2 * ... = x / (2 pi); the exact constant is below x/pi and above
  // 0.95 x/pi fails, so pin the measured band against the crude majorant.
  for (double x : {0.02, 0.1}) {
    const double v = averaged_l_bound(H, x, cfg);
    CHECK(v > 0.0);
    CHECK(v < x / M_PI * 1.0001);
    CHECK(v > 0.95 * x / M_PI * 0.5);
  }
  // never exceeds the unaveraged majorant (1/2pi) int |H| / |t| with the
  // |I| < 1 cap made explicit at larger x
  const double big = averaged_l_bound(H, 50.0, cfg);
  CHECK(big > 0.0);
  PVQuadratureConfig inf_cfg;
  inf_cfg.outer_cutoff = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(averaged_l_bound(H, 1.0, inf_cfg), DomainError);
}

TEST_CASE("tail bracket for the normal law") {
  CharFnEvaluator f(DistributionSpec::normal(0.0, 1.0));
  auto m02 = m02_filter(m02_kappa_star());
  for (int k : {1, 2, 3}) {
    for (double x : {0.5, 1.5, 2.5}) {
      auto r = tail_bound(f, *m02, k, 14.0, x);
      REQUIRE(r.exact.has_value());
      const double want = std::pow(x, k) * specfun::normal_tail(x);
      CHECK(*r.exact == doctest::Approx(want).epsilon(1e-12));
      CHECK(r.lower <= want + r.quad_error + 1e-9);
      CHECK(r.upper >= want - r.quad_error - 1e-9);
      // The x^k weight inflates the bracket with k; ~0.3 at k = 3, T = 14.
      CHECK(r.upper - r.lower < 0.4);
    }
  }
}

TEST_CASE("tail bracket for a standardized two-point law") {
  // Centered Bernoulli(0.08), standardized. At x = 2 the upper atom
  // (1-p)/sigma = 3.39 is the only support point past x, so
  // x^3 P(X >= x) = 8 p = 0.64.
  const double p = 0.08;
  const double s = std::sqrt(p * (1.0 - p));
  auto spec = DistributionSpec::two_point(-p / s, (1.0 - p) / s, p);
  CharFnEvaluator f(spec);
  auto m02 = m02_filter(m02_kappa_star());
  auto r = tail_bound(f, *m02, 3, 18.0, 2.0);
  REQUIRE(r.exact.has_value());
  CHECK(*r.exact == doctest::Approx(0.64).epsilon(1e-12));
  CHECK(r.lower <= 0.64 + r.quad_error);
  CHECK(r.upper >= 0.64 - r.quad_error);
  CHECK(r.upper - r.lower < 0.01);
}

TEST_CASE("tail bracket at a point mass") {
  CharFnEvaluator f(DistributionSpec::point_mass(0.0));
  auto m02 = m02_filter(m02_kappa_star());
  auto r = tail_bound(f, *m02, 1, 10.0, 1.0);
  REQUIRE(r.exact.has_value());
  CHECK(*r.exact == 0.0);
  CHECK(r.lower <= r.quad_error + 1e-9);
  CHECK(r.upper >= -r.quad_error - 1e-9);
}

TEST_CASE("tail bound input validation") {
  CharFnEvaluator f(DistributionSpec::normal(0.0, 1.0));
  auto m02 = m02_filter(m02_kappa_star());
  auto pr = prawitz_filter();
  CHECK_THROWS_AS(tail_bound(f, *m02, 0, 10.0, 1.0), ValidationError);
  CHECK_THROWS_AS(tail_bound(f, *m02, 4, 10.0, 1.0), CapabilityError);
  CHECK_THROWS_AS(tail_bound(f, *pr, 1, 10.0, 1.0), SmoothnessError);
  CHECK_THROWS_AS(tail_bound(f, *m02, 2, 10.0, -0.5), DomainError);
}

TEST_CASE("jump-corrected expansion agrees with the direct operator") {
  // Smooth compactly supported h: expansion at every k must reproduce G(h).
  const double R = 3.0;
  ComplexJet h = [R](double t, int q) -> cplx {
    if (std::abs(t) >= R) return 0.0;
    const double u = t / R;
    const double w = 1.0 - u * u;
    const double w2 = w * w;
    double base;
    switch (q) {
      case 0: base = w2 * w2; break;
      case 1: base = -8.0 * u * w2 * w / R; break;
      case 2: base = (48.0 * u * u * w2 - 8.0 * w2 * w) / (R * R); break;
      default:
        base = (-192.0 * u * u * u * w + 144.0 * u * w2) / (R * R * R);
    }
    return cplx(base, 0.0);
  };
  PVIntegrand direct;
  direct.h = [&h](double t) { return h(t, 0); };
  direct.support_radius = R;
  for (double x : {0.6, 1.8, 4.0}) {
    auto g0 = g_operator(direct, x);
    for (int k : {1, 2, 3}) {
      auto rec = lambda_expansion_with_jumps(
          h, k, x, std::vector<cplx>(k, cplx(0.0)), R);
      CHECK(std::abs(rec - g0.value) < 1e-8);
    }
  }
}

TEST_CASE("expansion carries first-order kinks through the jump terms") {
  // The classical multiplier times a smooth cf is only piecewise C^1, but its
  // one-sided jets and zero jump list stay valid at k = 1.
  auto spec = DistributionSpec::two_point(-1.0, 1.0, 0.5);
  CharFnEvaluator f(spec);
  auto pf = prawitz_filter();
  const double T = 7.0;
  ComplexJet jet = [&](double t, int q) -> cplx {
    cplx acc = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= q; ++j) {
      acc += binom * std::pow(1.0 / T, j) *
             cplx(pf->m1(t / T, j), pf->m2(t / T, j)) * f.derivative(t, q - j);
      binom = binom * (q - j) / (j + 1);
    }
    return acc;
  };
  PVIntegrand direct;
  direct.h = [&jet](double t) { return jet(t, 0); };
  direct.support_radius = T;
  direct.breakpoints = {0.25 * T, 0.5 * T};
  for (double x : {0.7, 1.9}) {
    auto g0 = g_operator(direct, x);
    auto rec = lambda_expansion_with_jumps(jet, 1, x, {cplx(0.0)}, T);
    CHECK(std::abs(rec - g0.value) < 1e-6);
  }
}

TEST_CASE("expansion input validation") {
  ComplexJet h = [](double, int) { return cplx(0.0); };
  CHECK_THROWS_AS(lambda_expansion_with_jumps(h, 1, 0.0, {cplx(0.0)}, 1.0),
                  DomainError);
  CHECK_THROWS_AS(lambda_expansion_with_jumps(h, 2, 1.0, {cplx(0.0)}, 1.0),
                  ValidationError);
  CHECK_THROWS_AS(
      lambda_expansion_with_jumps(
          h, 1, 1.0, {cplx(0.0)},
          std::numeric_limits<double>::infinity()),
      ValidationError);
}
