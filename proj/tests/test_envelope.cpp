#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "cfbound/charfn.hpp"
#include "cfbound/envelope.hpp"
#include "cfbound/errors.hpp"
#include "cfbound/rng.hpp"

using namespace cfb;
using cplx = std::complex<double>;

namespace {

// Draw a mean-zero unit-variance two-point law with E|X|^3 = rho(p):
// atoms -sqrt(p/q), sqrt(q/p) with q = 1 - p.
struct TwoPoint {
  double xm, xp, p;  // P(xp) = p
  double rho;
};

TwoPoint random_two_point(SplitMix64& rng) {
  const double p = 0.05 + 0.9 * rng.uniform();
  const double q = 1.0 - p;
  TwoPoint t;
  t.p = p;
  t.xm = -std::sqrt(p / q);
  t.xp = std::sqrt(q / p);
  t.rho = (p * p + q * q) / std::sqrt(p * q);
  return t;
}

cplx two_point_cf(const TwoPoint& l, double t) {
  return (1.0 - l.p) * std::exp(cplx(0.0, t * l.xm)) +
         l.p * std::exp(cplx(0.0, t * l.xp));
}

void check_feasible(const EnvelopeSolution& s, double rho) {
  double mass = 0.0, mean = 0.0, var = 0.0, third = 0.0;
  for (const auto& a : s.support) {
    CHECK(a.p >= -1e-12);
    mass += a.p;
    mean += a.p * a.x;
    var += a.p * a.x * a.x;
    third += a.p * std::abs(a.x * a.x * a.x);
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(mean == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(var == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(third == doctest::Approx(rho).epsilon(1e-8));
  for (double r : s.constraint_residuals) CHECK(std::abs(r) < 1e-8);
}

}  // namespace

TEST_CASE("degenerate arguments") {
  CHECK_THROWS_AS(cf_envelope(1.0, 0.9), DomainError);
  CHECK_THROWS_AS(cf_envelope(std::numeric_limits<double>::quiet_NaN(), 1.5),
                  ValidationError);
  CHECK(cf_envelope(0.0, 1.7).value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("minimal third moment forces the symmetric two-point law") {
  // rho = 1 admits only the Rademacher law, so the envelope is |cos t|.
  for (double t : {0.5, 1.0, 2.0}) {
    auto s = cf_envelope(t, 1.0);
    CHECK(s.value == doctest::Approx(std::abs(std::cos(t))).epsilon(1e-6));
    check_feasible(s, 1.0);
  }
}

TEST_CASE("envelope dominates sampled laws") {
  SplitMix64 rng(0x7a11ab1e5ULL);
  for (int trial = 0; trial < 25; ++trial) {
    auto l = random_two_point(rng);
    const double t = 0.2 + 3.0 * rng.uniform();
    auto s = cf_envelope(t, l.rho);
    CHECK(s.value >= std::abs(two_point_cf(l, t)) - 1e-7);
    check_feasible(s, l.rho);
  }
}

TEST_CASE("envelope grows with the third-moment budget") {
  const double t = 1.3;
  double prev = -1.0;
  for (double rho : {1.0, 1.5, 2.5, 4.0}) {
    auto s = cf_envelope(t, rho);
    CHECK(s.value >= prev - 1e-9);
    prev = s.value;
  }
}

TEST_CASE("pinned envelope values") {
  auto a = cf_envelope(1.0, 1.0);
  CHECK(a.value == doctest::Approx(std::abs(std::cos(1.0))).epsilon(1e-9));
  auto b = cf_envelope(2.0, 1.5);
  CHECK(b.value == doctest::Approx(0.7963463292).epsilon(1e-6));
}

TEST_CASE("gap envelope dominates the centered difference") {
  SplitMix64 rng(0xfeedbead5ULL);
  for (int trial = 0; trial < 12; ++trial) {
    auto l = random_two_point(rng);
    const double t = 0.3 + 2.5 * rng.uniform();
    auto s = cf_normal_gap_envelope(t, l.rho);
    const double gap =
        std::abs(two_point_cf(l, t) - std::exp(-0.5 * t * t));
    CHECK(s.value >= gap - 1e-7);
    check_feasible(s, l.rho);
  }
  // relation to the plain envelope: gap value >= envelope - e^{-t^2/2} when
  // the modulus maximizer also maximizes the difference direction
  const double t = 1.1, rho = 2.0;
  auto gapv = cf_normal_gap_envelope(t, rho);
  auto absv = cf_envelope(t, rho);
  CHECK(gapv.value >= absv.value - std::exp(-0.5 * t * t) - 1e-6);
}

TEST_CASE("solution serialization") {
  auto s = cf_envelope(1.5, 2.0);
  auto j = s.to_json();
  CHECK(j.contains("t"));
  CHECK(j.contains("rho"));
  CHECK(j.contains("value"));
  CHECK(j.contains("theta"));
  CHECK(j.contains("support"));
  CHECK(j.contains("constraint_residuals"));
  CHECK(j["support"].is_array());
  CHECK(j["t"].get<double>() == doctest::Approx(1.5));
}

TEST_CASE("small search budgets still return certified laws") {
  auto s = cf_envelope(1.7, 2.2, 300);
  check_feasible(s, 2.2);
  auto full = cf_envelope(1.7, 2.2);
  CHECK(full.value >= s.value - 1e-9);
}
