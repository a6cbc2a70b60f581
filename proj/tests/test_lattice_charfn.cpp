#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "cfbound/charfn.hpp"
#include "cfbound/errors.hpp"
#include "cfbound/lattice.hpp"

using namespace cfb;
using cplx = std::complex<double>;

TEST_CASE("construction validates and trims") {
  CHECK_THROWS_AS(LatticePMF(0.0, 0.0, {1.0}), ValidationError);
  CHECK_THROWS_AS(LatticePMF(0.0, 1.0, {0.5, -0.1, 0.6}), ValidationError);
  CHECK_THROWS_AS(LatticePMF(0.0, 1.0, {0.5, 0.4}), ValidationError);
  LatticePMF p(0.0, 1.0, {0.0, 0.25, 0.75, 0.0, 0.0});
  CHECK(p.size() == 2);
  CHECK(p.atom(0) == 1.0);
  CHECK(p.weight(1) == 0.75);
}

TEST_CASE("tail queries and atom snapping") {
  LatticePMF p(-1.0, 1.0, {0.25, 0.5, 0.25});
  CHECK(p.sf_ge_index(0) == 1.0);
  CHECK(p.sf_gt_index(0) == 0.75);
  CHECK(p.sf_ge_index(2) == 0.25);
  CHECK(p.sf_gt_index(2) == 0.0);
  CHECK(p.cdf_lt(0.0) == 0.25);
  CHECK(p.cdf_le(0.0) == 0.75);
  CHECK(p.sf_gt(0.0) == 0.25);
  CHECK(p.sf_ge(0.0) == 0.75);
  // a query within 1e-12 * step of an atom snaps onto it
  CHECK(p.cdf_le(1.0 - 1e-13) == 1.0);
  CHECK(p.cdf_le(1.0 - 1e-3) == 0.75);
  CHECK(p.sf_ge(-1.0 + 1e-13) == 1.0);
}

TEST_CASE("moments") {
  LatticePMF p(-1.0, 2.0, {0.5, 0.5});  // Rademacher
  CHECK(p.mean() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(p.variance() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.abs_moment(3) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.moment(3) == doctest::Approx(0.0).epsilon(1e-15));
  LatticePMF b(0.0, 1.0, {0.7, 0.3});  // Bernoulli(0.3)
  CHECK(b.mean() == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(b.variance() == doctest::Approx(0.21).epsilon(1e-14));
  CHECK(b.moment(2) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(b.abs_moment(0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("standardization maps atoms affinely") {
  LatticePMF b(0.0, 1.0, {0.7, 0.3});
  const double sd = std::sqrt(0.21);
  auto s = b.standardized(b.mean(), sd);
  CHECK(s.mean() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(s.variance() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(s.atom(0) == doctest::Approx(-0.3 / sd).epsilon(1e-14));
  CHECK(s.atom(1) == doctest::Approx(0.7 / sd).epsilon(1e-14));
}

TEST_CASE("iid convolution") {
  LatticePMF r(-1.0, 2.0, {0.5, 0.5});
  auto r2 = convolve_iid(r, 2);
  REQUIRE(r2.size() == 3);
  CHECK(r2.atom(0) == -2.0);
  CHECK(r2.weight(0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(r2.weight(1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r2.weight(2) == doctest::Approx(0.25).epsilon(1e-15));

  auto r1 = convolve_iid(r, 1);
  CHECK(r1.size() == r.size());
  CHECK(r1.atom(0) == r.atom(0));
  CHECK(r1.weight(0) == r.weight(0));

  // Bernoulli(0.3)^*20 is Binomial(20, 0.3); compare term by term against
  // binomial weights built by the Pascal recurrence.
  LatticePMF b(0.0, 1.0, {0.7, 0.3});
  auto b20 = convolve_iid(b, 20);
  REQUIRE(b20.size() == 21);
  std::vector<double> coef(21, 0.0);
  coef[0] = 1.0;
  for (int row = 1; row <= 20; ++row)
    for (int j = row; j >= 1; --j) coef[j] += coef[j - 1];
  for (int j = 0; j <= 20; ++j) {
    const double want = coef[j] * std::pow(0.3, j) * std::pow(0.7, 20 - j);
    CHECK(b20.weight(j) == doctest::Approx(want).epsilon(1e-13));
  }

  CHECK_THROWS_AS(convolve_iid(b, 100000, 1000), ResourceError);
}

TEST_CASE("spec JSON round trips") {
  auto specs = {
      DistributionSpec::point_mass(1.5),
      DistributionSpec::normal(0.25, 2.0),
      DistributionSpec::two_point(-1.0, 1.0, 0.5),
      DistributionSpec::lattice(LatticePMF(-0.5, 0.5, {0.2, 0.3, 0.5})),
      DistributionSpec::standardized_iid_sum(
          DistributionSpec::two_point(-0.3, 0.7, 0.3), 4),
  };
  for (const auto& s : specs) {
    auto round = DistributionSpec::parse(s.to_json().dump());
    CHECK(round.kind() == s.kind());
    CHECK(round.mean() == doctest::Approx(s.mean()).epsilon(1e-14));
    CHECK(round.variance() == doctest::Approx(s.variance()).epsilon(1e-14));
  }
}

TEST_CASE("spec parse diagnostics") {
  CHECK_THROWS_AS(DistributionSpec::parse("{"), ValidationError);
  CHECK_THROWS_AS(DistributionSpec::parse(R"({"kind":"mystery"})"),
                  ValidationError);
  CHECK_THROWS_AS(DistributionSpec::parse(R"({"kind":"normal","mean":0})"),
                  ValidationError);
  try {
    DistributionSpec::parse(R"({"kind":"normal","mean":0,"sd":-1})");
    CHECK(false);
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("sd") != std::string::npos);
  }
  CHECK_THROWS_AS(
      DistributionSpec::parse(R"({"kind":"two_point","x_minus":1,
                                  "x_plus":1,"p_plus":0.5})"),
      ValidationError);
}

TEST_CASE("iid sum spec requires a centered base") {
  CHECK_THROWS_AS(DistributionSpec::standardized_iid_sum(
                      DistributionSpec::two_point(0.0, 1.0, 0.3), 2),
                  ValidationError);
  CHECK_THROWS_AS(DistributionSpec::standardized_iid_sum(
                      DistributionSpec::point_mass(0.0), 2),
                  ValidationError);
}

TEST_CASE("characteristic function closed forms") {
  CharFnEvaluator fn(DistributionSpec::normal(0.0, 1.0));
  for (double t : {0.0, 0.5, 2.0}) {
    CHECK(std::abs(fn(t) - std::exp(-0.5 * t * t)) < 1e-14);
    // f'(t) = -t e^{-t^2/2}, f''(t) = (t^2-1) e^{-t^2/2}
    CHECK(std::abs(fn.derivative(t, 1) - cplx(-t * std::exp(-0.5 * t * t))) <
          1e-14);
    CHECK(std::abs(fn.derivative(t, 2) -
                   cplx((t * t - 1.0) * std::exp(-0.5 * t * t))) < 1e-13);
  }
  CHECK_THROWS_AS(fn.derivative(1.0, 4), CapabilityError);

  CharFnEvaluator tp(DistributionSpec::two_point(-1.0, 2.0, 0.4));
  for (double t : {0.3, 1.7}) {
    const cplx want = 0.6 * std::exp(cplx(0.0, -t)) +
                      0.4 * std::exp(cplx(0.0, 2.0 * t));
    CHECK(std::abs(tp(t) - want) < 1e-14);
    const cplx want1 = 0.6 * cplx(0.0, -1.0) * std::exp(cplx(0.0, -t)) +
                       0.4 * cplx(0.0, 2.0) * std::exp(cplx(0.0, 2.0 * t));
    CHECK(std::abs(tp.derivative(t, 1) - want1) < 1e-14);
  }
}

TEST_CASE("standardized sum cf equals scaled base power") {
  auto base = DistributionSpec::two_point(-0.3, 0.7, 0.3);
  const int n = 6;
  auto sum = DistributionSpec::standardized_iid_sum(base, n);
  CharFnEvaluator fs(sum);
  CharFnEvaluator fb(base);
  const double B = std::sqrt(base.variance() * n);
  for (double t : {0.2, 1.1, 4.0}) {
    const cplx want = std::pow(fb(t / B), n);
    CHECK(std::abs(fs(t) - want) < 1e-13);
  }
  // and against the exact convolved lattice cf
  auto lat = sum.exact_lattice();
  for (double t : {0.7, 2.3}) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < lat.size(); ++i)
      acc += lat.weight(i) * std::exp(cplx(0.0, t * lat.atom(i)));
    CHECK(std::abs(fs(t) - acc) < 1e-12);
  }
  CHECK(fs.standardized());
  CHECK(fs.absolute_moment(2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cf difference requires standardized spec") {
  CharFnEvaluator fn(DistributionSpec::normal(0.0, 1.0));
  CHECK(std::abs(fn.cf_difference(0.8)) < 1e-15);
  CharFnEvaluator off(DistributionSpec::normal(0.5, 1.0));
  CHECK_THROWS_AS(off.cf_difference(0.8), DomainError);
}

TEST_CASE("exact lattice availability") {
  CHECK(DistributionSpec::point_mass(2.0).has_exact_lattice());
  CHECK_FALSE(DistributionSpec::normal(0.0, 1.0).has_exact_lattice());
  CHECK_THROWS_AS(DistributionSpec::normal(0.0, 1.0).exact_lattice(),
                  CapabilityError);
  auto pm = DistributionSpec::point_mass(2.0).exact_lattice();
  CHECK(pm.size() == 1);
  CHECK(pm.atom(0) == 2.0);
}
