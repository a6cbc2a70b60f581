#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "cfbound/errors.hpp"
#include "cfbound/quadrature.hpp"

using namespace cfb;
using cplx = std::complex<double>;

TEST_CASE("polynomial integral is exact") {
  auto r = integrate_real([](double t) { return t * t; }, 0.0, 1.0, {});
  CHECK(r.value.real() == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(r.error < 1e-12);
}

TEST_CASE("complex oscillatory integral") {
  // int_0^pi e^{it} dt = (e^{i pi} - 1)/i = 2i
  auto r = integrate([](double t) { return std::exp(cplx(0.0, t)); }, 0.0,
                     M_PI, {});
  CHECK(std::abs(r.value - cplx(0.0, 2.0)) < 1e-12);
}

TEST_CASE("breakpoints resolve interior kinks") {
  auto f = [](double t) { return std::abs(t - 0.3); };
  QuadOptions opt;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-13;
  const std::vector<double> kink = {0.3};
  auto r = integrate_real(f, 0.0, 1.0, opt, kink);
  // int = 0.3^2/2 + 0.7^2/2
  CHECK(r.value.real() == doctest::Approx(0.29).epsilon(1e-13));
}

TEST_CASE("split exhaustion reports best estimate") {
  QuadOptions opt;
  opt.abs_tol = 1e-300;
  opt.rel_tol = 1e-300;
  opt.max_splits = 3;
  bool threw = false;
  try {
    integrate([](double t) { return std::sqrt(std::abs(t)); }, -1.0, 1.0, opt);
  } catch (const ConvergenceError& e) {
    threw = true;
    CHECK(std::abs(e.best_estimate.real() - 4.0 / 3.0) < 1e-2);
    CHECK(e.error_estimate > 0.0);
  }
  CHECK(threw);
}

TEST_CASE("semi-infinite exponential tail") {
  auto r = integrate_semi_infinite(
      [](double t) { return cplx(std::exp(-t), 0.0); }, 0.0, 4.0, {});
  CHECK(r.value.real() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("semi-infinite divergence is detected") {
  CHECK_THROWS_AS(integrate_semi_infinite(
                      [](double t) { return cplx(1.0 / (1.0 + t), 0.0); }, 0.0,
                      2.0, {}, 24),
                  ConvergenceError);
}

TEST_CASE("semi-infinite cut must lie beyond lower limit") {
  CHECK_THROWS_AS(integrate_semi_infinite(
                      [](double t) { return cplx(std::exp(-t), 0.0); }, 1.0,
                      1.0, {}),
                  DomainError);
}
