#include "cfbound/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <mutex>

#include "cfbound/errors.hpp"
#include "cfbound/quadrature.hpp"

namespace cfb::specfun {
namespace {

constexpr double kPi = 3.141592653589793238462643383279503;
constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343819;
const std::complex<double> kI{0.0, 1.0};

void require_finite(double t, const char* who) {
  if (!std::isfinite(t)) throw DomainError(std::string(who) + ": non-finite argument");
}

}  // namespace

double normal_pdf(double t) {
  require_finite(t, "normal_pdf");
  return kInvSqrt2Pi * std::exp(-0.5 * t * t);
}

double normal_tail(double t) {
  require_finite(t, "normal_tail");
  return 0.5 * std::erfc(t * 0.7071067811865475244008443621048490);
}

std::pair<double, double> normal_pdf_tail(double t) {
  return {normal_pdf(t), normal_tail(t)};
}

double normal_cubic_moment(double t, MomentSign sign) {
  require_finite(t, "normal_cubic_moment");
  if (sign == MomentSign::plus) {
    // E (Z + t)_+^3 = E (Z - (-t))_+^3 distributionally (Z symmetric), so the
    // minus path at -t is exact and free of the t^3 + 3t cancellation.
    return normal_cubic_moment(-t, MomentSign::minus);
  }
  if (t > 12.0) {
    // phi(t) * sum_m (-1)^m (3 + 2m)! / (2^m m!) t^{-4 - 2m}
    const double inv2 = 1.0 / (t * t);
    double coeff = 6.0;  // (3)! at m = 0
    double power = inv2 * inv2;
    double sum = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int m = 0; m < 40; ++m) {
      const double term = coeff * power;
      if (std::abs(term) > prev) break;  // asymptotic series turned the corner
      sum += (m % 2 == 0 ? term : -term);
      prev = std::abs(term);
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
      coeff *= (4.0 + 2.0 * m) * (5.0 + 2.0 * m) / (2.0 * (m + 1.0));
      power *= inv2;
    }
    return normal_pdf(t) * sum;
  }
  return (t * t + 2.0) * normal_pdf(t) - t * (t * t + 3.0) * normal_tail(t);
}

NormalMoments normal_cubic_moments(double t) {
  const double minus3 = normal_cubic_moment(t, MomentSign::minus);
  return {t, t * t * t + 3.0 * t + minus3, minus3};
}

double digamma_family(double x, int order) {
  require_finite(x, "digamma_family");
  if (order < 0 || order > 2)
    throw CapabilityError("digamma_family: order must be 0, 1 or 2");
  if (x <= 0.0 && x == std::rint(x))
    throw PoleError("digamma_family: pole at nonpositive integer");

  // Shift x upward until the asymptotic series applies.
  double shift0 = 0.0, shift1 = 0.0, shift2 = 0.0;
  while (x < 8.0) {
    shift0 -= 1.0 / x;
    shift1 += 1.0 / (x * x);
    shift2 -= 2.0 / (x * x * x);
    x += 1.0;
  }

  // Bernoulli numbers B_2 .. B_16.
  static constexpr std::array<double, 8> b2n = {
      1.0 / 6.0,   -1.0 / 30.0,     1.0 / 42.0, -1.0 / 30.0,
      5.0 / 66.0, -691.0 / 2730.0,  7.0 / 6.0,  -3617.0 / 510.0};

  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  if (order == 0) {
    // psi(x) ~ ln x - 1/(2x) - sum B_2n / (2n x^{2n})
    double sum = std::log(x) - 0.5 * inv;
    double p = inv2;
    for (int n = 1; n <= 8; ++n) {
      sum -= b2n[n - 1] / (2.0 * n) * p;
      p *= inv2;
    }
    return sum + shift0;
  }
  if (order == 1) {
    // psi'(x) ~ 1/x + 1/(2x^2) + sum B_2n x^{-2n-1}
    double sum = inv + 0.5 * inv2;
    double p = inv2 * inv;
    for (int n = 1; n <= 8; ++n) {
      sum += b2n[n - 1] * p;
      p *= inv2;
    }
    return sum + shift1;
  }
  // psi''(x) ~ -1/x^2 - 1/x^3 - sum (2n+1) B_2n x^{-2n-2}
  double sum = -inv2 - inv2 * inv;
  double p = inv2 * inv2;
  for (int n = 1; n <= 8; ++n) {
    sum -= (2.0 * n + 1.0) * b2n[n - 1] * p;
    p *= inv2;
  }
  return sum + shift2;
}

namespace {

// Asymptotic expansion of E_m at large argument:
//   E_m(u) = -i e^{-iu} sum_q i^q (m)_q u^{-m-q},  (m)_q rising factorial.
// Valid once u comfortably exceeds m; terms are added until they stop
// shrinking or fall below 1e-18 of the leading one.
std::complex<double> exp_osc_tail_asymptotic(double u, int m) {
  const double phase = -u;
  const std::complex<double> front =
      -kI * std::complex<double>(std::cos(phase), std::sin(phase));
  std::complex<double> term = std::pow(u, -m);
  std::complex<double> sum = term;
  const double first = std::abs(term);
  double prev = first;
  double pochhammer = m;
  for (int q = 1; q < 60; ++q) {
    term *= kI * pochhammer / u;
    pochhammer += 1.0;
    const double mag = std::abs(term);
    if (mag > prev) break;
    sum += term;
    prev = mag;
    if (mag < 1e-18 * first) break;
  }
  return front * sum;
}

std::complex<double> exp_osc_tail_quad(double u, int m) {
  // Direct oscillatory quadrature over [u, 60], then the asymptotic closure.
  QuadOptions opt;
  opt.abs_tol = 1e-14;
  opt.rel_tol = 1e-14;
  opt.max_panel_width = kPi / 2.0;
  const QuadResult mid = integrate(
      [m](double z) {
        return std::complex<double>(std::cos(z), -std::sin(z)) *
               std::pow(z, -m);
      },
      u, 60.0, opt);
  return mid.value + exp_osc_tail_asymptotic(60.0, m);
}

constexpr int kMaxTailOrder = 6;

const std::complex<double>& exp_osc_tail_at_one(int m) {
  static std::array<std::complex<double>, kMaxTailOrder + 1> cache;
  static std::once_flag once;
  std::call_once(once, [] {
    for (int k = 1; k <= kMaxTailOrder; ++k) cache[k] = exp_osc_tail_quad(1.0, k);
  });
  return cache[m];
}

}  // namespace

std::complex<double> exp_osc_tail(double u, int m) {
  if (!(u > 0.0) || !std::isfinite(u))
    throw DomainError("exp_osc_tail: argument must be positive and finite");
  if (m < 1 || m > kMaxTailOrder)
    throw CapabilityError("exp_osc_tail: order out of supported range");
  if (u >= 60.0) return exp_osc_tail_asymptotic(u, m);
  if (u >= 1.0) return exp_osc_tail_quad(u, m);
  // E_m(u) = E_m(1) + int_u^1 e^{-iz} z^{-m} dz; expand e^{-iz} and integrate
  // the powers exactly. kappa_j = int_u^1 z^{j-m} dz.
  std::complex<double> sum = exp_osc_tail_at_one(m);
  std::complex<double> c = 1.0;  // (-i)^j / j!
  for (int j = 0; j <= 44; ++j) {
    double kappa;
    if (j == m - 1) {
      kappa = -std::log(u);
    } else {
      const double e = static_cast<double>(j - m + 1);
      kappa = (1.0 - std::pow(u, e)) / e;
    }
    sum += c * kappa;
    c *= -kI / static_cast<double>(j + 1);
  }
  return sum;
}

double sine_integral(double x) {
  if (x == 0.0) return 0.0;
  if (x < 0.0) return -sine_integral(-x);
  return kPi / 2.0 + exp_osc_tail(x, 1).imag();
}

}  // namespace cfb::specfun
