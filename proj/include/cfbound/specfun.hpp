#pragma once

#include <complex>
#include <utility>

namespace cfb::specfun {

// Standard normal density and upper tail. The tail goes through erfc so it
// stays accurate far out (t = 38 still carries ~2 significant digits in
// double range; relative accuracy holds to ~1e-15 before underflow).
double normal_pdf(double t);
double normal_tail(double t);
std::pair<double, double> normal_pdf_tail(double t);

struct NormalMoments {
  double t;
  double plus3;   // E (Z + t)_+^3
  double minus3;  // E (Z - t)_+^3
};

enum class MomentSign { plus, minus };

// Truncated cubic moments of Z ~ N(0,1):
//   E (Z - t)_+^3 = (t^2 + 2) phi(t) - t (t^2 + 3) NormalTail(t),
//   E (Z + t)_+^3 = t^3 + 3t + E (Z - t)_+^3.
// The closed form cancels catastrophically for large t, so t > 12 switches to
// the asymptotic series phi(t) (6/t^4)(1 - 10/t^2 + 105/t^4 - ...). The plus
// variant is evaluated as minus(-t), which the identity makes exact.
double normal_cubic_moment(double t, MomentSign sign);
NormalMoments normal_cubic_moments(double t);

// psi, psi', psi'' (order 0, 1, 2). Recurrence shift to x >= 8, then the
// Bernoulli asymptotic series with 8 terms; relative accuracy ~1e-12 on
// [0.01, 100] and well beyond. Exact nonpositive integers raise PoleError.
double digamma_family(double x, int order);

// E_m(u) = int_u^inf e^{-iz} z^{-m} dz for u > 0, m in {1,...,6}.
// Three regimes: asymptotic series for u >= 60; Gauss-Kronrod over [u, 60]
// with pi/2 panels plus the asymptotic closure for 1 <= u < 60; and for
// u < 1 the cached E_m(1) plus a Taylor series of the integral over [u, 1]
// whose antiderivatives are explicit powers and one logarithm.
std::complex<double> exp_osc_tail(double u, int m);

// Sine integral Si(x) = int_0^x sin z / z dz, via Si(x) = pi/2 + Im E_1(x).
double sine_integral(double x);

}  // namespace cfb::specfun
