#pragma once

namespace cfb {

// Parameters of the truncated-sum large-deviation pipeline. Validity:
// z0, c > 0; tau < 1 with tau c^2 >= 2; alpha in (0, 1); 0 < a <= a_max;
// a z0^2 < alpha (so alpha1 = sqrt(1 - a z0^2 / alpha) is real).
struct NagaevParams {
  double z0 = 2.0;
  double c = 2.0;
  double tau = 0.5;
  double alpha = 0.5;
  double a_max = 0.05;
  double a = 0.01;
};

// sum_j Q_j lambda^j e^{-lambda} / j! with lambda = a / alpha^3,
// Q_j = (alpha1/z)^3 E(Z + u_j)_+^3, u_j = alpha (j - tau/alpha - lambda) z.
// The truncation remainder is certified through the envelope
// E(Z+u)_+^3 <= (max(u,0) + 1)^3, whose term ratios turn geometric, and the
// certified remainder is added to the sum so the result stays an upper
// bound. series_terms caps the series (0 = automatic).
double poisson_mixture_bound(const NagaevParams& params, double z,
                             int series_terms = 0);

// C0 = e^{z0^2/c^2} E(Z - tau z0)_+^3. Requires tau c^2 >= 2 whenever
// z0 > 0 (the exponential-tilt monotonicity window); z0 = 0 reduces to the
// plain positive cubic moment and needs no assumption.
double c0_constant(double z0, double c, double tau);

// C1(a) = (alpha1/(alpha z0))^3 [ sum_{j>=1} (u_j0^3 + 3 u_j0) lambda^{j-1}/j!
//   + E(Z - u_10)_+^3 + E(Z - u_20)_+^3 (lambda/2) e^lambda ] e^{-lambda},
// u_j0 = alpha (j - tau/alpha - lambda) z0; the series is summed in closed
// form through Poisson factorial moments, remainder-free.
double c1_constant(const NagaevParams& params);

// lim_{a -> 0+} C1(a) = (alpha z0)^{-3} E(Z + (alpha - tau) z0)_+^3.
double c1_zero_plus(double z0, double tau, double alpha);

// [(C0 + C1(0+)) / (1 - tau)^3] rho / (z^3 sqrt(n)): the final tail bound on
// the truncated standardized sum at z >= z0.
double ld_tail_bound(const NagaevParams& params, double z, double rho, int n);

}  // namespace cfb
