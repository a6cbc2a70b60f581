#include "cfbound/nagaev.hpp"

#include <cmath>

#include "cfbound/errors.hpp"
#include "cfbound/specfun.hpp"

namespace cfb {

namespace {

double cube(double v) { return v * v * v; }

void validate_params(const NagaevParams& p) {
  if (!(p.z0 > 0.0) || !std::isfinite(p.z0))
    throw DomainError("nagaev: z0 must be positive and finite");
  if (!(p.c > 0.0) || !std::isfinite(p.c))
    throw DomainError("nagaev: c must be positive and finite");
  if (!(p.tau < 1.0) || !std::isfinite(p.tau))
    throw DomainError("nagaev: tau must be finite and < 1");
  if (!(p.tau * p.c * p.c >= 2.0))
    throw DomainError(
        "nagaev: tau c^2 >= 2 required so the tilt exponent stays inside the "
        "cubic-moment monotonicity window");
  if (!(p.alpha > 0.0) || !(p.alpha < 1.0))
    throw DomainError("nagaev: alpha must lie in (0, 1)");
  if (!(p.a_max > 0.0) || !std::isfinite(p.a_max))
    throw DomainError("nagaev: a_max must be positive and finite");
  if (!(p.a > 0.0) || !(p.a <= p.a_max))
    throw DomainError("nagaev: a must lie in (0, a_max]");
  if (!(p.a * p.z0 * p.z0 < p.alpha))
    throw DomainError("nagaev: a z0^2 < alpha required for real alpha1");
}

double alpha1_of(const NagaevParams& p) {
  return std::sqrt(1.0 - p.a * p.z0 * p.z0 / p.alpha);
}

// E(Z + u)_+^3 <= (max(u, 0) + 1)^3: for u >= 0 the difference is
// 3u^2 + 1 - E(Z - u)_+^3 > 0 since E(Z)_+^3 < 0.8, and for u < 0 the left
// side is below E(Z)_+^3 < 1.
double plus_cubic_envelope(double u) { return cube(std::max(u, 0.0) + 1.0); }

}  // namespace

double poisson_mixture_bound(const NagaevParams& params, double z,
                             int series_terms) {
  validate_params(params);
  if (!(z >= params.z0) || !std::isfinite(z))
    throw DomainError("poisson_mixture_bound: needs z >= z0");
  if (series_terms < 0)
    throw ValidationError("poisson_mixture_bound: series_terms must be >= 0");

  const double lambda = params.a / cube(params.alpha);
  const double factor = cube(alpha1_of(params) / z);
  const double step = params.alpha * z;
  const double shift = params.tau / params.alpha + lambda;
  const int cap = series_terms > 0 ? series_terms : 10000;

  double weight = std::exp(-lambda);
  double sum = 0.0;
  for (int j = 0; j < cap; ++j) {
    const double u_j = params.alpha * (static_cast<double>(j) - shift) * z;
    sum += factor *
           specfun::normal_cubic_moment(u_j, specfun::MomentSign::plus) *
           weight;

    const double w_next = weight * lambda / (j + 1);
    const double u_next = u_j + step;
    const double head = factor * plus_cubic_envelope(u_next) * w_next;
    const double growth =
        (plus_cubic_envelope(u_next + step) / plus_cubic_envelope(u_next));
    const double ratio = lambda / (j + 2) * growth;
    if (ratio <= 0.5) {
      const double remainder = 2.0 * head;
      if (remainder <= 1e-15 * sum || remainder < 1e-300)
        return sum + remainder;
    }
    weight = w_next;
  }
  throw ConvergenceError(
      "poisson_mixture_bound: series cap reached before the certified "
      "remainder fell below tolerance",
      {sum, 0.0}, sum);
}

double c0_constant(double z0, double c, double tau) {
  if (!(z0 >= 0.0) || !std::isfinite(z0))
    throw DomainError("c0_constant: z0 must be nonnegative and finite");
  if (!(c > 0.0) || !std::isfinite(c))
    throw DomainError("c0_constant: c must be positive and finite");
  if (!std::isfinite(tau) || !(tau < 1.0))
    throw DomainError("c0_constant: tau must be finite and < 1");
  if (z0 > 0.0 && !(tau * c * c >= 2.0))
    throw DomainError(
        "c0_constant: tau c^2 >= 2 required so beta = 1/c^2 <= tau/2 keeps "
        "e^{beta z^2} E(Z - tau z)_+^3 nonincreasing past z0");
  return std::exp(z0 * z0 / (c * c)) *
         specfun::normal_cubic_moment(tau * z0, specfun::MomentSign::minus);
}

double c1_constant(const NagaevParams& params) {
  validate_params(params);
  const double lambda = params.a / cube(params.alpha);
  const double A = params.alpha * params.z0;
  const double B = -(params.tau + params.alpha * lambda) * params.z0;

  // S_r = sum_{j>=1} j^r lambda^{j-1} / j!
  const double el = std::exp(lambda);
  const double s0 = std::expm1(lambda) / lambda;
  const double s1 = el;
  const double s2 = (lambda + 1.0) * el;
  const double s3 = (lambda * lambda + 3.0 * lambda + 1.0) * el;
  const double series = cube(A) * s3 + 3.0 * A * A * B * s2 +
                        (3.0 * A * B * B + 3.0 * A) * s1 +
                        (cube(B) + 3.0 * B) * s0;

  const double u10 = A + B;
  const double u20 = 2.0 * A + B;
  const double tail =
      specfun::normal_cubic_moment(u10, specfun::MomentSign::minus) +
      specfun::normal_cubic_moment(u20, specfun::MomentSign::minus) *
          (lambda / 2.0) * el;
  return cube(alpha1_of(params) / A) * (series + tail) * std::exp(-lambda);
}

double c1_zero_plus(double z0, double tau, double alpha) {
  if (!(z0 > 0.0) || !std::isfinite(z0))
    throw DomainError("c1_zero_plus: z0 must be positive and finite");
  if (!std::isfinite(tau) || !(tau < 1.0))
    throw DomainError("c1_zero_plus: tau must be finite and < 1");
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw DomainError("c1_zero_plus: alpha must lie in (0, 1)");
  return specfun::normal_cubic_moment((alpha - tau) * z0,
                                      specfun::MomentSign::plus) /
         cube(alpha * z0);
}

double ld_tail_bound(const NagaevParams& params, double z, double rho, int n) {
  validate_params(params);
  if (!(z >= params.z0) || !std::isfinite(z))
    throw DomainError("ld_tail_bound: needs z >= z0");
  if (!(rho >= 1.0) || !std::isfinite(rho))
    throw DomainError("ld_tail_bound: rho must be >= 1 and finite");
  if (n < 1) throw DomainError("ld_tail_bound: n must be >= 1");

  const double c0 = c0_constant(params.z0, params.c, params.tau);
  const double c1 = c1_zero_plus(params.z0, params.tau, params.alpha);
  return (c0 + c1) / cube(1.0 - params.tau) * rho /
         (cube(z) * std::sqrt(static_cast<double>(n)));
}

}  // namespace cfb
