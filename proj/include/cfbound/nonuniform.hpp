#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "cfbound/charfn.hpp"
#include "cfbound/filters.hpp"
#include "cfbound/inversion.hpp"

namespace cfb {

// jet(t, q) = q-th derivative of a complex function at t, one-sided from the
// sign of t at kinks.
using ComplexJet = std::function<std::complex<double>(double, int)>;

// The k-th difference cascade
//   (L^k h)(t) = -k! t^{-k} (h(0) - sum_{j<=k} h^(j)(t) (-t)^j / j!),
// with the equivalent integral form
//   (L^k h)(t) = (-1)^k int_0^1 [h^(k)(t) - h^(k)(at)] k a^{k-1} da
// used for |t| <= near_zero_radius, where the finite sum loses ~k digits to
// cancellation. (L^k h)(0) = 0. The integration path [0, t] never crosses 0,
// so one-sided jets are consistent.
class LambdaEvaluator {
 public:
  LambdaEvaluator(ComplexJet h, int k, double near_zero_radius = 0.5,
                  std::vector<double> breakpoints = {});

  std::complex<double> operator()(double t) const;
  std::complex<double> finite_sum_form(double t) const;
  std::complex<double> integral_form(double t) const;

  int order() const { return k_; }
  double near_zero_radius() const { return r0_; }

 private:
  ComplexJet h_;
  int k_;
  double r0_;
  std::vector<double> breakpoints_;
};

std::complex<double> lambda_k(const ComplexJet& h, int k, double t);

struct TailBoundResult {
  double x = 0.0;
  int k = 0;
  double T = 0.0;
  double upper = 0.0;
  double lower = 0.0;
  std::optional<double> exact;  // x^k P(X >= x) when the law admits it
  double quad_error = 0.0;
};

// Nonuniform tail bracket
//   lower <= x^k P(X > x) <= x^k P(X >= x) <= upper
// with upper = Re[-i^k G(L^k r+)(x)], lower = Re[-i^k G(L^k r-)(x)], and
// r+-(t) = M(-+ t/Ts) f(t), Ts = T / max(filter support radius, 1). Requires
// the filter to be C^k (SmoothnessError otherwise; the classical multiplier
// fails already at k = 1) and E|X|^k < infinity, which holds for every
// representable law. The cascade's exact power tail beyond the integrand
// support is added in closed form through the oscillatory tail integrals.
TailBoundResult tail_bound(const CharFnEvaluator& f,
                           const SmoothingFilter& filter, int k, double T,
                           double x, const PVQuadratureConfig& cfg = {});

// G(h)(x) reconstructed from the cascade plus one-sided derivative jumps at
// the origin:
//   h(0) sign(x)/2 + (i/2pi) sum_{j=1}^k jump_j / (j (ix)^j)
//     + (i/x)^k G(L^k h)(x),
// where jump_j = h^(j)(0+) - h^(j)(0-). Valid for h continuous, C^k away
// from 0, vanishing beyond support_radius; x = 0 is out of domain.
std::complex<double> lambda_expansion_with_jumps(
    const ComplexJet& h, int k, double x,
    const std::vector<std::complex<double>>& jumps, double support_radius,
    const PVQuadratureConfig& cfg = {});

// I(u) = int_0^1 (e^{-iu/a} - e^{-iu}) 3a^2 da = -i u^3 E_3(u) for u > 0,
// I(-u) = conj I(u), I(0) = 0. |I| increases strictly from 0 to 1 and obeys
// |I(u)| <= min(1, |u|/2).
std::complex<double> i_function(double u);

// Monotone upper envelope of |I| from a precomputed log grid: cheap enough
// to sit inside another quadrature while staying a true upper bound.
double i_function_upper(double u);

// (1/2pi) int |I(tx)| |H(t)| dt/|t| over |t| <= cfg.outer_cutoff: the
// averaging refinement of the plain (1/2pi) int |H| dt/|t| majorant, which it
// never exceeds since |I| < 1. x = 0 gives 0 outright.
double averaged_l_bound(const ComplexFn& H, double x,
                        const PVQuadratureConfig& cfg = {});

}  // namespace cfb
