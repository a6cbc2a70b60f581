#pragma once

#include <complex>
#include <limits>
#include <vector>

#include "cfbound/charfn.hpp"
#include "cfbound/filters.hpp"
#include "cfbound/quadrature.hpp"

namespace cfb {

struct PVQuadratureConfig {
  // Secant-guard radius: inside it the subtracted integrand is replaced by a
  // symmetric difference quotient (the integrand is continuous at 0 but the
  // literal expression is 0/0 there).
  double inner_cutoff = 1e-10;
  // Initial truncation radius for integrands without compact support; grows
  // by doubling until the annulus contributions are negligible.
  double outer_cutoff = 50.0;
  double tolerance = 1e-9;
  int max_refinements = 12;
};

struct CdfBracket {
  double x = 0.0;
  double lower = 0.0;
  double upper = 1.0;
  double quad_error_estimate = 0.0;  // invariant: lower <= upper + 2 * this
};

// Integrand package for the principal-value operator: the function itself,
// the radius beyond which it is constant (tail_constant; 0 for compactly
// supported h), and nonnegative abscissae the quadrature must respect.
struct PVIntegrand {
  ComplexFn h;
  double support_radius = std::numeric_limits<double>::infinity();
  std::complex<double> tail_constant = 0.0;
  std::vector<double> breakpoints;
};

struct GOperatorResult {
  std::complex<double> value;
  double error_estimate = 0.0;
};

// (i/2pi) p.v. int e^{-itx} h(t) dt / t.
//
// The pole is removed by subtracting h(0): over a symmetric interval the
// p.v. of h(0)/t vanishes, so for h constant-beyond-R the value splits into
// tail_constant * sign(x)/2 plus an ordinary Lebesgue integral over [-R, R],
// evaluated exactly there. Unbounded supports are truncated at a doubling
// cutoff; when the annulus contributions stagnate (lattice-type h, whose
// oscillation never dies) the oscillation is averaged out and folded into
// error_estimate instead of failing.
GOperatorResult g_operator(const PVIntegrand& h, double x,
                           const PVQuadratureConfig& cfg = {});
GOperatorResult g_operator(const ComplexFn& h, double x,
                           const PVQuadratureConfig& cfg = {});

// P(X < x) + P(X = x)/2 through the inversion identity G(f)(x) + 1/2.
double invert_cdf(const CharFnEvaluator& f, double x,
                  const PVQuadratureConfig& cfg = {});

// lower <= P(X < x) <= P(X <= x) <= upper from the smoothing inequalities
// with multiplier M(t/Ts), where Ts = T / max(filter support radius, 1) so
// the integrand support never exceeds T. A nominally real bound whose
// imaginary residue exceeds 10 * tolerance raises DiagnosticError.
CdfBracket prawitz_cdf_bounds(const CharFnEvaluator& f,
                              const SmoothingFilter& filter, double T,
                              double x, const PVQuadratureConfig& cfg = {});

}  // namespace cfb
