#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace cfb {

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  // Panels are never wider than this; the oscillation control for integrands
  // like e^{-itx} is max_panel_width = pi / (4|x|).
  double max_panel_width = std::numeric_limits<double>::infinity();
  // Refinement budget: total number of panel splits allowed.
  std::size_t max_splits = 20000;
};

struct QuadResult {
  std::complex<double> value;
  double error;  // sum of per-panel Gauss/Kronrod discrepancies
  std::size_t panels;
};

using ComplexFn = std::function<std::complex<double>(double)>;
using RealFn = std::function<double(double)>;

// Adaptive Gauss-Kronrod 7-15 on [a, b]. Interior breakpoints become initial
// panel boundaries so kinks never sit inside a panel. Throws ConvergenceError
// (carrying the best estimate) if the split budget runs out.
QuadResult integrate(const ComplexFn& f, double a, double b,
                     const QuadOptions& opt = {},
                     std::span<const double> breakpoints = {});

QuadResult integrate_real(const RealFn& f, double a, double b,
                          const QuadOptions& opt = {},
                          std::span<const double> breakpoints = {});

// int_a^inf f, computed as [a, X], [X, 2X], [2X, 4X], ... until the last
// segment's contribution is negligible against the accumulated total.
// Segments that stop shrinking mark a divergent (or too-heavy-tailed)
// integrand; that raises ConvergenceError with the partial sum.
QuadResult integrate_semi_infinite(const ComplexFn& f, double a,
                                   double initial_cut,
                                   const QuadOptions& opt = {},
                                   int max_doublings = 40);

}  // namespace cfb
