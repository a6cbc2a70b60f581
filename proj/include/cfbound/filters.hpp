#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cfbound/quadrature.hpp"

namespace cfb {

// Real function together with its derivatives: jet(t, q) = d^q/dt^q at t.
using RealJet = std::function<double(double, int)>;

// A band-limited smoothing multiplier M = m1 + i m2 for the inversion
// inequalities: m1 even with m1(0) = 1, m2 odd, both vanishing outside their
// declared support radii. Implementations are immutable after construction
// and safe for concurrent evaluation.
class SmoothingFilter {
 public:
  virtual ~SmoothingFilter() = default;

  // q-th derivative of Re M / Im M; one-sided from the t-side at kinks.
  virtual double m1(double t, int q = 0) const = 0;
  virtual double m2(double t, int q = 0) const = 0;

  std::complex<double> value(double t) const { return {m1(t), m2(t)}; }
  std::complex<double> derivative(double t, int q) const {
    return {m1(t, q), m2(t, q)};
  }

  virtual double support_radius_m1() const = 0;
  virtual double support_radius_m2() const = 0;
  double support_radius() const {
    return std::max(support_radius_m1(), support_radius_m2());
  }

  // Largest k with M in C^k (0 when M is merely continuous).
  virtual int smoothness_order() const = 0;
  // Highest q for which m1(t, q) / m2(t, q) can be evaluated (one-sided
  // values at kinks).
  virtual int max_derivative_order() const = 0;

  // M^(q)(0+) - M^(q)(0-) for 1 <= q <= max_derivative_order; zero for
  // globally C^max filters. Feeds the jump-corrected inversion expansion.
  virtual std::complex<double> derivative_jump_at_zero(int q) const;

  virtual bool has_kernel() const { return false; }
  // Inverse Fourier transform (1/2pi) int e^{-itx} M(t) dt where available.
  virtual double kernel(double x) const;

  // Nonnegative abscissae that t-quadratures should use as panel boundaries:
  // kinks and evaluation-branch seams.
  virtual std::vector<double> breakpoints() const;

  virtual std::string name() const = 0;
  virtual nlohmann::json descriptor() const = 0;
};

// The classical multiplier
//   M(t) = [(1 - |t|) pi t cot(pi t) + |t| - i (1 - |t|) pi t] 1{|t| < 1}.
// Continuous everywhere, not C^1 (kink of m2' at |t| = 1 and third-order
// one-sidedness at 0); jump data up to order 3 is exposed.
std::unique_ptr<SmoothingFilter> prawitz_filter();

// Closed-form inverse transform of the multiplier above, in terms of the
// trigamma/tetragamma functions; defined by one-sided averaging on the
// excluded set {0, -2pi, -4pi, ...}.
double prawitz_kernel(double x);

// The C^3 filter with m1(t) = ((2 + cos 2 pi t)/3)(1 - |t|) + sin(2 pi |t|)/(2 pi)
// and m2 = -kappa (sign t / 3)(2 pi (1 - |t|) sin 2 pi |t| + 4 sin^2(pi t)),
// both supported on [-1, 1]. kappa must be >= the critical tilt kappa*.
std::unique_ptr<SmoothingFilter> m02_filter(double kappa);

// The density whose transform is the m1 above, and its critical tilt
// kappa* = 1 / int |x| p(x) dx (computed once by quadrature, then cached).
double m02_density(double x);
double m02_kappa_star();

// Tilted filter M = p_hat + i kappa p_hat' for a symmetric density p with
// finite first absolute moment. Transforms are evaluated by per-call
// quadrature; band_radius declares where p_hat vanishes (infinity when p is
// not band-limited, which bars the filter from CDF bounds but keeps it
// evaluable). smoothness declares the C^k order implied by p's moments.
std::unique_ptr<SmoothingFilter> bohman_filter(
    RealFn p, double kappa,
    double band_radius = std::numeric_limits<double>::infinity(),
    int smoothness = 1);

// 1 / int |x| p(x) dx by doubling quadrature; ConstructionError when the
// integral diverges.
double bohman_kappa_star(const RealFn& p);

struct TemperedSpec {
  RealJet p_hat;        // even, C^1 or better, vanishes for |t| > 1
  int p_hat_orders = 1; // derivative orders the jet supplies
  RealFn dG_hat;        // even, dG_hat(0) = 1, vanishes for |t| > gamma
  double gamma = 0.5;
  double kappa = 0.0;
};

// Tempered tilt: m1 = p_hat, and m2 the subtracted (Lebesgue-form)
// convolution  m2(u) = -(kappa / 2 pi) int [p_hat(u - s) - p_hat(u)] / s
// dG_hat(s) ds,  supported on |u| <= 1 + gamma. kappa must be >= the
// critical kappa* = 1 / (2 int_0^inf p G), which the constructor computes
// numerically.
std::unique_ptr<SmoothingFilter> tempered_tilt_filter(TemperedSpec spec);

double tempered_kappa_star(const RealJet& p_hat, const RealFn& dG_hat,
                           double gamma);

// int_{-gamma}^{-|t|} dG_hat(s) / s ds for |t| < gamma (0 outside): the
// mildly singular auxiliary transform of the tilt construction.
double tempered_tilde_transform(const RealFn& dG_hat, double gamma, double t);

// Even characteristic-function factory: f = (g star reversed conj g) / ||g||^2
// for a square-integrable window g on [a, b]; f(0) = 1 and f vanishes outside
// [-(b - a), b - a]. Evaluation is trapezoidal with step halving to 1e-8.
class WindowCf {
 public:
  WindowCf(RealFn g, double a, double b);
  double operator()(double u) const;
  double support_radius() const { return b_ - a_; }

 private:
  double correlate(double u, int panels) const;
  RealFn g_;
  double a_, b_;
  double norm_;
  int panels_;
};

WindowCf cf_from_window(RealFn g, double a, double b);

}  // namespace cfb
