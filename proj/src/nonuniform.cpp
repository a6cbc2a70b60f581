#include "cfbound/nonuniform.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "cfbound/errors.hpp"
#include "cfbound/specfun.hpp"

namespace cfb {
namespace {

constexpr double kPi = 3.141592653589793238462643383279503;
const std::complex<double> kI{0.0, 1.0};

std::complex<double> ipowk(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

double factorial(int k) {
  double f = 1.0;
  for (int j = 2; j <= k; ++j) f *= j;
  return f;
}

// G-contribution of the cascade's exact far tail: beyond the support radius R
// of h every derivative vanishes, so (L^k h)(t) = -k! h(0) t^{-k} there, and
//   (i/2pi) int_{|t|>R} e^{-itx} (-k! h0) t^{-(k+1)} dt
// reduces to the oscillatory tail integral E_{k+1}(R|x|); the two half-lines
// combine into twice the real (k odd) or imaginary (k even) part.
std::complex<double> cascade_far_tail(int k, std::complex<double> h0, double R,
                                      double x) {
  std::complex<double> inner;
  if (x == 0.0) {
    inner = (k % 2 == 1)
                ? std::complex<double>(2.0 * std::pow(R, -k) / k, 0.0)
                : std::complex<double>(0.0, 0.0);
  } else {
    const double ax = std::fabs(x);
    const auto e = specfun::exp_osc_tail(R * ax, k + 1);
    const double xk = std::pow(ax, k);
    inner = (k % 2 == 1) ? std::complex<double>(2.0 * xk * e.real(), 0.0)
                         : std::complex<double>(0.0, 2.0 * xk * e.imag());
    if (x < 0.0) inner = std::conj(inner);
  }
  return (kI / (2.0 * kPi)) * (-factorial(k)) * h0 * inner;
}

// |I| envelope on a log grid. Monotonicity of |I| makes the right grid
// neighbor an upper bound between nodes; below the grid |I(u)| <= u/2.
class IBoundTable {
 public:
  IBoundTable() {
    const double lo = 1e-6, hi = 1e7;
    const int n = 600;
    const double step = std::log(hi / lo) / (n - 1);
    grid_.reserve(n);
    vals_.reserve(n);
    for (int j = 0; j < n; ++j) {
      const double u = lo * std::exp(step * j);
      grid_.push_back(u);
      vals_.push_back(std::abs(i_function(u)));
    }
  }
  double upper(double u) const {
    u = std::fabs(u);
    if (u == 0.0) return 0.0;
    if (u >= grid_.back()) return 1.0;
    const auto it = std::lower_bound(grid_.begin(), grid_.end(), u);
    const double cap = vals_[static_cast<size_t>(it - grid_.begin())];
    return std::min({1.0, 0.5 * u, cap});
  }

 private:
  std::vector<double> grid_;
  std::vector<double> vals_;
};

const IBoundTable& i_table() {
  static IBoundTable table;
  return table;
}

}  // namespace

LambdaEvaluator::LambdaEvaluator(ComplexJet h, int k, double near_zero_radius,
                                 std::vector<double> breakpoints)
    : h_(std::move(h)),
      k_(k),
      r0_(near_zero_radius),
      breakpoints_(std::move(breakpoints)) {
  if (!h_) throw ValidationError("LambdaEvaluator: missing jet");
  if (k_ < 1) throw ValidationError("LambdaEvaluator: k must be >= 1");
  if (!(r0_ > 0.0))
    throw ValidationError("LambdaEvaluator: near_zero_radius must be > 0");
}

std::complex<double> LambdaEvaluator::finite_sum_form(double t) const {
  if (t == 0.0) return 0.0;
  std::complex<double> sum = h_(0.0, 0);
  double pw = 1.0;  // (-t)^j / j!
  for (int j = 0; j <= k_; ++j) {
    sum -= h_(t, j) * pw;
    pw *= -t / (j + 1);
  }
  return -factorial(k_) * std::pow(t, -k_) * sum;
}

std::complex<double> LambdaEvaluator::integral_form(double t) const {
  if (t == 0.0) return 0.0;
  const std::complex<double> hk_t = h_(t, k_);
  std::vector<double> bps;
  for (double b : breakpoints_)
    if (b > 0.0 && b < std::fabs(t)) bps.push_back(b / std::fabs(t));
  auto f = [&](double a) -> std::complex<double> {
    double w = static_cast<double>(k_);
    for (int j = 1; j < k_; ++j) w *= a;
    return (hk_t - h_(a * t, k_)) * w;
  };
  QuadOptions opt;
  opt.abs_tol = 1e-12;
  opt.rel_tol = 1e-11;
  const auto r = integrate(f, 0.0, 1.0, opt, bps);
  const double sgn = (k_ % 2 == 0) ? 1.0 : -1.0;
  return sgn * r.value;
}

std::complex<double> LambdaEvaluator::operator()(double t) const {
  if (t == 0.0) return 0.0;
  return (std::fabs(t) <= r0_) ? integral_form(t) : finite_sum_form(t);
}

std::complex<double> lambda_k(const ComplexJet& h, int k, double t) {
  return LambdaEvaluator(h, k)(t);
}

TailBoundResult tail_bound(const CharFnEvaluator& f,
                           const SmoothingFilter& filter, int k, double T,
                           double x, const PVQuadratureConfig& cfg) {
  if (k < 1) throw ValidationError("tail_bound: k must be >= 1");
  if (k > f.max_derivative_order() || k > filter.max_derivative_order())
    throw CapabilityError("tail_bound: derivative order beyond evaluators");
  if (filter.smoothness_order() < k)
    throw SmoothnessError("tail_bound: filter '" + filter.name() + "' is C^" +
                          std::to_string(filter.smoothness_order()) +
                          " but the order-" + std::to_string(k) +
                          " cascade needs C^" + std::to_string(k));
  if (!(T > 0.0) || !std::isfinite(T))
    throw ValidationError("tail_bound: T must be positive and finite");
  if (!(x >= 0.0)) throw DomainError("tail_bound: x must be >= 0");
  const double radius = filter.support_radius();
  if (!std::isfinite(radius))
    throw ValidationError("tail_bound: filter must have compact support");

  const double Ts = T / std::max(radius, 1.0);
  const double R = radius * Ts;
  std::vector<double> bps = {0.5};
  for (double b : filter.breakpoints()) bps.push_back(b * Ts);

  auto jet_with = [&](double sgn) -> ComplexJet {
    return [&f, &filter, Ts, sgn](double t, int q) {
      std::complex<double> acc = 0.0;
      double binom = 1.0, sc = 1.0;
      for (int j = 0; j <= q; ++j) {
        const double u = sgn * t / Ts;
        acc += binom * sc *
               std::complex<double>(filter.m1(u, j), filter.m2(u, j)) *
               f.derivative(t, q - j);
        binom = binom * (q - j) / (j + 1);
        sc *= sgn / Ts;
      }
      return acc;
    };
  };

  auto one_side = [&](double sgn) {
    const LambdaEvaluator lam(jet_with(sgn), k, 0.5, bps);
    PVIntegrand hin;
    hin.h = [lam](double t) { return lam(t); };
    hin.support_radius = R;
    hin.breakpoints = bps;
    auto r = g_operator(hin, x, cfg);
    r.value += cascade_far_tail(k, jet_with(sgn)(0.0, 0), R, x);
    return r;
  };

  const auto up = one_side(-1.0);  // r_{T,+} carries M(-t/Ts)
  const auto lo = one_side(+1.0);
  const std::complex<double> mik = -ipowk(k);
  const std::complex<double> upper_c = mik * up.value;
  const std::complex<double> lower_c = mik * lo.value;
  const double residue =
      std::max(std::fabs(upper_c.imag()), std::fabs(lower_c.imag()));
  if (residue > 10.0 * cfg.tolerance)
    throw DiagnosticError("tail_bound: imaginary residue " +
                          std::to_string(residue) +
                          " exceeds 10x tolerance; parity is suspect");

  TailBoundResult out;
  out.x = x;
  out.k = k;
  out.T = T;
  out.upper = upper_c.real();
  out.lower = lower_c.real();
  out.quad_error = std::max(up.error_estimate, lo.error_estimate);
  const auto& spec = f.spec();
  if (spec.kind() == DistributionSpec::Kind::normal) {
    const double z = (x - spec.param_mean()) / spec.param_sd();
    out.exact = std::pow(x, k) * specfun::normal_tail(z);
  } else if (spec.has_exact_lattice()) {
    out.exact = std::pow(x, k) * spec.exact_lattice().sf_ge(x);
  }
  return out;
}

std::complex<double> lambda_expansion_with_jumps(
    const ComplexJet& h, int k, double x,
    const std::vector<std::complex<double>>& jumps, double support_radius,
    const PVQuadratureConfig& cfg) {
  if (x == 0.0)
    throw DomainError("lambda_expansion_with_jumps: x must be nonzero");
  if (k < 1) throw ValidationError("lambda_expansion_with_jumps: k >= 1");
  if (static_cast<int>(jumps.size()) < k)
    throw ValidationError(
        "lambda_expansion_with_jumps: need jump data for orders 1..k");
  if (!std::isfinite(support_radius) || !(support_radius > 0.0))
    throw ValidationError(
        "lambda_expansion_with_jumps: finite support radius required");

  const std::complex<double> h0 = h(0.0, 0);
  std::complex<double> val = h0 * (0.5 * ((x > 0.0) - (x < 0.0)));
  std::complex<double> ixj = 1.0;
  for (int j = 1; j <= k; ++j) {
    ixj *= kI * x;
    val += (kI / (2.0 * kPi)) * jumps[static_cast<size_t>(j - 1)] /
           (static_cast<double>(j) * ixj);
  }

  const LambdaEvaluator lam(h, k, std::min(0.5, 0.5 * support_radius));
  PVIntegrand hin;
  hin.h = [lam](double t) { return lam(t); };
  hin.support_radius = support_radius;
  hin.breakpoints = {std::min(0.5, 0.5 * support_radius)};
  auto g = g_operator(hin, x, cfg);
  g.value += cascade_far_tail(k, h0, support_radius, x);

  std::complex<double> iox = 1.0;
  for (int j = 0; j < k; ++j) iox *= kI / x;
  return val + iox * g.value;
}

std::complex<double> i_function(double u) {
  if (u == 0.0) return 0.0;
  const double a = std::fabs(u);
  const std::complex<double> v =
      -kI * (a * a * a) * specfun::exp_osc_tail(a, 3);
  return u > 0.0 ? v : std::conj(v);
}

double i_function_upper(double u) { return i_table().upper(u); }

double averaged_l_bound(const ComplexFn& H, double x,
                        const PVQuadratureConfig& cfg) {
  if (!H) throw ValidationError("averaged_l_bound: missing integrand");
  if (!std::isfinite(cfg.outer_cutoff) || !(cfg.outer_cutoff > 0.0))
    throw DomainError(
        "averaged_l_bound: a finite truncation radius (outer_cutoff) is "
        "required");
  if (x == 0.0) return 0.0;
  auto f = [&](double t) -> std::complex<double> {
    const double mass = std::abs(H(t)) + std::abs(H(-t));
    if (mass == 0.0) return 0.0;
    if (t < cfg.inner_cutoff) return 0.5 * std::fabs(x) * mass;
    return i_function_upper(t * x) * mass / t;
  };
  QuadOptions opt;
  opt.abs_tol = 0.25 * cfg.tolerance;
  opt.rel_tol = 1e-10;
  opt.max_panel_width = 0.5;
  const auto r = integrate(f, 0.0, cfg.outer_cutoff, opt);
  return r.value.real() / (2.0 * kPi);
}

}  // namespace cfb
