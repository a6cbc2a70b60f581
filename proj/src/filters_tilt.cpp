#include <cmath>
#include <utility>

#include "cfbound/errors.hpp"
#include "cfbound/filters.hpp"

namespace cfb {
namespace {

constexpr double kPi = 3.141592653589793238462643383279503;

// 2 int_0^inf x^q trig(tx) p(x) dx, the q-th derivative of the transform of
// a symmetric density. trig cycles cos, -sin, -cos, sin.
double symmetric_transform(const RealFn& p, double t, int q) {
  QuadOptions opt;
  opt.abs_tol = 1e-12;
  opt.rel_tol = 1e-11;
  opt.max_panel_width = kPi / (4.0 * (1.0 + std::fabs(t)));
  auto f = [&p, t, q](double x) -> std::complex<double> {
    double w;
    switch (q % 4) {
      case 0: w = std::cos(t * x); break;
      case 1: w = -std::sin(t * x); break;
      case 2: w = -std::cos(t * x); break;
      default: w = std::sin(t * x); break;
    }
    double xq = 1.0;
    for (int j = 0; j < q; ++j) xq *= x;
    return 2.0 * xq * w * p(x);
  };
  return integrate_semi_infinite(f, 0.0, 64.0, opt).value.real();
}

class BohmanFilter final : public SmoothingFilter {
 public:
  BohmanFilter(RealFn p, double kappa, double band, int smoothness)
      : p_(std::move(p)),
        kappa_(kappa),
        band_(band),
        smooth_(smoothness),
        kappa_star_(bohman_kappa_star(p_)) {
    if (!(kappa_ >= kappa_star_ - 1e-9))
      throw ValidationError("bohman_filter: kappa below the critical tilt");
  }
  double m1(double t, int q) const override {
    if (std::fabs(t) >= band_) return 0.0;
    return symmetric_transform(p_, t, q);
  }
  double m2(double t, int q) const override {
    if (std::fabs(t) >= band_) return 0.0;
    return kappa_ * symmetric_transform(p_, t, q + 1);
  }
  double support_radius_m1() const override { return band_; }
  double support_radius_m2() const override { return band_; }
  int smoothness_order() const override { return smooth_; }
  int max_derivative_order() const override { return 3; }
  bool has_kernel() const override { return true; }
  double kernel(double x) const override {
    return p_(x) * (1.0 - kappa_ * x);
  }
  std::vector<double> breakpoints() const override {
    if (std::isfinite(band_)) return {band_};
    return {};
  }
  std::string name() const override { return "bohman"; }
  nlohmann::json descriptor() const override {
    nlohmann::json j = {{"name", "bohman"},
                        {"kappa", kappa_},
                        {"kappa_star", kappa_star_},
                        {"smoothness_order", smooth_}};
    if (std::isfinite(band_)) j["band_radius"] = band_;
    return j;
  }

 private:
  RealFn p_;
  double kappa_;
  double band_;
  int smooth_;
  double kappa_star_;
};

class TemperedFilter final : public SmoothingFilter {
 public:
  explicit TemperedFilter(TemperedSpec s)
      : s_(validate(std::move(s))),
        kappa_star_(tempered_kappa_star(s_.p_hat, s_.dG_hat, s_.gamma)) {
    if (!(s_.kappa >= kappa_star_ - 1e-6))
      throw ValidationError("tempered_tilt_filter: kappa below the critical tilt");
  }
  double m1(double t, int q) const override {
    check_order(q);
    if (std::fabs(t) >= 1.0) return 0.0;
    return s_.p_hat(t, q);
  }
  double m2(double t, int q) const override {
    check_order(q);
    if (std::fabs(t) >= 1.0 + s_.gamma) return 0.0;
    return tilted(t, q);
  }
  double support_radius_m1() const override { return 1.0; }
  double support_radius_m2() const override { return 1.0 + s_.gamma; }
  int smoothness_order() const override { return s_.p_hat_orders; }
  int max_derivative_order() const override { return s_.p_hat_orders; }
  std::vector<double> breakpoints() const override {
    return {1.0, 1.0 + s_.gamma};
  }
  std::string name() const override { return "tempered"; }
  nlohmann::json descriptor() const override {
    return {{"name", "tempered"},
            {"kappa", s_.kappa},
            {"kappa_star", kappa_star_},
            {"gamma", s_.gamma},
            {"smoothness_order", s_.p_hat_orders}};
  }

 private:
  static TemperedSpec validate(TemperedSpec s) {
    if (!s.p_hat || !s.dG_hat)
      throw ConstructionError("tempered_tilt_filter: missing evaluator");
    if (!(s.gamma > 0.0) || !std::isfinite(s.gamma))
      throw ConstructionError("tempered_tilt_filter: gamma must be positive");
    if (s.p_hat_orders < 1)
      throw ConstructionError(
          "tempered_tilt_filter: p_hat must supply at least first derivatives");
    if (std::fabs(s.p_hat(0.0, 0) - 1.0) > 1e-9)
      throw ConstructionError("tempered_tilt_filter: p_hat(0) must equal 1");
    if (std::fabs(s.dG_hat(0.0) - 1.0) > 1e-9)
      throw ConstructionError("tempered_tilt_filter: dG_hat(0) must equal 1");
    return s;
  }
  void check_order(int q) const {
    if (q < 0 || q > s_.p_hat_orders)
      throw CapabilityError("tempered filter: derivative order beyond jet");
  }
  // -(kappa / 2 pi) int [p_hat^(q)(u - s) - p_hat^(q)(u)] / s dG_hat(s) ds.
  // The subtracted integrand is continuous at s = 0 (limit -p_hat^(q+1) dG(0));
  // s = 0 is a panel boundary so nodes never land on it, and the node spacing
  // keeps the difference quotient's cancellation below the panel tolerance.
  double tilted(double u, int q) const {
    const double pq_u = (std::fabs(u) >= 1.0) ? 0.0 : s_.p_hat(u, q);
    const bool have_next = q + 1 <= s_.p_hat_orders;
    std::vector<double> bps = {0.0};
    for (double e : {u - 1.0, u + 1.0})
      if (e > -s_.gamma && e < s_.gamma) bps.push_back(e);
    auto f = [&](double sv) -> std::complex<double> {
      const double g = s_.dG_hat(sv);
      if (g == 0.0) return 0.0;
      if (sv == 0.0)
        return have_next && std::fabs(u) < 1.0 ? -s_.p_hat(u, q + 1) * g : 0.0;
      const double arg = u - sv;
      const double pv = (std::fabs(arg) >= 1.0) ? 0.0 : s_.p_hat(arg, q);
      return (pv - pq_u) / sv * g;
    };
    QuadOptions opt;
    opt.abs_tol = 1e-12;
    opt.rel_tol = 1e-10;
    const auto r = integrate(f, -s_.gamma, s_.gamma, opt, bps);
    return -(s_.kappa / (2.0 * kPi)) * r.value.real();
  }

  TemperedSpec s_;
  double kappa_star_;
};

}  // namespace

double bohman_kappa_star(const RealFn& p) {
  QuadOptions opt;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-12;
  double m;
  try {
    m = integrate_semi_infinite(
            [&p](double x) -> std::complex<double> { return x * p(x); }, 0.0,
            64.0, opt)
            .value.real();
  } catch (const ConvergenceError&) {
    throw ConstructionError(
        "bohman_kappa_star: int |x| p(x) dx does not converge");
  }
  if (!(m > 0.0) || !std::isfinite(m))
    throw ConstructionError(
        "bohman_kappa_star: first absolute moment must be positive and finite");
  return 1.0 / (2.0 * m);
}

std::unique_ptr<SmoothingFilter> bohman_filter(RealFn p, double kappa,
                                               double band_radius,
                                               int smoothness) {
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw ValidationError("bohman_filter: kappa must be positive and finite");
  return std::make_unique<BohmanFilter>(std::move(p), kappa, band_radius,
                                        smoothness);
}

std::unique_ptr<SmoothingFilter> tempered_tilt_filter(TemperedSpec spec) {
  return std::make_unique<TemperedFilter>(std::move(spec));
}

double tempered_kappa_star(const RealJet& p_hat, const RealFn& dG_hat,
                           double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw ConstructionError("tempered_kappa_star: gamma must be positive");
  if (std::fabs(dG_hat(0.0) - 1.0) > 1e-9)
    throw ConstructionError("tempered_kappa_star: dG_hat(0) must equal 1");
  if (std::fabs(p_hat(0.0, 0) - 1.0) > 1e-9)
    throw ConstructionError("tempered_kappa_star: p_hat(0) must equal 1");
  // kappa* = 1 / (2 int_0^inf p(x) G(x) dx) with
  //   p(x) = (1/pi) int_0^1 cos(xt) p_hat(t) dt
  //   G(x) = (1/pi) int_0^gamma sin(xt) / t dG_hat(t) dt.
  // Since int_0^inf p = p_hat(0)/2 = 1/2 and G(inf) = dG_hat(0)/2 = 1/2,
  // rewrite int p G = 1/4 + int p (G - 1/2); the shifted integrand decays a
  // power of x faster, so truncating it at X leaves only an O(X^-2) residue.
  auto p_of = [&](double x) {
    QuadOptions opt;
    opt.abs_tol = 1e-11;
    opt.rel_tol = 1e-10;
    opt.max_panel_width = kPi / (4.0 * (1.0 + std::fabs(x)));
    auto f = [&](double t) -> std::complex<double> {
      return std::cos(x * t) * p_hat(t, 0);
    };
    return integrate(f, 0.0, 1.0, opt).value.real() / kPi;
  };
  auto g_of = [&](double x) {
    QuadOptions opt;
    opt.abs_tol = 1e-11;
    opt.rel_tol = 1e-10;
    opt.max_panel_width = kPi / (4.0 * (1.0 + std::fabs(x)));
    auto f = [&](double t) -> std::complex<double> {
      if (t == 0.0) return x * dG_hat(0.0);
      return std::sin(x * t) / t * dG_hat(t);
    };
    return integrate(f, 0.0, gamma, opt).value.real() / kPi;
  };
  const double X = 120.0;
  QuadOptions outer;
  outer.abs_tol = 1e-8;
  outer.rel_tol = 1e-8;
  outer.max_panel_width = 1.0;
  const double shifted = integrate([&](double x) -> std::complex<double> {
                           return p_of(x) * (g_of(x) - 0.5);
                         },
                                   0.0, X, outer)
                             .value.real();
  const double denom = 2.0 * (0.25 + shifted);
  if (!(denom > 0.0))
    throw ConstructionError("tempered_kappa_star: nonpositive denominator");
  return 1.0 / denom;
}

double tempered_tilde_transform(const RealFn& dG_hat, double gamma, double t) {
  const double tau = std::fabs(t);
  if (tau >= gamma) return 0.0;
  if (tau == 0.0)
    throw DomainError(
        "tempered_tilde_transform: logarithmic divergence at t = 0");
  QuadOptions opt;
  opt.abs_tol = 1e-12;
  opt.rel_tol = 1e-11;
  return integrate_real([&](double v) { return -dG_hat(v) / v; }, tau, gamma,
                        opt)
      .value.real();
}

WindowCf::WindowCf(RealFn g, double a, double b)
    : g_(std::move(g)), a_(a), b_(b), norm_(0.0), panels_(64) {
  if (!(b > a) || !std::isfinite(a) || !std::isfinite(b))
    throw ValidationError("cf_from_window: need finite a < b");
  int n = 64;
  double prev = correlate(0.0, n);
  for (;;) {
    n *= 2;
    const double cur = correlate(0.0, n);
    if (std::fabs(cur - prev) <= 1e-8 * std::max(1.0, std::fabs(cur))) {
      norm_ = cur;
      panels_ = n;
      break;
    }
    prev = cur;
    if (n > (1 << 22))
      throw ConvergenceError("cf_from_window: window norm did not stabilize",
                             cur, std::fabs(cur - prev));
  }
  if (!(norm_ > 1e-300))
    throw ConstructionError("cf_from_window: window is numerically zero");
}

double WindowCf::correlate(double u, int panels) const {
  const double lo = std::max(a_, a_ + u);
  const double hi = std::min(b_, b_ + u);
  if (!(hi > lo)) return 0.0;
  const double h = (hi - lo) / panels;
  double sum = 0.5 * (g_(lo) * g_(lo - u) + g_(hi) * g_(hi - u));
  for (int i = 1; i < panels; ++i) {
    const double s = lo + h * i;
    sum += g_(s) * g_(s - u);
  }
  return sum * h;
}

double WindowCf::operator()(double u) const {
  if (u == 0.0) return 1.0;
  if (std::fabs(u) >= b_ - a_) return 0.0;
  int n = panels_;
  double prev = correlate(u, n);
  for (;;) {
    n *= 2;
    const double cur = correlate(u, n);
    if (std::fabs(cur - prev) <= 1e-8 * std::max(1.0, std::fabs(cur)))
      return cur / norm_;
    prev = cur;
    if (n > (1 << 23))
      throw ConvergenceError("cf_from_window: correlation did not stabilize",
                             cur / norm_, std::fabs(cur - prev));
  }
}

WindowCf cf_from_window(RealFn g, double a, double b) {
  return WindowCf(std::move(g), a, b);
}

}  // namespace cfb
