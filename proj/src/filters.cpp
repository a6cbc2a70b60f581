#include "cfbound/filters.hpp"

#include <array>
#include <cmath>
#include <mutex>

#include "cfbound/errors.hpp"
#include "cfbound/specfun.hpp"

namespace cfb {
namespace {

constexpr double kPi = 3.141592653589793238462643383279503;

// zeta(2k), k = 1..16; beyond that zeta(2k) = 1 to double precision for the
// series below.
constexpr std::array<double, 16> kZeta2k = {
    1.6449340668482264365, 1.0823232337111381916, 1.0173430619844491397,
    1.0040773561979443394, 1.0009945751278180853, 1.0002460865533080483,
    1.0000612481350587048, 1.0000152822594086519, 1.0000038172932649998,
    1.0000009539620338728, 1.0000002384505027277, 1.0000000596081890513,
    1.0000000149015548284, 1.0000000037253340248, 1.0000000009313274324,
    1.0000000002328311834};

double falling(int p, int q) {
  double f = 1.0;
  for (int j = 0; j < q; ++j) f *= p - j;
  return f;
}

// d^q/dt^q of (1 - t) pi t cot(pi t) + t on (0, 1/2], one-sided at the ends.
// On (0, 1/4] the cotangent expansion
//   pi t cot(pi t) = 1 - sum_{k >= 1} 2 zeta(2k) t^{2k}
// turns m1 into 1 - sum 2 zeta(2k) (t^{2k} - t^{2k+1}); differentiated
// termwise with falling factorials. On (1/4, 1/2] closed trigonometric forms
// avoid the slow tail of the series.
double praw_m1_halfopen(double t, int q) {
  if (t <= 0.25) {
    if (q == 0 && t == 0.0) return 1.0;
    double acc = (q == 0) ? 1.0 : 0.0;
    for (int k = 1; k <= 26; ++k) {
      const double z = (k <= 16) ? kZeta2k[static_cast<size_t>(k - 1)] : 1.0;
      const double c = 2.0 * z;
      const int p1 = 2 * k, p2 = 2 * k + 1;
      if (p1 >= q) acc -= c * falling(p1, q) * std::pow(t, p1 - q);
      acc += c * falling(p2, q) * std::pow(t, p2 - q);
    }
    return acc;
  }
  const double sn = std::sin(kPi * t), cs = std::cos(kPi * t);
  const double sn2 = std::sin(2.0 * kPi * t), cs2 = std::cos(2.0 * kPi * t);
  switch (q) {
    case 0:
      return (1.0 - t) * kPi * t * cs / sn + t;
    case 1:
      return (kPi * kPi * t * t - kPi * t * sn2 - kPi * kPi * t +
              kPi * sn2 / 2.0 - cs2 / 2.0 + 0.5) /
             (sn * sn);
    case 2:
      return 2.0 * kPi *
             (-kPi * kPi * t * t * cs + 2.0 * kPi * t * sn +
              kPi * kPi * t * cs - sn * sn * cs - kPi * sn) /
             (sn * sn * sn);
    case 3:
      return kPi * kPi *
             (2.0 * kPi * kPi * t * t * cs2 + 4.0 * kPi * kPi * t * t -
              6.0 * kPi * t * sn2 - 2.0 * kPi * kPi * t * cs2 -
              4.0 * kPi * kPi * t + 3.0 * kPi * sn2 - 3.0 * cs2 + 3.0) /
             (sn * sn * sn * sn);
    default:
      throw CapabilityError("prawitz m1 derivatives supported up to order 3");
  }
}

double praw_m1_abs(double tau, int q) {
  if (tau >= 1.0) return 0.0;
  if (tau <= 0.5) return praw_m1_halfopen(tau, q);
  // Reflection: m1(t) + m1(1 - t) = 1 on (0, 1).
  const double v = praw_m1_halfopen(1.0 - tau, q);
  if (q == 0) return 1.0 - v;
  return (q % 2 == 0) ? -v : v;
}

double praw_m2_abs(double tau, int q) {
  if (tau >= 1.0) return 0.0;
  switch (q) {
    case 0:
      return -kPi * tau * (1.0 - tau);
    case 1:
      return -kPi * (1.0 - 2.0 * tau);
    case 2:
      return 2.0 * kPi;
    case 3:
      return 0.0;
    default:
      throw CapabilityError("prawitz m2 derivatives supported up to order 3");
  }
}

class PrawitzFilter final : public SmoothingFilter {
 public:
  double m1(double t, int q) const override {
    const double v = praw_m1_abs(std::fabs(t), q);
    return (t < 0.0 && q % 2 != 0) ? -v : v;
  }
  double m2(double t, int q) const override {
    const double v = praw_m2_abs(std::fabs(t), q);
    return (t < 0.0 && q % 2 == 0) ? -v : v;
  }
  double support_radius_m1() const override { return 1.0; }
  double support_radius_m2() const override { return 1.0; }
  int smoothness_order() const override { return 0; }
  int max_derivative_order() const override { return 3; }
  std::complex<double> derivative_jump_at_zero(int q) const override {
    switch (q) {
      case 1:
        return {0.0, 0.0};
      case 2:
        return {0.0, 4.0 * kPi};  // m2'' flips sign across 0
      case 3:
        return {4.0 * kPi * kPi, 0.0};  // from the zeta-series t^3 term
      default:
        return SmoothingFilter::derivative_jump_at_zero(q);
    }
  }
  bool has_kernel() const override { return true; }
  double kernel(double x) const override { return prawitz_kernel(x); }
  std::vector<double> breakpoints() const override {
    return {0.25, 0.5, 1.0};
  }
  std::string name() const override { return "prawitz"; }
  nlohmann::json descriptor() const override {
    return {{"name", "prawitz"},
            {"support_radius", 1.0},
            {"smoothness_order", 0},
            {"max_derivative_order", 3}};
  }
};

constexpr double kM02Kink = 2.0 * kPi;

double m02_kappa_star_compute() {
  auto integrand = [](double x) { return x * m02_density(x); };
  // Smooth apart from the removable seam at 2 pi; split there.
  QuadOptions opt;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-12;
  const double head =
      integrate_real(integrand, 0.0, kM02Kink, opt).value.real() +
      integrate_real(integrand, kM02Kink, 64.0, opt).value.real();
  const double tail =
      integrate_semi_infinite([&](double x) { return integrand(x); }, 64.0,
                              128.0, opt)
          .value.real();
  return 1.0 / (2.0 * (head + tail));
}

double m1_02_abs(double t, int q) {
  if (t >= 1.0) return 0.0;
  const double s2 = std::sin(2.0 * kPi * t), c2 = std::cos(2.0 * kPi * t);
  const double sp = std::sin(kPi * t);
  switch (q) {
    case 0:
      return (2.0 + c2) * (1.0 - t) / 3.0 + s2 / (2.0 * kPi);
    case 1:
      return (2.0 * kPi / 3.0) * (t - 1.0) * s2 - (4.0 / 3.0) * sp * sp;
    case 2:
      return (4.0 * kPi / 3.0) * (kPi * (t - 1.0) * c2 - s2 / 2.0);
    case 3:
      return (8.0 * kPi * kPi * kPi / 3.0) * (1.0 - t) * s2;
    default:
      throw CapabilityError("m02 derivatives supported up to order 3");
  }
}

double m2_02_abs(double t, int q, double kappa) {
  if (t >= 1.0) return 0.0;
  const double s2 = std::sin(2.0 * kPi * t), c2 = std::cos(2.0 * kPi * t);
  const double sp = std::sin(kPi * t);
  switch (q) {
    case 0:
      return (2.0 * kappa / 3.0) *
             (kPi * (t - 1.0) * s2 - 2.0 * sp * sp);
    case 1:
      return (2.0 * kPi * kappa / 3.0) * (2.0 * kPi * (t - 1.0) * c2 - s2);
    case 2:
      return -(8.0 * kPi * kPi * kPi * kappa / 3.0) * (t - 1.0) * s2;
    case 3:
      return -(8.0 * kPi * kPi * kPi * kappa / 3.0) *
             (2.0 * kPi * (t - 1.0) * c2 + s2);
    default:
      throw CapabilityError("m02 derivatives supported up to order 3");
  }
}

class M02Filter final : public SmoothingFilter {
 public:
  explicit M02Filter(double kappa) : kappa_(kappa) {}
  double m1(double t, int q) const override {
    const double v = m1_02_abs(std::fabs(t), q);
    return (t < 0.0 && q % 2 != 0) ? -v : v;
  }
  double m2(double t, int q) const override {
    const double v = m2_02_abs(std::fabs(t), q, kappa_);
    return (t < 0.0 && q % 2 == 0) ? -v : v;
  }
  double support_radius_m1() const override { return 1.0; }
  double support_radius_m2() const override { return 1.0; }
  int smoothness_order() const override { return 3; }
  int max_derivative_order() const override { return 3; }
  bool has_kernel() const override { return true; }
  double kernel(double x) const override {
    return m02_density(x) * (1.0 - kappa_ * x);
  }
  std::vector<double> breakpoints() const override { return {1.0}; }
  std::string name() const override { return "m02"; }
  nlohmann::json descriptor() const override {
    return {{"name", "m02"},
            {"kappa", kappa_},
            {"support_radius", 1.0},
            {"smoothness_order", 3},
            {"max_derivative_order", 3}};
  }

 private:
  double kappa_;
};

}  // namespace

std::complex<double> SmoothingFilter::derivative_jump_at_zero(int q) const {
  if (q < 1 || q > max_derivative_order())
    throw DomainError("derivative_jump_at_zero: order out of range");
  return {0.0, 0.0};
}

double SmoothingFilter::kernel(double) const {
  throw CapabilityError("filter has no closed-form kernel: " + name());
}

std::vector<double> SmoothingFilter::breakpoints() const { return {}; }

std::unique_ptr<SmoothingFilter> prawitz_filter() {
  return std::make_unique<PrawitzFilter>();
}

double prawitz_kernel(double x) {
  // Excluded set {0, -2pi, -4pi, ...}: trigamma poles of the closed form.
  const double n = std::rint(-x / (2.0 * kPi));
  if (n >= 0.0 && std::fabs(x + 2.0 * kPi * n) < 1e-8) {
    const double d = 1e-5;
    return 0.5 * (prawitz_kernel(x - d) + prawitz_kernel(x + d));
  }
  const double u = x / (2.0 * kPi);
  const double psi1 = specfun::digamma_family(u, 1);
  const double psi2 = specfun::digamma_family(u, 2);
  const double sx = std::sin(x), cx = std::cos(x);
  const double num =
      2.0 * kPi * x * sx * (2.0 * kPi * (x + 2.0 * kPi) - x * x * psi1) -
      (1.0 - cx) * (x * x * x * psi2 + 4.0 * kPi * kPi * (x + 4.0 * kPi));
  return num / (4.0 * kPi * kPi * kPi * x * x * x);
}

double m02_density(double x) {
  // (32 pi^3 / 3) (1 - cos x) / (x^2 (x^2 - 4 pi^2)^2) with the removable
  // singularities at 0 and +-2pi evaluated through paired sine ratios:
  // 1 - cos x = 2 sin^2(x/2) and sin^2(x/2) = sin^2((x -+ 2pi)/2).
  constexpr double kC = 32.0 * kPi * kPi * kPi / 3.0;
  auto ratio = [](double u) {  // sin(u/2) / u, finite at 0
    return (u == 0.0) ? 0.5 : std::sin(0.5 * u) / u;
  };
  const double ax = std::fabs(x);
  if (ax < 0.5) {
    const double r = ratio(x);
    const double dm = x - kM02Kink, dp = x + kM02Kink;
    return kC * 2.0 * r * r / (dm * dm * dp * dp);
  }
  if (std::fabs(ax - kM02Kink) < 0.5) {
    const double u = (x > 0.0) ? x - kM02Kink : x + kM02Kink;
    const double r = ratio(u);
    const double other = (x > 0.0) ? x + kM02Kink : x - kM02Kink;
    return kC * 2.0 * r * r / (x * x * other * other);
  }
  const double s = std::sin(0.5 * x);
  const double d = x * x - kM02Kink * kM02Kink;
  return kC * 2.0 * s * s / (x * x * d * d);
}

double m02_kappa_star() {
  static double value = 0.0;
  static std::once_flag flag;
  std::call_once(flag, [] { value = m02_kappa_star_compute(); });
  return value;
}

std::unique_ptr<SmoothingFilter> m02_filter(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw ValidationError("m02_filter: kappa must be positive and finite");
  if (kappa < m02_kappa_star() - 1e-9)
    throw ValidationError("m02_filter: kappa below the critical tilt");
  return std::make_unique<M02Filter>(kappa);
}

}  // namespace cfb
