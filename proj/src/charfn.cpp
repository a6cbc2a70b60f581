#include "cfbound/charfn.hpp"

#include <cmath>

#include "cfbound/errors.hpp"

namespace cfb {
namespace {

constexpr double kTwoOverPiSqrt = 0.7978845608028653558798921198687637;  // sqrt(2/pi)
const std::complex<double> kI{0.0, 1.0};

void require_finite(double v, const char* what) {
  if (!std::isfinite(v))
    throw ValidationError(std::string("DistributionSpec: non-finite ") + what);
}

// (iz)^k by repeated multiplication: std::pow's exp-log route returns NaN for
// 0^0, which a zero atom with order 0 would hit.
std::complex<double> ipow(std::complex<double> z, int k) {
  std::complex<double> r = 1.0;
  for (int i = 0; i < k; ++i) r *= z;
  return r;
}

std::complex<double> cpow_nonneg(std::complex<double> z, double e) {
  if (e == 0.0) return 1.0;
  if (z == std::complex<double>(0.0, 0.0)) return 0.0;
  return std::pow(z, e);
}

}  // namespace

DistributionSpec DistributionSpec::point_mass(double a) {
  require_finite(a, "point mass location");
  DistributionSpec s;
  s.kind_ = Kind::point_mass;
  s.a_ = a;
  return s;
}

DistributionSpec DistributionSpec::normal(double mean, double sd) {
  require_finite(mean, "mean");
  require_finite(sd, "sd");
  if (!(sd > 0.0)) throw ValidationError("DistributionSpec: sd must be positive");
  DistributionSpec s;
  s.kind_ = Kind::normal;
  s.mean_ = mean;
  s.sd_ = sd;
  return s;
}

DistributionSpec DistributionSpec::two_point(double x_minus, double x_plus,
                                             double p_plus) {
  require_finite(x_minus, "x_minus");
  require_finite(x_plus, "x_plus");
  require_finite(p_plus, "p_plus");
  if (!(x_minus < x_plus))
    throw ValidationError("DistributionSpec: need x_minus < x_plus");
  if (!(0.0 < p_plus && p_plus < 1.0))
    throw ValidationError("DistributionSpec: need 0 < p_plus < 1");
  DistributionSpec s;
  s.kind_ = Kind::two_point;
  s.x_minus_ = x_minus;
  s.x_plus_ = x_plus;
  s.p_plus_ = p_plus;
  return s;
}

DistributionSpec DistributionSpec::lattice(LatticePMF pmf) {
  DistributionSpec s;
  s.kind_ = Kind::lattice_pmf;
  s.pmf_ = std::make_shared<const LatticePMF>(std::move(pmf));
  return s;
}

DistributionSpec DistributionSpec::standardized_iid_sum(DistributionSpec base,
                                                        int n) {
  if (n < 1) throw ValidationError("standardized_iid_sum: n must be >= 1");
  const double mu = base.mean();
  const double var = base.variance();
  if (std::abs(mu) > 1e-12 * std::max(1.0, std::sqrt(var)))
    throw ValidationError("standardized_iid_sum: base must have zero mean");
  if (!(var > 0.0))
    throw ValidationError("standardized_iid_sum: base must have positive variance");
  DistributionSpec s;
  s.kind_ = Kind::iid_sum;
  s.base_ = std::make_shared<const DistributionSpec>(std::move(base));
  s.n_ = n;
  return s;
}

const LatticePMF& DistributionSpec::lattice_pmf() const {
  if (kind_ != Kind::lattice_pmf)
    throw CapabilityError("DistributionSpec: not a lattice spec");
  return *pmf_;
}

const DistributionSpec& DistributionSpec::base() const {
  if (kind_ != Kind::iid_sum)
    throw CapabilityError("DistributionSpec: not an iid sum");
  return *base_;
}

double DistributionSpec::mean() const {
  switch (kind_) {
    case Kind::point_mass: return a_;
    case Kind::normal: return mean_;
    case Kind::two_point:
      return p_plus_ * x_plus_ + (1.0 - p_plus_) * x_minus_;
    case Kind::lattice_pmf: return pmf_->mean();
    case Kind::iid_sum: return 0.0;
  }
  return 0.0;
}

double DistributionSpec::variance() const {
  switch (kind_) {
    case Kind::point_mass: return 0.0;
    case Kind::normal: return sd_ * sd_;
    case Kind::two_point: {
      const double m = mean();
      return p_plus_ * (x_plus_ - m) * (x_plus_ - m) +
             (1.0 - p_plus_) * (x_minus_ - m) * (x_minus_ - m);
    }
    case Kind::lattice_pmf: return pmf_->variance();
    case Kind::iid_sum: return 1.0;
  }
  return 0.0;
}

bool DistributionSpec::has_exact_lattice() const {
  switch (kind_) {
    case Kind::normal: return false;
    case Kind::iid_sum: return base_->has_exact_lattice();
    default: return true;
  }
}

LatticePMF DistributionSpec::exact_lattice(std::size_t budget) const {
  switch (kind_) {
    case Kind::point_mass:
      return LatticePMF(a_, 1.0, {1.0});
    case Kind::normal:
      throw CapabilityError("exact_lattice: normal law has no lattice support");
    case Kind::two_point:
      return LatticePMF(x_minus_, x_plus_ - x_minus_,
                        {1.0 - p_plus_, p_plus_});
    case Kind::lattice_pmf:
      return *pmf_;
    case Kind::iid_sum: {
      const LatticePMF base = base_->exact_lattice(budget);
      const double b = std::sqrt(base.variance() * n_);
      return convolve_iid(base, n_, budget).standardized(0.0, b);
    }
  }
  throw CapabilityError("exact_lattice: unknown kind");
}

nlohmann::json DistributionSpec::to_json() const {
  nlohmann::json j;
  switch (kind_) {
    case Kind::point_mass:
      j["kind"] = "point_mass";
      j["a"] = a_;
      break;
    case Kind::normal:
      j["kind"] = "normal";
      j["mean"] = mean_;
      j["sd"] = sd_;
      break;
    case Kind::two_point:
      j["kind"] = "two_point";
      j["x_minus"] = x_minus_;
      j["x_plus"] = x_plus_;
      j["p_plus"] = p_plus_;
      break;
    case Kind::lattice_pmf:
      j["kind"] = "lattice_pmf";
      j["offset"] = pmf_->offset();
      j["step"] = pmf_->step();
      j["weights"] = pmf_->weights();
      break;
    case Kind::iid_sum:
      j["kind"] = "standardized_iid_sum";
      j["n"] = n_;
      j["base"] = base_->to_json();
      break;
  }
  return j;
}

namespace {

double json_number(const nlohmann::json& j, const char* field) {
  if (!j.contains(field))
    throw ValidationError(std::string("spec JSON: missing field '") + field +
                          "'");
  if (!j[field].is_number())
    throw ValidationError(std::string("spec JSON: field '") + field +
                          "' must be a number");
  return j[field].get<double>();
}

}  // namespace

DistributionSpec DistributionSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw ValidationError("spec JSON: expected an object with a 'kind' string");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "point_mass") return point_mass(json_number(j, "a"));
  if (kind == "normal")
    return normal(json_number(j, "mean"), json_number(j, "sd"));
  if (kind == "two_point")
    return two_point(json_number(j, "x_minus"), json_number(j, "x_plus"),
                     json_number(j, "p_plus"));
  if (kind == "lattice_pmf") {
    if (!j.contains("weights") || !j["weights"].is_array())
      throw ValidationError("spec JSON: field 'weights' must be an array");
    std::vector<double> w;
    for (const auto& e : j["weights"]) {
      if (!e.is_number())
        throw ValidationError("spec JSON: 'weights' entries must be numbers");
      w.push_back(e.get<double>());
    }
    return lattice(LatticePMF(json_number(j, "offset"),
                              json_number(j, "step"), std::move(w)));
  }
  if (kind == "standardized_iid_sum") {
    if (!j.contains("n") || !j["n"].is_number_integer())
      throw ValidationError("spec JSON: field 'n' must be an integer");
    if (!j.contains("base"))
      throw ValidationError("spec JSON: missing field 'base'");
    return standardized_iid_sum(from_json(j["base"]), j["n"].get<int>());
  }
  throw ValidationError("spec JSON: unknown kind '" + kind + "'");
}

DistributionSpec DistributionSpec::parse(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("spec JSON: ") + e.what());
  }
  return from_json(j);
}

CharFnEvaluator::CharFnEvaluator(DistributionSpec spec, int max_order)
    : spec_(std::move(spec)), max_order_(max_order) {
  if (max_order_ < 0 || max_order_ > 3)
    throw CapabilityError("CharFnEvaluator: supported derivative orders are 0..3");
  if (spec_.kind() == DistributionSpec::Kind::iid_sum) {
    base_eval_ = std::make_shared<const CharFnEvaluator>(spec_.base(), max_order_);
    scale_b_ = std::sqrt(spec_.base().variance() * spec_.iid_n());
  }
}

std::complex<double> CharFnEvaluator::derivative(double t, int order) const {
  if (order < 0 || order > max_order_)
    throw CapabilityError("CharFnEvaluator: derivative order above declared maximum");
  if (!std::isfinite(t)) throw DomainError("CharFnEvaluator: non-finite t");

  using Kind = DistributionSpec::Kind;
  switch (spec_.kind()) {
    case Kind::point_mass: {
      const double a = spec_.param_a();
      const std::complex<double> e{std::cos(t * a), std::sin(t * a)};
      return ipow(kI * a, order) * e;
    }
    case Kind::normal: {
      const double mu = spec_.param_mean();
      const double s2 = spec_.param_sd() * spec_.param_sd();
      const std::complex<double> f =
          std::exp(std::complex<double>(-0.5 * s2 * t * t, mu * t));
      const std::complex<double> w = kI * mu - s2 * t;
      switch (order) {
        case 0: return f;
        case 1: return w * f;
        case 2: return (w * w - s2) * f;
        default: return (w * w * w - 3.0 * s2 * w) * f;
      }
    }
    case Kind::two_point: {
      const double xs[2] = {spec_.param_x_minus(), spec_.param_x_plus()};
      const double ws[2] = {1.0 - spec_.param_p_plus(), spec_.param_p_plus()};
      std::complex<double> sum = 0.0;
      for (int i = 0; i < 2; ++i)
        sum += ws[i] * ipow(kI * xs[i], order) *
               std::complex<double>(std::cos(t * xs[i]), std::sin(t * xs[i]));
      return sum;
    }
    case Kind::lattice_pmf: {
      const LatticePMF& p = spec_.lattice_pmf();
      // Accumulate real and imaginary parts with compensation; the terms
      // alternate in sign and partial cancellation is the common case.
      double re = 0.0, im = 0.0, cre = 0.0, cim = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        const double x = p.atom(i);
        const std::complex<double> term =
            p.weight(i) * ipow(kI * x, order) *
            std::complex<double>(std::cos(t * x), std::sin(t * x));
        double y = term.real(), s = re + y;
        cre += (std::abs(re) >= std::abs(y)) ? (re - s) + y : (y - s) + re;
        re = s;
        y = term.imag();
        s = im + y;
        cim += (std::abs(im) >= std::abs(y)) ? (im - s) + y : (y - s) + im;
        im = s;
      }
      return {re + cre, im + cim};
    }
    case Kind::iid_sum: {
      // F(t) = f(u)^n with u = t/B; derivatives by the chain/product rule.
      const double n = spec_.iid_n();
      const double u = t / scale_b_;
      const std::complex<double> f0 = base_eval_->derivative(u, 0);
      if (order == 0) return cpow_nonneg(f0, n);
      const std::complex<double> f1 = base_eval_->derivative(u, 1);
      if (order == 1) return n * cpow_nonneg(f0, n - 1) * f1 / scale_b_;
      const std::complex<double> f2 = base_eval_->derivative(u, 2);
      if (order == 2) {
        std::complex<double> v = n * cpow_nonneg(f0, n - 1) * f2;
        if (n >= 2) v += n * (n - 1.0) * cpow_nonneg(f0, n - 2) * f1 * f1;
        return v / (scale_b_ * scale_b_);
      }
      const std::complex<double> f3 = base_eval_->derivative(u, 3);
      std::complex<double> v = n * cpow_nonneg(f0, n - 1) * f3;
      if (n >= 2) v += 3.0 * n * (n - 1.0) * cpow_nonneg(f0, n - 2) * f1 * f2;
      if (n >= 3)
        v += n * (n - 1.0) * (n - 2.0) * cpow_nonneg(f0, n - 3) * f1 * f1 * f1;
      return v / (scale_b_ * scale_b_ * scale_b_);
    }
  }
  throw CapabilityError("CharFnEvaluator: unknown kind");
}

double CharFnEvaluator::absolute_moment(int j) const {
  if (j < 0) throw DomainError("absolute_moment: negative order");
  if (j == 0) return 1.0;
  using Kind = DistributionSpec::Kind;
  if (spec_.kind() == Kind::normal) {
    const double mu = spec_.param_mean();
    const double sd = spec_.param_sd();
    if (mu == 0.0) {
      // E|Z|^j closed forms for j <= 3.
      switch (j) {
        case 1: return sd * kTwoOverPiSqrt;
        case 2: return sd * sd;
        case 3: return 2.0 * sd * sd * sd * kTwoOverPiSqrt;
        default:
          throw CapabilityError("absolute_moment: normal orders above 3");
      }
    }
    if (j == 2) return mu * mu + sd * sd;
    throw CapabilityError(
        "absolute_moment: odd absolute moments of a shifted normal are not "
        "available in closed form");
  }
  return spec_.exact_lattice().abs_moment(j);
}

bool CharFnEvaluator::standardized() const {
  return std::abs(spec_.mean()) <= 1e-9 &&
         std::abs(spec_.variance() - 1.0) <= 1e-9;
}

std::complex<double> CharFnEvaluator::cf_difference(double t) const {
  if (!standardized())
    throw DomainError("cf_difference: spec must have mean 0 and variance 1");
  return derivative(t, 0) - std::exp(std::complex<double>(-0.5 * t * t, 0.0));
}

}  // namespace cfb
