#pragma once

#include <complex>
#include <memory>
#include <string>

#include "cfbound/lattice.hpp"

#include <nlohmann/json.hpp>

namespace cfb {

// Symbolic description of a law. Specs are small immutable values; the
// recursive standardized_iid_sum case holds its base by shared pointer.
class DistributionSpec {
 public:
  enum class Kind { point_mass, normal, two_point, lattice_pmf, iid_sum };

  static DistributionSpec point_mass(double a);
  static DistributionSpec normal(double mean, double sd);
  static DistributionSpec two_point(double x_minus, double x_plus,
                                    double p_plus);
  static DistributionSpec lattice(LatticePMF pmf);
  // Law of (X_1 + ... + X_n) / (sd(base) * sqrt(n)); base must be zero-mean
  // with positive variance.
  static DistributionSpec standardized_iid_sum(DistributionSpec base, int n);

  Kind kind() const { return kind_; }
  double param_a() const { return a_; }
  double param_mean() const { return mean_; }
  double param_sd() const { return sd_; }
  double param_x_minus() const { return x_minus_; }
  double param_x_plus() const { return x_plus_; }
  double param_p_plus() const { return p_plus_; }
  const LatticePMF& lattice_pmf() const;
  const DistributionSpec& base() const;
  int iid_n() const { return n_; }

  double mean() const;
  double variance() const;

  // Exact finite-support law of this spec, when one exists (everything except
  // the normal kind). Throws CapabilityError otherwise. iid sums are
  // convolved on demand under the given atom budget.
  LatticePMF exact_lattice(std::size_t budget = 4000000) const;
  bool has_exact_lattice() const;

  nlohmann::json to_json() const;
  static DistributionSpec from_json(const nlohmann::json& j);
  static DistributionSpec parse(const std::string& text);

 private:
  DistributionSpec() = default;
  Kind kind_ = Kind::point_mass;
  double a_ = 0.0;
  double mean_ = 0.0, sd_ = 1.0;
  double x_minus_ = 0.0, x_plus_ = 0.0, p_plus_ = 0.0;
  std::shared_ptr<const LatticePMF> pmf_;
  std::shared_ptr<const DistributionSpec> base_;
  int n_ = 0;
};

// Evaluates f(t) = E e^{itX} and derivatives f^(j) up to a declared order,
// in closed form for every spec kind. Stateless after construction, so a
// shared instance is safe under concurrent reads.
class CharFnEvaluator {
 public:
  explicit CharFnEvaluator(DistributionSpec spec, int max_order = 3);

  std::complex<double> operator()(double t) const { return derivative(t, 0); }
  std::complex<double> derivative(double t, int order) const;

  // E |X|^j, exact. Lattice-backed specs sum atom powers (iid sums convolve
  // on demand, budget-capped); centered normals use the closed form. Orders
  // the spec cannot deliver exactly raise CapabilityError.
  double absolute_moment(int j) const;

  // f(t) - e^{-t^2/2}; requires a standardized (mean 0, variance 1) spec.
  std::complex<double> cf_difference(double t) const;

  bool standardized() const;
  int max_derivative_order() const { return max_order_; }
  const DistributionSpec& spec() const { return spec_; }

 private:
  DistributionSpec spec_;
  int max_order_;
  // iid_sum plumbing: evaluator for the base law and B = sd * sqrt(n).
  std::shared_ptr<const CharFnEvaluator> base_eval_;
  double scale_b_ = 1.0;
};

}  // namespace cfb
