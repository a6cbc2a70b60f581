#pragma once

#include <cstddef>
#include <vector>

namespace cfb {

// A finitely supported law on the arithmetic grid offset + i * step. Weights
// are validated (nonnegative, total mass 1 within 1e-14) and zero-trimmed at
// construction; instances are immutable afterwards. Prefix and suffix sums
// are precomputed with compensated accumulation so point queries are exact
// to roundoff.
class LatticePMF {
 public:
  LatticePMF(double offset, double step, std::vector<double> weights);

  double offset() const { return offset_; }
  double step() const { return step_; }
  std::size_t size() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  double atom(std::size_t i) const { return offset_ + step_ * i; }
  double weight(std::size_t i) const { return weights_[i]; }

  // Index-based one-sided tails: P(X >= atom(i)) and P(X > atom(i)).
  double sf_ge_index(std::size_t i) const;
  double sf_gt_index(std::size_t i) const;

  // Point queries; x is snapped to the nearest atom when within
  // 1e-12 * step of it, so exact-arithmetic call sites never fall on the
  // wrong side of an atom by roundoff.
  double cdf_lt(double x) const;
  double cdf_le(double x) const;
  double sf_gt(double x) const;
  double sf_ge(double x) const;

  double mean() const { return mean_; }
  double variance() const { return variance_; }
  // E |X|^j for integer j >= 0.
  double abs_moment(int j) const;
  // E X^j.
  double moment(int j) const;

  // Returns a copy with atoms mapped to (atom - shift) / scale.
  LatticePMF standardized(double shift, double scale) const;

 private:
  double offset_;
  double step_;
  std::vector<double> weights_;
  std::vector<double> suffix_;  // suffix_[i] = P(X >= atom(i))
  double mean_;
  double variance_;
};

// Exact n-fold iid convolution. Cost is O(n * |support|^2) scalar work and
// the result has n * (|base| - 1) + 1 atoms; budget caps that size.
LatticePMF convolve_iid(const LatticePMF& base, int n,
                        std::size_t budget = 4000000);

}  // namespace cfb
