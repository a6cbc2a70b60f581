#include "cfbound/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cfbound/errors.hpp"

namespace cfb {
namespace {

// Neumaier's variant of compensated summation: exact enough that 10^6-term
// probability vectors keep ~1e-16 accumulated error.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

LatticePMF::LatticePMF(double offset, double step, std::vector<double> weights)
    : offset_(offset), step_(step), weights_(std::move(weights)) {
  if (!(step_ > 0.0) || !std::isfinite(step_) || !std::isfinite(offset_))
    throw ValidationError("LatticePMF: step must be positive and finite");
  if (weights_.empty()) throw ValidationError("LatticePMF: empty support");

  std::size_t lead = 0;
  while (lead < weights_.size() && weights_[lead] == 0.0) ++lead;
  std::size_t trail = weights_.size();
  while (trail > lead && weights_[trail - 1] == 0.0) --trail;
  if (lead == trail) throw ValidationError("LatticePMF: all weights zero");
  if (lead > 0 || trail < weights_.size()) {
    offset_ += step_ * lead;
    weights_ = std::vector<double>(weights_.begin() + lead,
                                   weights_.begin() + trail);
  }

  CompensatedSum mass;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw ValidationError("LatticePMF: weights must be nonnegative");
    mass.add(w);
  }
  if (std::abs(mass.value() - 1.0) > 1e-14)
    throw ValidationError("LatticePMF: weights sum to " +
                          std::to_string(mass.value()) + ", not 1");

  suffix_.resize(weights_.size() + 1, 0.0);
  CompensatedSum tail;
  for (std::size_t i = weights_.size(); i-- > 0;) {
    tail.add(weights_[i]);
    suffix_[i] = std::min(1.0, tail.value());
  }

  CompensatedSum m1, m2;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    m1.add(weights_[i] * atom(i));
    m2.add(weights_[i] * atom(i) * atom(i));
  }
  mean_ = m1.value();
  variance_ = m2.value() - mean_ * mean_;
}

double LatticePMF::sf_ge_index(std::size_t i) const {
  return i < suffix_.size() ? suffix_[i] : 0.0;
}

double LatticePMF::sf_gt_index(std::size_t i) const {
  return i + 1 < suffix_.size() ? suffix_[i + 1] : 0.0;
}

namespace {

// Index of the first atom >= x, with a snap window so values computed as
// offset + k*step in slightly different orders still classify as the atom.
std::size_t first_atom_ge(double x, double offset, double step,
                          std::size_t n) {
  const double pos = (x - offset) / step;
  const double snap = 1e-12 * std::max(1.0, std::abs(pos));
  double idx = std::ceil(pos - snap);
  if (idx < 0.0) return 0;
  if (idx >= static_cast<double>(n)) return n;
  return static_cast<std::size_t>(idx);
}

std::size_t first_atom_gt(double x, double offset, double step,
                          std::size_t n) {
  const double pos = (x - offset) / step;
  const double snap = 1e-12 * std::max(1.0, std::abs(pos));
  double idx = std::floor(pos + snap) + 1.0;
  if (idx < 0.0) return 0;
  if (idx >= static_cast<double>(n)) return n;
  return static_cast<std::size_t>(idx);
}

}  // namespace

double LatticePMF::sf_ge(double x) const {
  return suffix_[first_atom_ge(x, offset_, step_, size())];
}

double LatticePMF::sf_gt(double x) const {
  return suffix_[first_atom_gt(x, offset_, step_, size())];
}

double LatticePMF::cdf_lt(double x) const { return 1.0 - sf_ge(x); }

double LatticePMF::cdf_le(double x) const { return 1.0 - sf_gt(x); }

double LatticePMF::abs_moment(int j) const {
  if (j < 0) throw DomainError("abs_moment: negative order");
  CompensatedSum s;
  for (std::size_t i = 0; i < size(); ++i)
    s.add(weights_[i] * std::pow(std::abs(atom(i)), j));
  return s.value();
}

double LatticePMF::moment(int j) const {
  if (j < 0) throw DomainError("moment: negative order");
  CompensatedSum s;
  for (std::size_t i = 0; i < size(); ++i)
    s.add(weights_[i] * std::pow(atom(i), j));
  return s.value();
}

LatticePMF LatticePMF::standardized(double shift, double scale) const {
  if (!(scale > 0.0)) throw DomainError("standardized: scale must be positive");
  return LatticePMF((offset_ - shift) / scale, step_ / scale, weights_);
}

LatticePMF convolve_iid(const LatticePMF& base, int n, std::size_t budget) {
  if (n < 1) throw DomainError("convolve_iid: n must be >= 1");
  const std::size_t m = base.size();
  const std::size_t out_size = static_cast<std::size_t>(n) * (m - 1) + 1;
  if (out_size > budget)
    throw ResourceError("convolve_iid: result support of " +
                        std::to_string(out_size) + " atoms exceeds budget");

  std::vector<double> acc(base.weights());
  std::vector<double> next;
  for (int round = 1; round < n; ++round) {
    next.assign(acc.size() + m - 1, 0.0);
    std::vector<double> comp(next.size(), 0.0);
    for (std::size_t i = 0; i < acc.size(); ++i) {
      if (acc[i] == 0.0) continue;
      for (std::size_t j = 0; j < m; ++j) {
        const double x = acc[i] * base.weight(j);
        double& s = next[i + j];
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
          comp[i + j] += (s - t) + x;
        else
          comp[i + j] += (x - t) + s;
        s = t;
      }
    }
    for (std::size_t i = 0; i < next.size(); ++i) next[i] += comp[i];
    acc.swap(next);
  }

  CompensatedSum mass;
  for (double w : acc) mass.add(w);
  if (std::abs(mass.value() - 1.0) > 1e-12)
    throw Error("convolve_iid: mass drifted to " + std::to_string(mass.value()));
  // Renormalize the ~1e-15 residue so the constructor's 1e-14 gate passes
  // even after thousands of rounds.
  const double inv = 1.0 / mass.value();
  for (double& w : acc) w *= inv;

  return LatticePMF(base.offset() * n, base.step(), std::move(acc));
}

}  // namespace cfb
