#include "cfbound/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "cfbound/errors.hpp"
#include "cfbound/rng.hpp"

namespace cfb {
namespace {

using Support = std::array<double, 4>;
using Probs = std::array<double, 4>;

std::array<double, 4> residuals_of(const Support& xs, const Probs& ps,
                                   double rho) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  for (int j = 0; j < 4; ++j) {
    const double x = xs[j], p = ps[j];
    s0 += p;
    s1 += p * x;
    s2 += p * x * x;
    s3 += p * std::fabs(x) * x * x;
  }
  return {s0 - 1.0, s1, s2 - 1.0, s3 - rho};
}

bool residuals_ok(const std::array<double, 4>& r, double tol) {
  for (double v : r)
    if (std::fabs(v) > tol) return false;
  return true;
}

// Probabilities from the four affine moment constraints at fixed support.
std::optional<Probs> solve_four(const Support& xs, double rho) {
  double a[4][5];
  for (int j = 0; j < 4; ++j) {
    const double x = xs[j];
    a[0][j] = 1.0;
    a[1][j] = x;
    a[2][j] = x * x;
    a[3][j] = std::fabs(x) * x * x;
  }
  a[0][4] = 1.0;
  a[1][4] = 0.0;
  a[2][4] = 1.0;
  a[3][4] = rho;
  for (int c = 0; c < 4; ++c) {
    int piv = c;
    for (int r = c + 1; r < 4; ++r)
      if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
    if (std::fabs(a[piv][c]) < 1e-10) return std::nullopt;
    if (piv != c)
      for (int k = c; k < 5; ++k) std::swap(a[piv][k], a[c][k]);
    for (int r = c + 1; r < 4; ++r) {
      const double m = a[r][c] / a[c][c];
      for (int k = c; k < 5; ++k) a[r][k] -= m * a[c][k];
    }
  }
  Probs p{};
  for (int r = 3; r >= 0; --r) {
    double acc = a[r][4];
    for (int k = r + 1; k < 4; ++k) acc -= a[r][k] * p[k];
    p[r] = acc / a[r][r];
  }
  for (double v : p)
    if (!(v >= -1e-12)) return std::nullopt;
  for (double& v : p) v = std::max(v, 0.0);
  if (!residuals_ok(residuals_of(xs, p, rho), 1e-9)) return std::nullopt;
  return p;
}

// Fallback when the 4-point solve exits the simplex: drop one atom, solve the
// first three constraints on the remaining three, and keep the candidate only
// if the cubic-moment constraint happens to hold as well.
std::optional<Probs> solve_drop_one(const Support& xs, double rho) {
  for (int drop = 0; drop < 4; ++drop) {
    int idx[3], m = 0;
    for (int j = 0; j < 4; ++j)
      if (j != drop) idx[m++] = j;
    double a[3][4];
    for (int c = 0; c < 3; ++c) {
      const double x = xs[idx[c]];
      a[0][c] = 1.0;
      a[1][c] = x;
      a[2][c] = x * x;
    }
    a[0][3] = 1.0;
    a[1][3] = 0.0;
    a[2][3] = 1.0;
    bool singular = false;
    for (int c = 0; c < 3 && !singular; ++c) {
      int piv = c;
      for (int r = c + 1; r < 3; ++r)
        if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
      if (std::fabs(a[piv][c]) < 1e-10) {
        singular = true;
        break;
      }
      if (piv != c)
        for (int k = c; k < 4; ++k) std::swap(a[piv][k], a[c][k]);
      for (int r = c + 1; r < 3; ++r) {
        const double mm = a[r][c] / a[c][c];
        for (int k = c; k < 4; ++k) a[r][k] -= mm * a[c][k];
      }
    }
    if (singular) continue;
    double q[3];
    for (int r = 2; r >= 0; --r) {
      double acc = a[r][3];
      for (int k = r + 1; k < 3; ++k) acc -= a[r][k] * q[k];
      q[r] = acc / a[r][r];
    }
    Probs p{};
    bool ok = true;
    for (int c = 0; c < 3; ++c) {
      if (!(q[c] >= -1e-12)) ok = false;
      p[idx[c]] = std::max(q[c], 0.0);
    }
    if (!ok) continue;
    if (residuals_ok(residuals_of(xs, p, rho), 1e-8)) return p;
  }
  return std::nullopt;
}

std::optional<Probs> feasible_probs(const Support& xs, double rho) {
  if (auto p = solve_four(xs, rho)) return p;
  return solve_drop_one(xs, rho);
}

struct Problem {
  double t;
  double rho;
  bool gap;
  double g;  // e^{-t^2/2} when gap, else 0

  double objective(const Support& xs, const Probs& ps) const {
    double c = 0.0, s = 0.0;
    for (int j = 0; j < 4; ++j) {
      c += ps[j] * std::cos(t * xs[j]);
      s += ps[j] * std::sin(t * xs[j]);
    }
    return std::hypot(c - g, s);
  }
  double theta_star(const Support& xs, const Probs& ps) const {
    double c = 0.0, s = 0.0;
    for (int j = 0; j < 4; ++j) {
      c += ps[j] * std::cos(t * xs[j]);
      s += ps[j] * std::sin(t * xs[j]);
    }
    return std::atan2(s, c - g);
  }
};

struct Best {
  double value = -1.0;
  Support xs{};
  Probs ps{};
};

// Centered-two-point member with E|X|^3 = rho: atoms sqrt(q/p), -sqrt(p/q)
// give rho(p) = (p^2 + q^2) / sqrt(pq), decreasing on (0, 1/2].
double two_point_p(double rho) {
  double lo = 1e-15, hi = 0.5;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi), q = 1.0 - mid;
    const double r = (mid * mid + q * q) / std::sqrt(mid * q);
    if (r > rho)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

void spread_out(Support& xs) {
  // coordinate descent degenerates if two atoms collide; nudge apart
  for (int pass = 0; pass < 4; ++pass)
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (std::fabs(xs[i] - xs[j]) < 1e-3) xs[j] += 2e-3 + 1e-3 * j;
}

EnvelopeSolution optimize(double t, double rho, int budget, bool gap) {
  if (!std::isfinite(t)) throw ValidationError("envelope: t must be finite");
  if (!std::isfinite(rho) || rho < 1.0)
    throw DomainError(
        "envelope: rho must be >= 1 (E|X|^3 >= (E X^2)^{3/2} = 1)");
  if (budget < 100) budget = 100;

  const Problem prob{t, rho, gap, gap ? std::exp(-0.5 * t * t) : 0.0};
  long evals = 0;
  Best best;

  auto consider = [&](const Support& xs) {
    ++evals;
    const auto p = feasible_probs(xs, rho);
    if (!p) return -1.0;
    const double v = prob.objective(xs, *p);
    if (v > best.value) {
      best.value = v;
      best.xs = xs;
      best.ps = *p;
    }
    return v;
  };

  // Golden-section ascent in one coordinate.
  auto line_max = [&](Support xs, int j, double w) {
    const double phi = 0.6180339887498949;
    double a = xs[j] - w, b = xs[j] + w;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    auto at = [&](double v) {
      Support trial = xs;
      trial[j] = v;
      return consider(trial);
    };
    double f1 = at(x1), f2 = at(x2);
    for (int it = 0; it < 24; ++it) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + phi * (b - a);
        f2 = at(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - phi * (b - a);
        f1 = at(x1);
      }
    }
    xs[j] = 0.5 * (a + b);
    consider(xs);
    return xs;
  };

  auto polish = [&](Support xs) {
    double w = 1.5;
    double prev = consider(xs);
    for (int pass = 0; pass < 14 && evals < budget; ++pass) {
      for (int j = 0; j < 4; ++j) xs = line_max(xs, j, w);
      const auto p = feasible_probs(xs, rho);
      const double cur = p ? prob.objective(xs, *p) : -1.0;
      if (cur < prev + 1e-12) w *= 0.55;
      prev = std::max(prev, cur);
      if (w < 1e-7) break;
    }
  };

  const double p2 = two_point_p(rho);
  const double q2 = 1.0 - p2;
  const double xp = std::sqrt(q2 / p2), xm = -std::sqrt(p2 / q2);

  std::vector<Support> seeds;
  seeds.push_back({xm, xp, xp + 2.5, xm - 3.5});
  seeds.push_back({-rho, 0.0, rho, rho + 2.0});
  for (double L : {5.0, 10.0, 30.0, 100.0})
    seeds.push_back({-L, xm, xp, L});
  SplitMix64 rng(0x5eedc0de01234567ULL);
  const int randoms = 16;
  for (int r = 0; r < randoms; ++r)
    seeds.push_back({rng.uniform(-4.0, -0.05), rng.uniform(0.05, 4.0),
                     rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)});

  for (auto& xs : seeds) {
    spread_out(xs);
    consider(xs);
  }
  // Re-polish from the promising seeds while budget lasts.
  for (auto& xs : seeds) {
    if (evals >= budget) break;
    spread_out(xs);
    polish(xs);
  }

  if (best.value < 0.0)
    throw ConstructionError("envelope: no feasible support found");

  EnvelopeSolution sol;
  sol.t = t;
  sol.rho = rho;
  sol.theta = prob.theta_star(best.xs, best.ps);
  // Publish only atoms that carry weight; the dropped ones perturb the
  // moment sums by < 1e-10 each.
  Probs pub = best.ps;
  for (int j = 0; j < 4; ++j) {
    const double ax = std::fabs(best.xs[j]);
    if (pub[j] * std::max(1.0, ax * ax * ax) < 1e-10) pub[j] = 0.0;
  }
  sol.value = prob.objective(best.xs, pub);
  sol.theta = prob.theta_star(best.xs, pub);
  sol.constraint_residuals = residuals_of(best.xs, pub, rho);
  for (int j = 0; j < 4; ++j)
    if (pub[j] > 0.0) sol.support.push_back({best.xs[j], pub[j]});
  std::sort(sol.support.begin(), sol.support.end(),
            [](const EnvelopeAtom& a, const EnvelopeAtom& b) {
              return a.x < b.x;
            });
  return sol;
}

}  // namespace

nlohmann::json EnvelopeSolution::to_json() const {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& a : support) atoms.push_back({{"x", a.x}, {"p", a.p}});
  return {{"t", t},
          {"rho", rho},
          {"value", value},
          {"theta", theta},
          {"support", atoms},
          {"constraint_residuals", constraint_residuals}};
}

EnvelopeSolution cf_envelope(double t, double rho, int budget) {
  return optimize(t, rho, budget, false);
}

EnvelopeSolution cf_normal_gap_envelope(double t, double rho, int budget) {
  return optimize(t, rho, budget, true);
}

}  // namespace cfb
