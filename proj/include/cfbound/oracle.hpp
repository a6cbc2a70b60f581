#pragma once

#include <cstdint>
#include <vector>

#include "cfbound/charfn.hpp"
#include "cfbound/filters.hpp"
#include "cfbound/inversion.hpp"

namespace cfb {

// Exact normal-approximation error profile for the standardized sum of n
// iid copies of a base law: delta(z) = |P(S > B z) - normal_tail(z)| with
// B = sd(X_1) sqrt(n). rho is the third absolute moment of the standardized
// summand (the Lyapunov ratio numerator after scaling sd to 1), so
// sup_uniform = sup sqrt(n) delta / rho and
// sup_nonuniform = sup_{z >= 0} (1 + z^3) sqrt(n) delta / rho are the
// quantities the classical uniform and nonuniform constants bound.
struct DeltaScan {
  std::vector<double> z_grid;
  std::vector<double> delta;
  double rho = 0.0;
  double b_scale = 0.0;
  double sup_uniform = 0.0;
  double sup_nonuniform = 0.0;
};

// Evaluates delta over the given grid augmented with every atom of the exact
// n-fold convolution (one entry per side, since the survival function jumps
// there) and a fill grid between adjacent atoms, where the lattice tail is
// constant but the normal tail is not. Base must be zero-mean; a normal base
// short-circuits to delta = 0.
DeltaScan delta_scan(const DistributionSpec& base, int n,
                     const std::vector<double>& z_grid);

// sup sqrt(n) delta / rho for the two-point law with p = 2 - sqrt(10)/2
// (atoms 1-p and -p), per n. The sequence climbs toward
// (3 + sqrt(10)) / (6 sqrt(2 pi)) = 0.409732... as n grows.
std::vector<double> esseen_constant_scan(const std::vector<int>& n_list);

struct AuditOptions {
  // tail_bound orders to audit alongside the CDF brackets (only x > 0 grid
  // points participate); empty means CDF brackets only.
  std::vector<int> tail_ks;
  PVQuadratureConfig quad;
};

struct AuditReport {
  int cdf_points_checked = 0;
  int tail_points_checked = 0;
  // Worst bracket breach seen, before the quadrature-error allowance.
  double worst_violation = 0.0;
  double worst_x = 0.0;
  double max_width = 0.0;
};

// Checks prawitz_cdf_bounds (and tail_bound, per opts.tail_ks) against the
// exact lattice law at every grid point. A bracket breach beyond the
// reported quadrature error plus the configured tolerance raises
// AuditFailure carrying the offending point.
AuditReport bracket_audit(const DistributionSpec& spec,
                          const SmoothingFilter& filter, double T,
                          const std::vector<double>& x_grid,
                          const AuditOptions& opts = {});

// Deterministic regression suites.
// delta_suite: 8 random zero-mean two-point laws x n in {1, 2, 5, 10, 40}.
std::vector<DeltaScan> delta_suite();
// lattice_suite: random zero-offset-ish lattice laws with 2..8 atoms.
std::vector<DistributionSpec> lattice_suite(
    int count, std::uint64_t seed = 0x1a77c0de5eedULL);

}  // namespace cfb
