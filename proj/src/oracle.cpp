#include "cfbound/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "cfbound/errors.hpp"
#include "cfbound/nonuniform.hpp"
#include "cfbound/rng.hpp"
#include "cfbound/specfun.hpp"

namespace cfb {

namespace {

constexpr int kFillPerGap = 40;

void finalize_scan(DeltaScan& scan, std::vector<std::pair<double, double>> pts,
                   double rootn) {
  std::sort(pts.begin(), pts.end());
  scan.z_grid.reserve(pts.size());
  scan.delta.reserve(pts.size());
  for (const auto& [z, d] : pts) {
    scan.z_grid.push_back(z);
    scan.delta.push_back(d);
    const double uni = rootn * d / scan.rho;
    scan.sup_uniform = std::max(scan.sup_uniform, uni);
    if (z >= 0.0)
      scan.sup_nonuniform =
          std::max(scan.sup_nonuniform, (1.0 + z * z * z) * uni);
  }
}

}  // namespace

DeltaScan delta_scan(const DistributionSpec& base, int n,
                     const std::vector<double>& z_grid) {
  if (n < 1) throw ValidationError("delta_scan: n must be >= 1");
  const double var = base.variance();
  if (!(var > 0.0) || !std::isfinite(var))
    throw ValidationError("delta_scan: base needs positive finite variance");
  const double sd = std::sqrt(var);
  if (std::abs(base.mean()) > 1e-9 * std::max(1.0, sd))
    throw ValidationError("delta_scan: base must be zero-mean");

  DeltaScan scan;
  const double rootn = std::sqrt(static_cast<double>(n));
  scan.b_scale = sd * rootn;

  if (base.kind() == DistributionSpec::Kind::normal) {
    // S / B is exactly standard normal.
    scan.rho = CharFnEvaluator(base, 0).absolute_moment(3) / (var * sd);
    std::vector<std::pair<double, double>> pts;
    for (double z : z_grid) pts.emplace_back(z, 0.0);
    finalize_scan(scan, std::move(pts), rootn);
    return scan;
  }

  const LatticePMF summand = base.exact_lattice().standardized(0.0, sd);
  scan.rho = summand.abs_moment(3);
  const LatticePMF sum = convolve_iid(summand, n);

  std::vector<std::pair<double, double>> pts;
  pts.reserve(z_grid.size() + sum.size() * (2 + kFillPerGap));
  for (double z : z_grid)
    pts.emplace_back(
        z, std::abs(sum.sf_gt(rootn * z) - specfun::normal_tail(z)));
  for (std::size_t i = 0; i < sum.size(); ++i) {
    const double z = sum.atom(i) / rootn;
    pts.emplace_back(z,
                     std::abs(sum.sf_ge_index(i) - specfun::normal_tail(z)));
    pts.emplace_back(z,
                     std::abs(sum.sf_gt_index(i) - specfun::normal_tail(z)));
  }
  // Between adjacent atoms the lattice tail is flat while the normal tail
  // moves, so the sup can sit strictly inside a gap.
  for (std::size_t i = 0; i + 1 < sum.size(); ++i) {
    const double za = sum.atom(i) / rootn;
    const double zb = sum.atom(i + 1) / rootn;
    const double flat = sum.sf_gt_index(i);
    for (int j = 1; j < kFillPerGap; ++j) {
      const double z = za + (zb - za) * j / kFillPerGap;
      pts.emplace_back(z, std::abs(flat - specfun::normal_tail(z)));
    }
  }
  finalize_scan(scan, std::move(pts), rootn);
  return scan;
}

std::vector<double> esseen_constant_scan(const std::vector<int>& n_list) {
  const double p = 2.0 - std::sqrt(10.0) / 2.0;
  const DistributionSpec base = DistributionSpec::two_point(-p, 1.0 - p, p);
  std::vector<double> grid;
  grid.reserve(1201);
  for (int i = 0; i <= 1200; ++i) grid.push_back(-3.0 + 6.0 * i / 1200.0);

  std::vector<double> out;
  out.reserve(n_list.size());
  for (int n : n_list) {
    if (n < 1) throw ValidationError("esseen_constant_scan: n must be >= 1");
    if (n > 20000)
      throw ResourceError(
          "esseen_constant_scan: n too large for the exact convolution "
          "oracle");
    out.push_back(delta_scan(base, n, grid).sup_uniform);
  }
  return out;
}

AuditReport bracket_audit(const DistributionSpec& spec,
                          const SmoothingFilter& filter, double T,
                          const std::vector<double>& x_grid,
                          const AuditOptions& opts) {
  if (!spec.has_exact_lattice())
    throw ValidationError("bracket_audit: spec must have an exact lattice law");
  if (x_grid.empty()) throw ValidationError("bracket_audit: empty x grid");

  const LatticePMF law = spec.exact_lattice();
  const CharFnEvaluator f(spec);
  AuditReport rep;

  auto record = [&rep](double x, double viol, double allowance,
                       const char* what) {
    if (viol > rep.worst_violation) {
      rep.worst_violation = viol;
      rep.worst_x = x;
    }
    if (viol > allowance)
      throw AuditFailure(std::string("bracket_audit: ") + what +
                             " bracket violated beyond quadrature allowance",
                         x, viol);
  };

  for (double x : x_grid) {
    const CdfBracket br = prawitz_cdf_bounds(f, filter, T, x, opts.quad);
    const double allowance = br.quad_error_estimate + opts.quad.tolerance;
    const double viol = std::max(
        {br.lower - law.cdf_lt(x), law.cdf_le(x) - br.upper, 0.0});
    rep.cdf_points_checked += 1;
    rep.max_width = std::max(rep.max_width, br.upper - br.lower);
    record(x, viol, allowance, "cdf");
  }

  for (int k : opts.tail_ks) {
    for (double x : x_grid) {
      if (!(x > 0.0)) continue;
      const TailBoundResult tb = tail_bound(f, filter, k, T, x, opts.quad);
      const double xk = std::pow(x, k);
      const double allowance = tb.quad_error + opts.quad.tolerance;
      const double viol =
          std::max({tb.lower - xk * law.sf_gt(x), xk * law.sf_ge(x) - tb.upper,
                    0.0});
      rep.tail_points_checked += 1;
      record(x, viol, allowance, "tail");
    }
  }
  return rep;
}

std::vector<DeltaScan> delta_suite() {
  SplitMix64 rng(0xbe5caff01dULL);
  const int ns[] = {1, 2, 5, 10, 40};
  std::vector<double> grid;
  grid.reserve(161);
  for (int i = 0; i <= 160; ++i) grid.push_back(-4.0 + 8.0 * i / 160.0);

  std::vector<DeltaScan> out;
  out.reserve(40);
  for (int rep = 0; rep < 8; ++rep) {
    const double p = 0.05 + 0.90 * rng.uniform();
    const double s = 0.25 + 3.75 * rng.uniform();
    const DistributionSpec base =
        DistributionSpec::two_point(-s * p, s * (1.0 - p), p);
    for (int n : ns) out.push_back(delta_scan(base, n, grid));
  }
  return out;
}

std::vector<DistributionSpec> lattice_suite(int count, std::uint64_t seed) {
  if (count < 1) throw ValidationError("lattice_suite: count must be >= 1");
  SplitMix64 rng(seed);
  std::vector<DistributionSpec> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    const int m = 2 + static_cast<int>(rng.uniform() * 7.0) % 7;
    const double step = 0.2 + rng.uniform();
    const double offset =
        -0.5 * step * (m - 1) + (rng.uniform() - 0.5) * step;
    std::vector<double> w(m);
    double tot = 0.0;
    for (auto& v : w) {
      const double u = rng.uniform();
      v = 0.02 + u * u;
      tot += v;
    }
    for (auto& v : w) v /= tot;
    out.push_back(DistributionSpec::lattice(LatticePMF(offset, step, w)));
  }
  return out;
}

}  // namespace cfb
