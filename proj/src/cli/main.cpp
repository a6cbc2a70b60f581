#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cfbound/charfn.hpp"
#include "cfbound/envelope.hpp"
#include "cfbound/errors.hpp"
#include "cfbound/filters.hpp"
#include "cfbound/inversion.hpp"
#include "cfbound/nagaev.hpp"
#include "cfbound/nonuniform.hpp"
#include "cfbound/oracle.hpp"
#include "cfbound/specfun.hpp"

namespace {

using nlohmann::json;

std::string fmt(double v) {
  if (v == 0.0) return "0";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(s);
  while (std::getline(ss, cur, ',')) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

double parse_double(const std::string& s, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || !std::isfinite(v))
    throw cfb::ValidationError(std::string(what) + ": bad number '" + s + "'");
  return v;
}

std::vector<double> parse_doubles_csv(const std::string& s,
                                      const char* what) {
  std::vector<double> out;
  for (const auto& tok : split_csv(s)) out.push_back(parse_double(tok, what));
  if (out.empty())
    throw cfb::ValidationError(std::string(what) + ": empty list");
  return out;
}

std::vector<int> parse_ints_csv(const std::string& s, const char* what) {
  std::vector<int> out;
  for (double v : parse_doubles_csv(s, what)) {
    if (v != std::floor(v))
      throw cfb::ValidationError(std::string(what) + ": expected integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

// "lo:hi:count" -> count equally spaced points including both endpoints.
std::vector<double> parse_span(const std::string& s, const char* what) {
  const auto c1 = s.find(':');
  const auto c2 = s.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw cfb::ValidationError(std::string(what) +
                               ": expected lo:hi:count, got '" + s + "'");
  const double lo = parse_double(s.substr(0, c1), what);
  const double hi = parse_double(s.substr(c1 + 1, c2 - c1 - 1), what);
  const double cnt = parse_double(s.substr(c2 + 1), what);
  if (!(hi > lo) || cnt < 2 || cnt != std::floor(cnt) || cnt > 2e6)
    throw cfb::ValidationError(std::string(what) + ": bad span '" + s + "'");
  const int n = static_cast<int>(cnt);
  std::vector<double> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i)
    out.push_back(lo + (hi - lo) * i / (n - 1));
  return out;
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw cfb::ValidationError("cannot read config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return json::parse(ss.str());
}

// Command line wins, then the config file, then the compiled-in default
// already sitting in the bound variable.
template <class T>
T pick(const CLI::Option* opt, T cli_value, const json& cfg,
       const char* key) {
  if (opt->count() == 0 && cfg.contains(key)) return cfg.at(key).get<T>();
  return cli_value;
}

double resolve_tolerance(const CLI::Option* opt, double cli_value,
                         const json& cfg) {
  if (opt->count() > 0) return cli_value;
  if (cfg.contains("tolerance")) return cfg.at("tolerance").get<double>();
  if (const char* env = std::getenv("CFBOUND_TOLERANCE")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0) || !std::isfinite(v))
      throw cfb::ValidationError(
          "CFBOUND_TOLERANCE must be a positive number");
    return v;
  }
  return cli_value;
}

cfb::DistributionSpec load_spec(const std::string& arg, const json& cfg) {
  if (!arg.empty()) {
    if (arg.front() == '{') return cfb::DistributionSpec::parse(arg);
    std::ifstream in(arg);
    if (!in) throw cfb::ValidationError("cannot read spec file: " + arg);
    std::stringstream ss;
    ss << in.rdbuf();
    return cfb::DistributionSpec::parse(ss.str());
  }
  if (cfg.contains("spec"))
    return cfb::DistributionSpec::from_json(cfg.at("spec"));
  throw cfb::ValidationError(
      "no distribution spec given (--spec or config key \"spec\")");
}

std::unique_ptr<cfb::SmoothingFilter> make_filter(const std::string& name,
                                                  double kappa) {
  if (name == "prawitz") return cfb::prawitz_filter();
  if (name == "m02")
    return cfb::m02_filter(kappa > 0.0 ? kappa : cfb::m02_kappa_star());
  if (name == "bohman")
    return cfb::bohman_filter([](double x) { return cfb::m02_density(x); },
                              kappa > 0.0 ? kappa : cfb::m02_kappa_star(),
                              1.0, 3);
  if (name == "tempered") {
    std::shared_ptr<cfb::SmoothingFilter> base =
        cfb::m02_filter(cfb::m02_kappa_star());
    cfb::TemperedSpec ts;
    ts.p_hat = [base](double t, int q) { return base->m1(t, q); };
    ts.p_hat_orders = 3;
    ts.gamma = 0.5;
    ts.dG_hat = [](double s) {
      const double a = std::abs(s) / 0.5;
      return a < 1.0 ? 1.0 - a : 0.0;
    };
    ts.kappa = kappa > 0.0
                   ? kappa
                   : cfb::tempered_kappa_star(ts.p_hat, ts.dG_hat, ts.gamma);
    return cfb::tempered_tilt_filter(std::move(ts));
  }
  throw cfb::ValidationError("unknown filter '" + name +
                             "' (expected prawitz, m02, bohman, tempered)");
}

struct Output {
  explicit Output(const std::string& path) {
    if (path.empty()) return;
    owned = std::fopen(path.c_str(), "wb");
    if (!owned) throw cfb::ValidationError("cannot open output file: " + path);
  }
  ~Output() {
    if (owned) std::fclose(owned);
  }
  FILE* get() const { return owned ? owned : stdout; }
  FILE* owned = nullptr;
};

std::vector<double> resolve_x_points(const CLI::Option* xo,
                                     const std::string& x_csv,
                                     const CLI::Option* go,
                                     const std::string& grid,
                                     const json& cfg,
                                     const std::string& fallback_span) {
  if (xo->count() > 0 && go->count() > 0)
    throw cfb::ValidationError("give either --x or --x-grid, not both");
  if (xo->count() > 0) return parse_doubles_csv(x_csv, "--x");
  if (go->count() > 0) return parse_span(grid, "--x-grid");
  if (cfg.contains("x")) return parse_doubles_csv(cfg.at("x"), "config x");
  if (cfg.contains("x_grid"))
    return parse_span(cfg.at("x_grid"), "config x_grid");
  return parse_span(fallback_span, "default grid");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "cfbound: rigorous distribution bounds straight from characteristic "
      "functions.\nConfig file keys mirror the long option names "
      "(e.g. {\"filter\": \"m02\", \"T\": 15, \"spec\": {...}}); the "
      "CFBOUND_TOLERANCE environment variable sets the default quadrature "
      "tolerance."};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path,
                 "JSON config file supplying defaults for unset options");

  // bound-cdf
  auto* cdf = app.add_subcommand(
      "bound-cdf",
      "Certified bracket lower <= P(X < x) <= P(X <= x) <= upper per grid "
      "point; CSV to stdout");
  std::string cdf_spec, cdf_filter = "prawitz", cdf_x, cdf_grid, cdf_out;
  double cdf_T = 10.0, cdf_kappa = 0.0, cdf_tol = 1e-9;
  auto* cdf_spec_o = cdf->add_option("--spec", cdf_spec,
                                     "distribution spec: JSON file or "
                                     "inline JSON object");
  auto* cdf_filter_o =
      cdf->add_option("--filter", cdf_filter,
                      "smoothing filter: prawitz, m02, bohman, tempered");
  auto* cdf_kappa_o = cdf->add_option(
      "--kappa", cdf_kappa, "tilt size for m02/bohman/tempered (0 = critical)");
  auto* cdf_T_o = cdf->add_option("-T,--smoothing-T", cdf_T,
                                  "frequency cutoff T > 0");
  auto* cdf_x_o = cdf->add_option("--x", cdf_x, "comma list of x points");
  auto* cdf_grid_o =
      cdf->add_option("--x-grid", cdf_grid, "x grid as lo:hi:count");
  auto* cdf_tol_o =
      cdf->add_option("--tolerance", cdf_tol, "quadrature tolerance");
  cdf->add_option("-o,--output", cdf_out, "output file (default stdout)");
  cdf->callback([&] {
    const json cfg = load_config(config_path);
    cfb::PVQuadratureConfig qc;
    qc.tolerance = resolve_tolerance(cdf_tol_o, cdf_tol, cfg);
    const auto spec = load_spec(cdf_spec_o->count() ? cdf_spec : "", cfg);
    const cfb::CharFnEvaluator f(spec);
    const auto filter =
        make_filter(pick(cdf_filter_o, cdf_filter, cfg, "filter"),
                    pick(cdf_kappa_o, cdf_kappa, cfg, "kappa"));
    const double T = pick(cdf_T_o, cdf_T, cfg, "T");
    const auto xs =
        resolve_x_points(cdf_x_o, cdf_x, cdf_grid_o, cdf_grid, cfg, "-3:3:25");
    std::optional<cfb::LatticePMF> law;
    if (spec.has_exact_lattice()) law.emplace(spec.exact_lattice());
    Output out(cdf_out);
    std::fputs("x,lower,upper,exact_if_available,width\n", out.get());
    for (double x : xs) {
      const auto br = cfb::prawitz_cdf_bounds(f, *filter, T, x, qc);
      std::string exact;
      if (law) {
        exact = fmt(law->cdf_le(x));
      } else if (spec.kind() == cfb::DistributionSpec::Kind::normal) {
        exact = fmt(1.0 - cfb::specfun::normal_tail(
                              (x - spec.param_mean()) / spec.param_sd()));
      }
      std::fprintf(out.get(), "%s,%s,%s,%s,%s\n", fmt(x).c_str(),
                   fmt(br.lower).c_str(), fmt(br.upper).c_str(), exact.c_str(),
                   fmt(br.upper - br.lower).c_str());
    }
  });

  // bound-tail
  auto* tail = app.add_subcommand(
      "bound-tail",
      "Certified bracket for x^k P(X >= x) via the derivative cascade; CSV "
      "to stdout");
  std::string tail_spec, tail_filter = "m02", tail_x, tail_grid, tail_out;
  double tail_T = 10.0, tail_kappa = 0.0, tail_tol = 1e-9;
  int tail_k = 3;
  auto* tail_spec_o = tail->add_option("--spec", tail_spec,
                                       "distribution spec: JSON file or "
                                       "inline JSON object");
  auto* tail_filter_o = tail->add_option(
      "--filter", tail_filter,
      "smoothing filter (must be C^k: prawitz only supports k = 0)");
  auto* tail_kappa_o =
      tail->add_option("--kappa", tail_kappa, "tilt size (0 = critical)");
  auto* tail_k_o = tail->add_option("-k,--order", tail_k,
                                    "moment order k >= 1 of the weight x^k");
  auto* tail_T_o =
      tail->add_option("-T,--smoothing-T", tail_T, "frequency cutoff T > 0");
  auto* tail_x_o = tail->add_option("--x", tail_x, "comma list of x >= 0");
  auto* tail_grid_o =
      tail->add_option("--x-grid", tail_grid, "x grid as lo:hi:count");
  auto* tail_tol_o =
      tail->add_option("--tolerance", tail_tol, "quadrature tolerance");
  tail->add_option("-o,--output", tail_out, "output file (default stdout)");
  tail->callback([&] {
    const json cfg = load_config(config_path);
    cfb::PVQuadratureConfig qc;
    qc.tolerance = resolve_tolerance(tail_tol_o, tail_tol, cfg);
    const auto spec = load_spec(tail_spec_o->count() ? tail_spec : "", cfg);
    const cfb::CharFnEvaluator f(spec);
    const auto filter =
        make_filter(pick(tail_filter_o, tail_filter, cfg, "filter"),
                    pick(tail_kappa_o, tail_kappa, cfg, "kappa"));
    const double T = pick(tail_T_o, tail_T, cfg, "T");
    const int k = pick(tail_k_o, tail_k, cfg, "k");
    const auto xs = resolve_x_points(tail_x_o, tail_x, tail_grid_o, tail_grid,
                                     cfg, "0.5:3:6");
    Output out(tail_out);
    std::fputs("x,k,T,lower,upper,exact,width\n", out.get());
    for (double x : xs) {
      const auto tb = cfb::tail_bound(f, *filter, k, T, x, qc);
      std::fprintf(out.get(), "%s,%d,%s,%s,%s,%s,%s\n", fmt(x).c_str(), k,
                   fmt(T).c_str(), fmt(tb.lower).c_str(), fmt(tb.upper).c_str(),
                   tb.exact ? fmt(*tb.exact).c_str() : "",
                   fmt(tb.upper - tb.lower).c_str());
    }
  });

  // envelope
  auto* env = app.add_subcommand(
      "envelope",
      "Sharp envelope of |f(t)| (or of |f(t) - e^{-t^2/2}|, with --gap) over "
      "zero-mean unit-variance laws with E|X|^3 <= rho; JSON to stdout");
  double env_t = 1.0, env_rho = 1.2;
  int env_budget = 20000;
  bool env_gap = false;
  std::string env_out;
  auto* env_t_o = env->add_option("--t", env_t, "evaluation frequency t");
  auto* env_rho_o =
      env->add_option("--rho", env_rho, "third absolute moment cap, >= 1");
  auto* env_budget_o =
      env->add_option("--budget", env_budget, "objective evaluation budget");
  env->add_flag("--gap", env_gap,
                "maximize |f(t) - e^{-t^2/2}| instead of |f(t)|");
  env->add_option("-o,--output", env_out, "output file (default stdout)");
  env->callback([&] {
    const json cfg = load_config(config_path);
    const double t = pick(env_t_o, env_t, cfg, "t");
    const double rho = pick(env_rho_o, env_rho, cfg, "rho");
    const int budget = pick(env_budget_o, env_budget, cfg, "budget");
    const auto sol = env_gap ? cfb::cf_normal_gap_envelope(t, rho, budget)
                             : cfb::cf_envelope(t, rho, budget);
    Output out(env_out);
    std::fprintf(out.get(), "%s\n", sol.to_json().dump().c_str());
  });

  // nagaev-ld
  auto* ld = app.add_subcommand(
      "nagaev-ld",
      "Large-deviation tail constants and the resulting bound on "
      "P(S/B > z) for z >= z0; JSON {C0, C1_0plus, bound} to stdout");
  cfb::NagaevParams np;
  double ld_z = 3.0, ld_rho = 1.0;
  int ld_n = 100;
  std::string ld_out;
  auto* ld_z0_o = ld->add_option("--z0", np.z0, "deviation threshold z0 > 0");
  auto* ld_c_o = ld->add_option("--c", np.c, "case-split constant c > 0");
  auto* ld_tau_o = ld->add_option("--tau", np.tau, "truncation fraction < 1");
  auto* ld_alpha_o =
      ld->add_option("--alpha", np.alpha, "block fraction alpha in (0,1)");
  auto* ld_a_o = ld->add_option("--a", np.a, "mixture weight a in (0, a_max]");
  auto* ld_amax_o = ld->add_option("--a-max", np.a_max, "weight cap a_max");
  auto* ld_zq_o = ld->add_option("--z", ld_z, "query point z >= z0");
  auto* ld_rho_o =
      ld->add_option("--rho", ld_rho, "Lyapunov ratio of the summand");
  auto* ld_n_o = ld->add_option("--n", ld_n, "number of summands");
  ld->add_option("-o,--output", ld_out, "output file (default stdout)");
  ld->callback([&] {
    const json cfg = load_config(config_path);
    cfb::NagaevParams p = np;
    p.z0 = pick(ld_z0_o, np.z0, cfg, "z0");
    p.c = pick(ld_c_o, np.c, cfg, "c");
    p.tau = pick(ld_tau_o, np.tau, cfg, "tau");
    p.alpha = pick(ld_alpha_o, np.alpha, cfg, "alpha");
    p.a = pick(ld_a_o, np.a, cfg, "a");
    p.a_max = pick(ld_amax_o, np.a_max, cfg, "a_max");
    const double z = pick(ld_zq_o, ld_z, cfg, "z");
    const double rho = pick(ld_rho_o, ld_rho, cfg, "rho");
    const int n = pick(ld_n_o, ld_n, cfg, "n");
    json j;
    j["C0"] = cfb::c0_constant(p.z0, p.c, p.tau);
    j["C1_0plus"] = cfb::c1_zero_plus(p.z0, p.tau, p.alpha);
    j["bound"] = cfb::ld_tail_bound(p, z, rho, n);
    Output out(ld_out);
    std::fprintf(out.get(), "%s\n", j.dump().c_str());
  });

  // scan-constants
  auto* scan = app.add_subcommand(
      "scan-constants",
      "Exact normal-approximation constants for classical extremal "
      "families; CSV (n,sup_uniform,sup_nonuniform) to stdout");
  std::string scan_family = "esseen", scan_n = "500,1000,2000", scan_out;
  double scan_p = 0.08;
  auto* scan_family_o = scan->add_option(
      "--family", scan_family, "law family: esseen or bernoulli");
  auto* scan_n_o =
      scan->add_option("--n", scan_n, "comma list of sample sizes");
  auto* scan_p_o = scan->add_option(
      "--p", scan_p, "success probability for the bernoulli family");
  scan->add_option("-o,--output", scan_out, "output file (default stdout)");
  scan->callback([&] {
    const json cfg = load_config(config_path);
    const std::string family = pick(scan_family_o, scan_family, cfg, "family");
    const auto ns =
        parse_ints_csv(pick(scan_n_o, scan_n, cfg, "n"), "--n");
    double p;
    if (family == "esseen") {
      p = 2.0 - std::sqrt(10.0) / 2.0;
    } else if (family == "bernoulli") {
      p = pick(scan_p_o, scan_p, cfg, "p");
      if (!(p > 0.0) || !(p < 1.0))
        throw cfb::ValidationError("scan-constants: p must lie in (0,1)");
    } else {
      throw cfb::ValidationError("scan-constants: unknown family '" + family +
                                 "'");
    }
    const auto base = cfb::DistributionSpec::two_point(-p, 1.0 - p, p);
    std::vector<double> grid;
    grid.reserve(801);
    for (int i = 0; i <= 800; ++i) grid.push_back(-4.0 + 8.0 * i / 800.0);
    Output out(scan_out);
    std::fputs("n,sup_uniform,sup_nonuniform\n", out.get());
    for (int n : ns) {
      const auto sc = cfb::delta_scan(base, n, grid);
      std::fprintf(out.get(), "%d,%s,%s\n", n, fmt(sc.sup_uniform).c_str(),
                   fmt(sc.sup_nonuniform).c_str());
    }
  });

  // audit
  auto* audit = app.add_subcommand(
      "audit",
      "Check CDF/tail brackets against exact lattice laws; exits 1 on any "
      "bracket violation");
  std::string audit_spec, audit_filters = "prawitz,m02", audit_T = "5,15";
  std::string audit_tail_ks, audit_out;
  int audit_suite = 50, audit_points = 40;
  std::uint64_t audit_seed = 0x1a77c0de5eedULL;
  double audit_tol = 1e-9;
  auto* audit_spec_o = audit->add_option(
      "--spec", audit_spec, "audit a single spec instead of the suite");
  auto* audit_filters_o =
      audit->add_option("--filters", audit_filters, "comma list of filters");
  auto* audit_T_o =
      audit->add_option("--T", audit_T, "comma list of cutoffs T");
  auto* audit_tail_ks_o = audit->add_option(
      "--tail-ks", audit_tail_ks,
      "comma list of tail orders to audit too (needs a C^k filter)");
  auto* audit_suite_o = audit->add_option(
      "--suite", audit_suite, "number of random lattice specs to audit");
  auto* audit_points_o =
      audit->add_option("--points", audit_points, "x points per spec");
  auto* audit_seed_o =
      audit->add_option("--seed", audit_seed, "suite generator seed");
  auto* audit_tol_o =
      audit->add_option("--tolerance", audit_tol, "quadrature tolerance");
  audit->add_option("-o,--output", audit_out, "output file (default stdout)");
  bool self_check = false;
  audit->add_flag(
      "--self-check-failure-path", self_check,
      "audit a deliberately wrong planted reference value so the violation "
      "exit path runs end to end; always exits 1 when the engine is healthy");
  audit->callback([&] {
    const json cfg = load_config(config_path);
    cfb::AuditOptions opts;
    opts.quad.tolerance = resolve_tolerance(audit_tol_o, audit_tol, cfg);
    if (audit_tail_ks_o->count() > 0)
      opts.tail_ks = parse_ints_csv(audit_tail_ks, "--tail-ks");
    else if (cfg.contains("tail_ks"))
      opts.tail_ks = parse_ints_csv(cfg.at("tail_ks"), "config tail_ks");

    if (self_check) {
      const auto spec = cfb::DistributionSpec::two_point(-1.0, 1.0, 0.5);
      const cfb::CharFnEvaluator f(spec);
      const auto filter = cfb::prawitz_filter();
      const auto br = cfb::prawitz_cdf_bounds(f, *filter, 10.0, 0.9, opts.quad);
      const double planted = 0.05;  // true P(X < 0.9) is 0.5
      const double allowance = br.quad_error_estimate + opts.quad.tolerance;
      const double viol =
          std::max({br.lower - planted, planted - br.upper, 0.0});
      if (viol > allowance)
        throw cfb::AuditFailure(
            "self-check: the planted reference 0.05 for P(X < 0.9) of the "
            "symmetric two-point law lies outside the computed bracket, as "
            "it must",
            0.9, viol);
      throw cfb::Error(
          "self-check did not trigger: the bracket is loose enough to cover "
          "an absurd reference, which is itself a defect");
    }

    std::vector<cfb::DistributionSpec> specs;
    if (audit_spec_o->count() > 0 || cfg.contains("spec")) {
      specs.push_back(
          load_spec(audit_spec_o->count() ? audit_spec : "", cfg));
    } else {
      specs = cfb::lattice_suite(pick(audit_suite_o, audit_suite, cfg, "suite"),
                                 pick(audit_seed_o, audit_seed, cfg, "seed"));
    }
    const auto filter_names = split_csv(
        pick(audit_filters_o, audit_filters, cfg, "filters"));
    const auto ts =
        parse_doubles_csv(pick(audit_T_o, audit_T, cfg, "T"), "--T");
    const int points = pick(audit_points_o, audit_points, cfg, "points");
    if (points < 1) throw cfb::ValidationError("audit: points must be >= 1");

    Output out(audit_out);
    std::fputs("spec,filter,T,cdf_points,tail_points,worst_violation,max_width\n",
               out.get());
    for (std::size_t i = 0; i < specs.size(); ++i) {
      const auto law = specs[i].exact_lattice();
      const double lo = law.atom(0) - 1.0;
      const double hi = law.atom(law.size() - 1) + 1.0;
      const double off = std::fmod(0.618033988749895 * (i + 1), 1.0);
      std::vector<double> xs;
      xs.reserve(points);
      for (int j = 0; j < points; ++j)
        xs.push_back(lo + (hi - lo) * (j + off) / points);
      for (const auto& fname : filter_names) {
        const auto filter = make_filter(fname, 0.0);
        for (double T : ts) {
          const auto rep = cfb::bracket_audit(specs[i], *filter, T, xs, opts);
          std::fprintf(out.get(), "%zu,%s,%s,%d,%d,%s,%s\n", i, fname.c_str(),
                       fmt(T).c_str(), rep.cdf_points_checked,
                       rep.tail_points_checked,
                       fmt(rep.worst_violation).c_str(),
                       fmt(rep.max_width).c_str());
        }
      }
    }
  });

  // filter-info
  auto* finfo = app.add_subcommand(
      "filter-info",
      "Sample m1/m2 (and the kernel when one exists) for plotting; CSV "
      "(quantity,arg,value) to stdout");
  std::string fi_filter = "prawitz", fi_tgrid = "-1.25:1.25:101";
  std::string fi_xgrid = "-8:8:161", fi_out;
  double fi_kappa = 0.0;
  auto* fi_filter_o = finfo->add_option("--filter", fi_filter, "filter name");
  auto* fi_kappa_o =
      finfo->add_option("--kappa", fi_kappa, "tilt size (0 = critical)");
  auto* fi_tgrid_o =
      finfo->add_option("--t-grid", fi_tgrid, "m1/m2 grid as lo:hi:count");
  auto* fi_xgrid_o =
      finfo->add_option("--x-grid", fi_xgrid, "kernel grid as lo:hi:count");
  finfo->add_option("-o,--output", fi_out, "output file (default stdout)");
  finfo->callback([&] {
    const json cfg = load_config(config_path);
    const auto filter =
        make_filter(pick(fi_filter_o, fi_filter, cfg, "filter"),
                    pick(fi_kappa_o, fi_kappa, cfg, "kappa"));
    const auto tg =
        parse_span(pick(fi_tgrid_o, fi_tgrid, cfg, "t_grid"), "--t-grid");
    const auto xg =
        parse_span(pick(fi_xgrid_o, fi_xgrid, cfg, "x_grid"), "--x-grid");
    Output out(fi_out);
    std::fputs("quantity,arg,value\n", out.get());
    for (double t : tg)
      std::fprintf(out.get(), "m1,%s,%s\n", fmt(t).c_str(),
                   fmt(filter->m1(t)).c_str());
    for (double t : tg)
      std::fprintf(out.get(), "m2,%s,%s\n", fmt(t).c_str(),
                   fmt(filter->m2(t)).c_str());
    if (filter->has_kernel())
      for (double x : xg)
        std::fprintf(out.get(), "kernel,%s,%s\n", fmt(x).c_str(),
                     fmt(filter->kernel(x)).c_str());
  });

  // let `cfbound <subcommand> --config file` work: unmatched subcommand
  // arguments fall through to the app-level --config option
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const cfb::AuditFailure& e) {
    std::fprintf(stderr, "audit failure: %s (x=%s, violation=%s)\n", e.what(),
                 fmt(e.offending_x).c_str(), fmt(e.violation).c_str());
    return 1;
  } catch (const json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
