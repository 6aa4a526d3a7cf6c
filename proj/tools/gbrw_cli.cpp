// gbrw: analyses and simulations of bootstrap random walks.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <variant>

#include "gbrw/gbrw.hpp"
#include "gbrw/selfcheck.hpp"

namespace fs = std::filesystem;
using namespace gbrw;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kFailedVerdict = 2;

struct Options {
  std::string rule = "builtin:identity";
  unsigned horizon = 0;
  std::uint64_t length = 100000;
  std::uint64_t reps = 200;
  std::uint64_t seed = 1;
  double tolerance = 1e-2;
  std::string out;
  std::size_t grid = 101;
  int sgn0 = -1;
  unsigned step = 3;
  double alpha = 0.05;
  unsigned orbits = 12;
  unsigned threads = 0;
  bool quick = false;
};

Sign sgn0_of(const Options& o) { return checked_sign(o.sgn0, "--sgn0"); }

void maybe_write(const Options& o, const std::string& name, const std::string& content) {
  if (o.out.empty()) return;
  const auto path = fs::path(o.out) / name;
  report::write_atomic(path, content);
  std::cout << "wrote " << path.string() << "\n";
}

std::string signs_string(const TruthTable& tt) {
  std::string s;
  for (std::uint64_t m = 0; m < tt.size(); ++m) s.push_back(tt.value(m) > 0 ? '+' : '-');
  return s;
}

int cmd_rules() {
  std::cout << "builtin rules (use --rule builtin:<name>):\n";
  for (const auto& n : builtin::catalog()) std::cout << "  " << n << "\n";
  return kOk;
}

int cmd_convert(const Options& o) {
  const auto rule = load_rule(o.rule, sgn0_of(o));
  if (o.step == 0) throw std::invalid_argument("--step must be >= 1");
  const auto beta = rule.beta_family(o.step);
  const auto tt = beta_to_truth(beta);
  const auto enumerated = rule.truth_table(o.step - 1);
  const bool agree = tt == enumerated && truth_to_beta(enumerated) == beta;
  std::cout << "rule " << rule.name() << ", step " << o.step << " (psi_" << o.step - 1 << ")\n"
            << "beta members: " << beta.to_string() << "\n"
            << "truth table:  " << signs_string(tt) << "\n"
            << "round trip:   " << (agree ? "ok" : "MISMATCH") << "\n";
  std::ostringstream csv;
  csv << "mask,value\n";
  for (std::uint64_t m = 0; m < tt.size(); ++m) csv << m << ',' << int(tt.value(m)) << '\n';
  maybe_write(o, "truth_table.csv", csv.str());
  return agree ? kOk : kFailedVerdict;
}

MomentOptions moment_options(const Options& o, bool theta) {
  MomentOptions m;
  m.tolerance = o.tolerance;
  m.keep_theta = theta;
  return m;
}

int cmd_moments(const Options& o) {
  const auto rule = load_rule(o.rule, sgn0_of(o));
  const unsigned horizon = o.horizon ? o.horizon : 128;
  const auto rep = condition_B_partial(rule, horizon, moment_options(o, !o.out.empty() && horizon <= 1024));
  const auto first = condition_A_partial(rule, horizon, moment_options(o, false));
  std::cout << "rule " << rule.name() << ", horizon " << horizon << ", tolerance " << o.tolerance << "\n"
            << "rho_n = " << rep.rho.back().to_string() << " (" << report::num(rep.rho.back().to_double()) << ")\n"
            << "first-moment mean " << report::num(rep.cesaro_A.back()) << ": " << to_string(first.verdict) << "\n"
            << "second-moment mean " << report::num(rep.cesaro_B.back()) << ": " << to_string(rep.verdict) << "\n";
  if (rep.stable_rho) std::cout << "stable rho_k over last half: " << rep.stable_rho->to_string() << "\n";
  maybe_write(o, "rho_seq.csv", report::rho_csv(rep));
  if (!rep.theta.empty()) maybe_write(o, "theta_grid.csv", report::theta_csv(rep));
  return rep.verdict == Verdict::Converged ? kOk : kFailedVerdict;
}

/// Known limit correlation for the builtins that have one.
std::optional<std::pair<double, std::optional<DyadicRational>>> closed_form_rho(const RecyclingRule& rule) {
  using R = std::optional<std::pair<double, std::optional<DyadicRational>>>;
  auto exact = [](const DyadicRational& d) -> R { return std::make_pair(d.to_double(), d); };
  return std::visit(
      detail::Overloaded{
          [&](const rules::Identity&) { return exact(DyadicRational(1)); },
          [&](const rules::Negation&) { return exact(DyadicRational(-1)); },
          [&](const rules::Product&) { return exact(DyadicRational(0)); },
          [&](const rules::Predictable&) { return exact(DyadicRational(0)); },
          [&](const rules::WindowMax& w) { return exact(window_rho(w.m)); },
          [&](const rules::DisjointBlocks& d) {
            return exact(closed_form_disjoint(d.size, d.count == std::numeric_limits<std::uint32_t>::max()
                                                          ? std::nullopt
                                                          : std::optional<std::uint32_t>(d.count)));
          },
          [&](const rules::ExtendedBrw& e) -> R {
            if (std::holds_alternative<SetSequence::Fixed>(e.sets.kind()) &&
                std::get<SetSequence::Fixed>(e.sets.kind()).m == 0)
              return exact(DyadicRational(1));
            if (std::holds_alternative<SetSequence::Explicit>(e.sets.kind())) return std::nullopt;
            return exact(DyadicRational(0));
          },
          [&](const rules::SignFlips& s) -> R { return std::make_pair(sign_flip_rho(s.density), std::nullopt); },
          [](const auto&) -> R { return std::nullopt; },
      },
      rule.generator());
}

int cmd_gaussian_check(const Options& o) {
  const auto rule = load_rule(o.rule, sgn0_of(o));
  const unsigned horizon = o.horizon ? o.horizon : 256;
  const auto rep = condition_B_partial(rule, horizon, moment_options(o, false));
  const double a = rep.cesaro_A.back();
  std::cout << "rule " << rule.name() << ", horizon " << horizon << "\n"
            << "first-moment mean  " << report::num(a) << "\n"
            << "second-moment mean " << report::num(rep.cesaro_B.back()) << " (rho^2 " << report::num(a * a) << ")\n";
  if (rep.stable_rho) std::cout << "per-step rho settles at " << rep.stable_rho->to_string() << " = " << report::num(rep.stable_rho->to_double()) << "\n";
  bool closed_ok = true;
  if (const auto cf = closed_form_rho(rule)) {
    std::cout << "closed-form rho " << report::num(cf->first);
    if (cf->second && rep.stable_rho) {
      closed_ok = *cf->second == *rep.stable_rho;
      std::cout << (closed_ok ? " (matches per-step value exactly)" : " (DIFFERS from per-step value)");
    }
    std::cout << "\n";
  }
  const bool ok = rep.verdict == Verdict::Converged && closed_ok;
  std::cout << "verdict: " << to_string(rep.verdict) << " at tolerance " << o.tolerance
            << (ok ? " -> Gaussian limit with correlation " + report::num(rep.stable_rho ? rep.stable_rho->to_double() : a) : "")
            << "\n";
  maybe_write(o, "rho_seq.csv", report::rho_csv(rep));
  return ok ? kOk : kFailedVerdict;
}

int cmd_simulate(const Options& o) {
  const auto rule = load_rule(o.rule, sgn0_of(o));
  MonteCarloOptions mo;
  mo.threads = o.threads;
  const auto s = mc_covariation(rule, o.length, o.reps, o.seed, mo);
  std::cout << "rule " << rule.name() << ", n " << o.length << ", replicates " << o.reps << ", seed " << o.seed << "\n"
            << "[U,V]_1 mean " << report::num(s.mean) << " +- " << report::num(s.standard_error) << " (variance "
            << report::num(s.variance) << ")\n"
            << "Y_n^2/n mean " << report::num(s.y_scaled_mean) << " +- " << report::num(s.y_scaled_se) << "\n";
  maybe_write(o, "cov_summary.csv", report::cov_summary_csv(s));
  if (!o.out.empty()) {
    const auto path = sample_path(rule, o.length, {o.seed, 0});
    maybe_write(o, "paths.csv", report::paths_csv(path));
    const auto series = covariation(path, default_grid(o.grid));
    std::ostringstream c;
    c << "t,covariation\n";
    for (std::size_t i = 0; i < series.grid.size(); ++i) c << report::num(series.grid[i]) << ',' << report::num(series.values[i]) << '\n';
    maybe_write(o, "covariation.csv", c.str());
  }
  return kOk;
}

int cmd_arcsine(const Options& o) {
  MonteCarloOptions mo;
  mo.threads = o.threads;
  const auto r = arcsine_test(o.length, o.reps, o.seed, o.alpha, sgn0_of(o), mo);
  std::cout << "sgn rule, n " << o.length << ", replicates " << o.reps << ", seed " << o.seed << "\n"
            << "mean " << report::num(r.summary.mean) << " (limit 0), variance " << report::num(r.summary.variance)
            << " (limit 0.5)\n"
            << "KS distance " << report::num(r.ks) << ", critical " << report::num(r.critical) << " at alpha " << r.alpha
            << ": " << (r.pass ? "pass" : "FAIL") << "\n";
  maybe_write(o, "ks_report.csv", report::ks_report_csv(r.summary.finals));
  maybe_write(o, "cov_summary.csv", report::cov_summary_csv(r.summary));
  return r.pass ? kOk : kFailedVerdict;
}

int cmd_ergodic_check(const Options& o) {
  const auto rule = load_rule(o.rule, sgn0_of(o));
  const unsigned horizon = o.horizon ? o.horizon : 16;
  const auto v = is_ergodic_up_to(rule, horizon);
  std::cout << "rule " << rule.name() << ", checked n <= " << horizon << "\n";
  if (v.ergodic_so_far) {
    std::cout << (v.closed_form ? "ergodic (closed form)\n" : "ergodic up to n = " + std::to_string(horizon) + "\n");
  } else if (*v.first_failure == 0) {
    std::cout << "not ergodic: psi0 = +1 (first failing step 0)\n";
  } else {
    std::cout << "not ergodic: first failing step n = " << *v.first_failure << " (full-set coefficient "
              << v.failing_value << ", product of psi_n over all inputs +1)\n";
  }
  const unsigned on = std::min(o.orbits, horizon);
  if (on > 0) {
    const auto d = orbit_decompose(rule, on);
    std::cout << "tau_" << on << ": " << d.cycles.size() << " cycle(s), longest " << d.cycles.front()
              << (d.single_orbit ? " (single orbit)" : "") << "\n";
    maybe_write(o, "orbits.csv", report::orbits_csv(d));
  }
  return v.ergodic_so_far ? kOk : kFailedVerdict;
}

int cmd_beta_array(const Options& o) {
  const unsigned n = o.horizon ? o.horizon : 800;
  const auto a = sgn_beta_array(n);
  std::size_t ones = 0;
  for (const auto& row : a.rows) ones += static_cast<std::size_t>(std::count(row.begin(), row.end(), 1));
  std::cout << "sgn beta array for n <= " << n << ": " << ones << " nonzero entries\n";
  for (unsigned k = 1; k <= std::min(n, 8U); ++k) {
    std::cout << "  n=" << k << ":";
    for (auto b : a.rows[k]) std::cout << ' ' << int(b);
    std::cout << "\n";
  }
  maybe_write(o, "beta_array.csv", report::beta_array_csv(a));
  maybe_write(o, "beta_array.ppm", report::beta_array_ppm(a));
  return kOk;
}

int cmd_selftest(const Options& o) {
  const bool q = o.quick;
  std::vector<check::Result> results{
      check::round_trip(q ? 3 : 4, {8, 12}, q ? 50 : 200, o.seed),
      check::linearization(q ? 50 : 200, 5, 10, o.seed),
      check::moment_oracle(q ? 50 : 200, q ? 12 : 16, o.seed),
      check::closed_forms(5, 5),
      check::measure_preservation(q ? 5 : 20, q ? 10 : 12, o.seed),
      check::ergodicity_equivalence(q ? 20 : 60, q ? 8 : 10, o.seed),
      check::levy_classification(q ? 12 : 16),
      check::beta_array_fidelity(q ? 10 : 14, 800, 10.0),
      check::gaussian_covariation(q ? 20000 : 100000, q ? 50 : 200, o.seed),
      check::arcsine_limit(q ? 14 : 20, q ? 10000 : 100000, q ? 500 : 2000, o.seed, q ? 0.06 : 0.04),
      check::parity_identities(4096, 29),
  };
  bool ok = true;
  for (const auto& r : results) {
    std::printf("%-4s %-26s %7.2fs  %s\n", r.pass ? "ok" : "FAIL", r.name.c_str(), r.seconds, r.detail.c_str());
    ok = ok && r.pass;
  }
  return ok ? kOk : kFailedVerdict;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bootstrap random walks: rule algebra, moments, simulation and ergodicity"};
  app.require_subcommand(1);
  Options o;

  auto add_rule = [&](CLI::App* c) {
    c->add_option("--rule", o.rule, "builtin:<name> or a rule spec file")->capture_default_str();
    c->add_option("--sgn0", o.sgn0, "sign of 0 for sgn-based rules")->check(CLI::IsMember({-1, 1}))->capture_default_str();
  };
  auto add_out = [&](CLI::App* c) { c->add_option("--out", o.out, "directory for report files"); };
  auto add_mc = [&](CLI::App* c) {
    c->add_option("--length", o.length, "path length n")->check(CLI::PositiveNumber)->capture_default_str();
    c->add_option("--reps", o.reps, "replicates")->check(CLI::PositiveNumber)->capture_default_str();
    c->add_option("--seed", o.seed, "master seed")->capture_default_str();
    c->add_option("--threads", o.threads, "worker threads (0: all cores)");
  };

  auto* rules_cmd = app.add_subcommand("rules", "list builtin rules");
  auto* convert = app.add_subcommand("convert", "truth table <-> beta family at one step");
  add_rule(convert);
  add_out(convert);
  convert->add_option("--step", o.step, "step n (shows psi_{n-1})")->check(CLI::PositiveNumber)->capture_default_str();

  auto* moments = app.add_subcommand("moments", "first/second moment Cesaro reports");
  add_rule(moments);
  add_out(moments);
  moments->add_option("--horizon", o.horizon, "steps (default 128)")->check(CLI::PositiveNumber);
  moments->add_option("--tolerance", o.tolerance, "verdict tolerance")->check(CLI::PositiveNumber)->capture_default_str();

  auto* gauss = app.add_subcommand("gaussian-check", "combined moment verdict and closed-form comparison");
  add_rule(gauss);
  add_out(gauss);
  gauss->add_option("--horizon", o.horizon, "steps (default 256)")->check(CLI::PositiveNumber);
  gauss->add_option("--tolerance", o.tolerance, "verdict tolerance")->check(CLI::PositiveNumber)->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo covariation");
  add_rule(simulate);
  add_out(simulate);
  add_mc(simulate);
  simulate->add_option("--grid", o.grid, "grid points for the covariation series")->check(CLI::Range(2, 1000000))->capture_default_str();

  auto* arcsine = app.add_subcommand("arcsine", "KS test of the sgn rule against the arcsine-derived law");
  add_out(arcsine);
  add_mc(arcsine);
  arcsine->add_option("--sgn0", o.sgn0, "sign of 0")->check(CLI::IsMember({-1, 1}))->capture_default_str();
  arcsine->add_option("--alpha", o.alpha, "test level")->check(CLI::Range(1e-9, 0.5))->capture_default_str();

  auto* ergodic = app.add_subcommand("ergodic-check", "full-set criterion and orbit structure");
  add_rule(ergodic);
  add_out(ergodic);
  ergodic->add_option("--horizon", o.horizon, "largest n (default 16)")->check(CLI::Range(1, 24));
  ergodic->add_option("--orbits", o.orbits, "arity of the orbit decomposition")->check(CLI::Range(0, 24))->capture_default_str();

  auto* beta_array = app.add_subcommand("beta-array", "level coefficients of sgn(u_1+...+u_n)");
  add_out(beta_array);
  beta_array->add_option("--horizon", o.horizon, "largest n (default 800)")->check(CLI::PositiveNumber);

  auto* selftest = app.add_subcommand("selftest", "cross-check formulas against brute force");
  selftest->add_option("--seed", o.seed, "seed for random instances")->capture_default_str();
  selftest->add_flag("--quick", o.quick, "smaller instance counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*rules_cmd) return cmd_rules();
    if (*convert) return cmd_convert(o);
    if (*moments) return cmd_moments(o);
    if (*gauss) return cmd_gaussian_check(o);
    if (*simulate) return cmd_simulate(o);
    if (*arcsine) return cmd_arcsine(o);
    if (*ergodic) return cmd_ergodic_check(o);
    if (*beta_array) return cmd_beta_array(o);
    if (*selftest) return cmd_selftest(o);
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << " (raise the limit or lower the horizon)\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
