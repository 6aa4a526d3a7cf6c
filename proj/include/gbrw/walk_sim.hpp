#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "gbrw/core.hpp"
#include "gbrw/rule.hpp"

namespace gbrw {

/// Identifies one reproducible replicate.
struct SeedSpec {
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;
};

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Counter-based source of fair signs: word b of replicate r is a pure
/// function of (seed, r, b), so replicates can be generated in any order.
class SignStream {
 public:
  explicit SignStream(SeedSpec s) noexcept : key_(splitmix64(splitmix64(s.seed) ^ (s.replicate * 0xD1B54A32D192ED03ULL))) {}

  std::uint64_t word(std::uint64_t block) const noexcept { return splitmix64(key_ + block * 0x9E3779B97F4A7C15ULL); }

  Sign next() noexcept {
    if (left_ == 0) {
      bits_ = word(block_++);
      left_ = 64;
    }
    const Sign s = (bits_ & 1U) ? kPlus : kMinus;
    bits_ >>= 1;
    --left_;
    return s;
  }

 private:
  std::uint64_t key_;
  std::uint64_t block_ = 0;
  std::uint64_t bits_ = 0;
  unsigned left_ = 0;
};

/// Coupled walks X (increments xi) and Y (increments eta), x[0] = y[0] = 0.
struct PathPair {
  std::uint64_t n = 0;
  std::vector<Sign> xi;
  std::vector<Sign> eta;
  std::vector<long long> x;
  std::vector<long long> y;
};

inline PathPair sample_path(const RecyclingRule& rule, std::uint64_t n, SeedSpec seed) {
  if (n == 0) throw std::invalid_argument("sample_path: length must be >= 1");
  PathPair p;
  p.n = n;
  p.xi.resize(n);
  p.eta.resize(n);
  p.x.assign(n + 1, 0);
  p.y.assign(n + 1, 0);
  SignStream rng(seed);
  RuleCursor cursor(rule);
  for (std::uint64_t k = 0; k < n; ++k) {
    p.xi[k] = rng.next();
    p.eta[k] = cursor.step(p.xi[k]);
    p.x[k + 1] = p.x[k] + p.xi[k];
    p.y[k + 1] = p.y[k] + p.eta[k];
  }
  return p;
}

/// floor(n t) for t in [0,1], corrected for rounding in n * t.
inline std::uint64_t floor_scaled(std::uint64_t n, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("grid points must lie in [0,1]");
  const double nd = static_cast<double>(n);
  auto m = static_cast<std::uint64_t>(std::floor(nd * t));
  if (m < n && static_cast<double>(m + 1) / nd <= t) ++m;
  if (m > 0 && static_cast<double>(m) / nd > t) --m;
  return std::min(m, n);
}

inline std::vector<double> default_grid(std::size_t points = 101) {
  if (points < 2) throw std::invalid_argument("grid needs at least 2 points");
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i) g[i] = static_cast<double>(i) / static_cast<double>(points - 1);
  return g;
}

/// t -> (1/n) sum_{k <= floor(nt)} xi_k eta_k.
struct CovariationSeries {
  std::vector<double> grid;
  std::vector<long long> sums;  ///< exact integer sums
  std::vector<double> values;
};

inline CovariationSeries covariation(const PathPair& p, std::span<const double> grid) {
  CovariationSeries c;
  c.grid.assign(grid.begin(), grid.end());
  std::vector<long long> prefix(p.n + 1, 0);
  for (std::uint64_t k = 0; k < p.n; ++k) prefix[k + 1] = prefix[k] + p.xi[k] * p.eta[k];
  for (double t : grid) {
    const auto m = floor_scaled(p.n, t);
    c.sums.push_back(prefix[m]);
    c.values.push_back(static_cast<double>(prefix[m]) / static_cast<double>(p.n));
  }
  return c;
}

inline CovariationSeries covariation(const PathPair& p) {
  const auto g = default_grid();
  return covariation(p, g);
}

struct MonteCarloOptions {
  unsigned threads = 0;          ///< 0: hardware concurrency
  std::size_t histogram_bins = 50;
};

struct MonteCarloSummary {
  std::uint64_t replicates = 0;
  std::uint64_t length = 0;
  double mean = 0.0;
  double variance = 0.0;  ///< unbiased sample variance
  double standard_error = 0.0;
  std::vector<double> finals;              ///< [U,V]_1 per replicate, in replicate order
  std::vector<std::uint64_t> histogram;    ///< counts over equal bins of [-1,1]
  double y_scaled_mean = 0.0;              ///< mean of Y_n^2 / n (a fair walk gives 1)
  double y_scaled_se = 0.0;
};

namespace detail {

struct ReplicateResult {
  long long zeta_sum;
  long long y;
};

inline ReplicateResult run_replicate(const RecyclingRule& rule, std::uint64_t n, SeedSpec seed) {
  SignStream rng(seed);
  RuleCursor cursor(rule);
  long long zs = 0, y = 0;
  for (std::uint64_t k = 0; k < n; ++k) {
    const Sign xi = rng.next();
    const Sign eta = cursor.step(xi);
    zs += xi * eta;
    y += eta;
  }
  return {zs, y};
}

inline void mean_and_se(std::span<const double> v, double& mean, double& var, double& se) {
  const double m = static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += x;
  mean = s / m;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  var = v.size() > 1 ? ss / (m - 1.0) : 0.0;
  se = std::sqrt(var / m);
}

}  // namespace detail

/// Final covariation [U,V]_1 over independent replicates 0..reps-1.
inline MonteCarloSummary mc_covariation(const RecyclingRule& rule, std::uint64_t n, std::uint64_t reps, std::uint64_t seed,
                                        const MonteCarloOptions& opt = {}) {
  if (n == 0) throw std::invalid_argument("mc_covariation: length must be >= 1");
  if (reps < 2) throw std::invalid_argument("mc_covariation: need at least 2 replicates");
  std::vector<detail::ReplicateResult> results(reps);
  unsigned threads = opt.threads ? opt.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, reps));
  auto work = [&](unsigned t) {
    for (std::uint64_t r = t; r < reps; r += threads) results[r] = detail::run_replicate(rule, n, {seed, r});
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }

  MonteCarloSummary s;
  s.replicates = reps;
  s.length = n;
  s.finals.reserve(reps);
  std::vector<double> y2(reps);
  for (std::uint64_t r = 0; r < reps; ++r) {
    s.finals.push_back(static_cast<double>(results[r].zeta_sum) / static_cast<double>(n));
    y2[r] = static_cast<double>(results[r].y) * static_cast<double>(results[r].y) / static_cast<double>(n);
  }
  detail::mean_and_se(s.finals, s.mean, s.variance, s.standard_error);
  double yv = 0.0;
  detail::mean_and_se(y2, s.y_scaled_mean, yv, s.y_scaled_se);

  const std::size_t bins = std::max<std::size_t>(1, opt.histogram_bins);
  s.histogram.assign(bins, 0);
  for (double v : s.finals) {
    auto b = static_cast<std::size_t>(std::floor((v + 1.0) / 2.0 * static_cast<double>(bins)));
    ++s.histogram[std::min(b, bins - 1)];
  }
  return s;
}

/// Limit law of (1/n) sum sgn(X_{k-1}): 2L - 1 with L arcsine distributed.
inline double arcsine_reference_cdf(double x) {
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return 2.0 / std::numbers::pi * std::asin(std::sqrt((x + 1.0) / 2.0));
}

/// sup_x |F_emp(x) - F(x)| for a weighted sample against a continuous F.
/// Both one-sided limits of the empirical CDF are compared at every atom.
template <class Cdf>
double ks_distance_weighted(std::vector<std::pair<double, double>> atoms, Cdf&& cdf) {
  std::sort(atoms.begin(), atoms.end());
  double total = 0.0;
  for (const auto& a : atoms) total += a.second;
  double below = 0.0, d = 0.0;
  for (std::size_t i = 0; i < atoms.size();) {
    const double v = atoms[i].first;
    double w = 0.0;
    while (i < atoms.size() && atoms[i].first == v) w += atoms[i++].second;
    const double f = cdf(v);
    d = std::max({d, std::abs(below / total - f), std::abs((below + w) / total - f)});
    below += w;
  }
  return d;
}

template <class Cdf>
double ks_distance(std::span<const double> sample, Cdf&& cdf) {
  std::vector<std::pair<double, double>> atoms;
  atoms.reserve(sample.size());
  for (double v : sample) atoms.emplace_back(v, 1.0);
  return ks_distance_weighted(std::move(atoms), cdf);
}

/// P(sup |B_bridge| > x) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 x^2).
inline double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  double s = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * x * x);
    s += (j % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

/// Asymptotic critical KS distance at level alpha for a sample of size m.
inline double kolmogorov_critical(double alpha, std::uint64_t m) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("kolmogorov_critical: alpha must lie in (0,1)");
  double lo = 0.1, hi = 5.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (kolmogorov_survival(mid) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) / std::sqrt(static_cast<double>(m));
}

struct ArcsineReport {
  MonteCarloSummary summary;
  double ks = 0.0;
  double critical = 0.0;
  double alpha = 0.05;
  bool pass = false;
};

/// Exact law of sum_{k=1}^n sgn(X_{k-1}) for a fair walk: counts[s + n] over all 2^n paths.
struct OccupationLaw {
  unsigned n = 0;
  std::vector<std::uint64_t> counts;

  /// Atoms (value of the normalised sum, probability).
  std::vector<std::pair<double, double>> atoms() const {
    std::vector<std::pair<double, double>> out;
    const double total = std::ldexp(1.0, static_cast<int>(n));
    for (std::size_t i = 0; i < counts.size(); ++i)
      if (counts[i])
        out.emplace_back((static_cast<double>(i) - n) / n, static_cast<double>(counts[i]) / total);
    return out;
  }
};

/// Enumerates every path of length n (n <= 24).
inline OccupationLaw exact_sign_occupation_law(unsigned n, Sign sgn0 = kMinus) {
  if (n == 0) throw std::invalid_argument("exact_sign_occupation_law: n must be >= 1");
  check_capacity("occupation law length", n, kDefaultEnumerationCap);
  checked_sign(sgn0, "sgn0");
  OccupationLaw law;
  law.n = n;
  law.counts.assign(2 * n + 1, 0);
  // sgn(X_{k-1}) only involves the first n-1 steps; the last one doubles each count.
  const unsigned steps = n - 1;
  for (std::uint64_t path = 0; path < (std::uint64_t{1} << steps); ++path) {
    long long x = 0, s = sgn0;
    for (unsigned k = 0; k < steps; ++k) {
      x += ((path >> k) & 1U) ? 1 : -1;
      s += x > 0 ? 1 : (x < 0 ? -1 : sgn0);
    }
    law.counts[static_cast<std::size_t>(s + n)] += 2;
  }
  return law;
}

inline double exact_law_distance(const OccupationLaw& law) {
  return ks_distance_weighted(law.atoms(), arcsine_reference_cdf);
}

/// Rule with psi_{k-1}(u) = f((u_1 + ... + u_{k-1}) / sqrt(k)).
inline RecyclingRule symmetric_rule(StepFunction f, Sign sgn0 = kMinus) {
  f.validate();
  checked_sign(sgn0, "sgn0");
  const Sign psi0 = f(0.0, sgn0);
  return RecyclingRule(psi0, rules::Symmetric{std::move(f), sgn0}, "symmetric");
}

/// Monte Carlo check of the arcsine limit for eta_k = sgn(X_{k-1}) xi_k.
inline ArcsineReport arcsine_test(std::uint64_t n, std::uint64_t reps, std::uint64_t seed, double alpha = 0.05,
                                  Sign sgn0 = kMinus, const MonteCarloOptions& opt = {}) {
  if (reps < 100) throw std::invalid_argument("arcsine_test: need at least 100 replicates");
  const RecyclingRule rule(checked_sign(sgn0, "sgn0"), rules::Levy{sgn0}, "levy");
  ArcsineReport r;
  r.summary = mc_covariation(rule, n, reps, seed, opt);
  r.ks = ks_distance(r.summary.finals, arcsine_reference_cdf);
  r.alpha = alpha;
  r.critical = kolmogorov_critical(alpha, reps);
  r.pass = r.ks <= r.critical;
  return r;
}

}  // namespace gbrw
