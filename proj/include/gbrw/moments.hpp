#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "gbrw/beta_family.hpp"
#include "gbrw/core.hpp"
#include "gbrw/dyadic.hpp"
#include "gbrw/index_set.hpp"
#include "gbrw/rule.hpp"
#include "gbrw/set_sequence.hpp"

namespace gbrw {

/// P(max of |M| fair signs = -1) = 2^-|M|.
inline DyadicRational q(const IndexSet& m) { return DyadicRational(1, static_cast<long long>(m.size())); }

namespace detail {

// Sum over H subset of the sets of (-2)^|H| q(union of H), for one connected group.
inline DyadicRational component_expectation(const std::vector<IndexSet>& sets) {
  if (sets.size() == 1) return DyadicRational(1) - DyadicRational(2) * q(sets[0]);

  // Remap the support onto 0..s-1 so unions are short bit vectors.
  IndexSet support;
  for (const auto& m : sets) support |= m;
  const auto members = support.members();
  const std::size_t s = members.size();
  const std::size_t words = (s + 63) / 64;
  std::vector<std::vector<std::uint64_t>> dense(sets.size(), std::vector<std::uint64_t>(words, 0));
  for (std::size_t j = 0; j < sets.size(); ++j)
    sets[j].for_each([&](std::uint32_t i) {
      const auto pos = static_cast<std::size_t>(std::lower_bound(members.begin(), members.end(), i) - members.begin());
      dense[j][pos / 64] |= std::uint64_t{1} << (pos % 64);
    });

  // histogram[e] = sum of (-2)^|H| over H with |union| = e; |entries| <= 3^20.
  std::vector<long long> histogram(s + 1, 0);
  std::vector<std::vector<std::uint64_t>> stack(sets.size() + 1, std::vector<std::uint64_t>(words, 0));
  const auto m = sets.size();
  auto recurse = [&](auto&& self, std::size_t j, long long weight) -> void {
    if (j == m) {
      std::size_t card = 0;
      for (auto w : stack[j]) card += static_cast<std::size_t>(std::popcount(w));
      histogram[card] += weight;
      return;
    }
    stack[j + 1] = stack[j];
    self(self, j + 1, weight);
    for (std::size_t w = 0; w < words; ++w) stack[j + 1][w] = stack[j][w] | dense[j][w];
    self(self, j + 1, -2 * weight);
  };
  recurse(recurse, 0, 1);

  DyadicRational::Integer num = 0;
  for (std::size_t e = 0; e <= s; ++e)
    if (histogram[e] != 0) num += DyadicRational::Integer(histogram[e]) << static_cast<unsigned>(s - e);
  return DyadicRational(std::move(num), static_cast<long long>(s));
}

}  // namespace detail

/// E[prod_j u_[M_j]] for i.i.d. fair signs u.
///
/// Repeated sets cancel in pairs, each empty set contributes -1, and groups of
/// sets linked by shared indices are independent, so each group is expanded
/// separately with at most `cap` sets.
inline DyadicRational linearized_expectation(std::vector<IndexSet> sets, unsigned cap = kDefaultExpansionCap) {
  std::sort(sets.begin(), sets.end());
  std::vector<IndexSet> odd;
  for (std::size_t i = 0; i < sets.size();) {
    std::size_t j = i;
    while (j < sets.size() && sets[j] == sets[i]) ++j;
    if ((j - i) % 2) odd.push_back(sets[i]);
    i = j;
  }

  DyadicRational result(1);
  std::vector<IndexSet> nonempty;
  for (auto& m : odd) {
    if (m.empty()) {
      result = -result;
    } else {
      nonempty.push_back(std::move(m));
    }
  }

  // Union-find over sets sharing an index.
  const std::size_t m = nonempty.size();
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  std::unordered_map<std::uint32_t, std::size_t> owner;
  for (std::size_t j = 0; j < m; ++j)
    nonempty[j].for_each([&](std::uint32_t i) {
      auto [it, inserted] = owner.emplace(i, j);
      if (!inserted) parent[find(j)] = find(it->second);
    });
  std::unordered_map<std::size_t, std::vector<IndexSet>> groups;
  for (std::size_t j = 0; j < m; ++j) groups[find(j)].push_back(nonempty[j]);

  std::vector<std::size_t> roots;
  for (const auto& [root, g] : groups) roots.push_back(root);
  std::sort(roots.begin(), roots.end());
  for (auto root : roots) check_capacity("sets in one linked group of the expansion", groups[root].size(), cap);
  for (auto root : roots) {
    result *= detail::component_expectation(groups[root]);
    if (result.is_zero()) break;
  }
  return result;
}

/// E[zeta] for the step whose recycling function has family `beta`.
inline DyadicRational expected_zeta(const BetaFamily& beta, unsigned cap = kDefaultExpansionCap) {
  return linearized_expectation(beta.members(), cap);
}

/// E[zeta_{k-1} zeta_{l-1}] from the families of steps k and l.
inline DyadicRational expected_zeta_pair(const BetaFamily& bk, const BetaFamily& bl, unsigned cap = kDefaultExpansionCap) {
  std::vector<IndexSet> sets(bk.members());
  sets.insert(sets.end(), bl.members().begin(), bl.members().end());
  return linearized_expectation(std::move(sets), cap);
}

/// E[prod of psi over the families] by summing over every sign assignment of
/// the indices they mention.
inline DyadicRational brute_force_expect(std::span<const BetaFamily> families, unsigned cap = kDefaultEnumerationCap) {
  IndexSet support;
  for (const auto& f : families)
    for (const auto& k : f.members()) support |= k;
  const auto members = support.members();
  const auto d = static_cast<unsigned>(members.size());
  check_capacity("index support of brute-force expectation", d, cap);

  // Each member K as a mask over the compressed support; u_[K] = -1 iff K within the minus set.
  std::vector<std::uint64_t> masks;
  std::size_t empty_count = 0;
  for (const auto& f : families)
    for (const auto& k : f.members()) {
      if (k.empty()) {
        ++empty_count;
        continue;
      }
      std::uint64_t mask = 0;
      k.for_each([&](std::uint32_t i) {
        mask |= std::uint64_t{1} << (std::lower_bound(members.begin(), members.end(), i) - members.begin());
      });
      masks.push_back(mask);
    }

  long long total = 0;
  const std::uint64_t states = std::uint64_t{1} << d;
  for (std::uint64_t minus = 0; minus < states; ++minus) {
    std::size_t flips = empty_count;
    for (auto mask : masks)
      if ((mask & ~minus) == 0) ++flips;
    total += (flips % 2) ? -1 : 1;
  }
  return DyadicRational(DyadicRational::Integer(total), d);
}

enum class Verdict { Converged, Diverged, Undetermined };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Converged: return "converged";
    case Verdict::Diverged: return "diverged";
    default: return "undetermined";
  }
}

/// Finite-horizon view of the first- and second-moment Cesaro conditions.
struct MomentReport {
  std::vector<DyadicRational> rho;  ///< rho[k-1] = E[zeta_{k-1}], k = 1..horizon
  std::vector<double> cesaro_A;     ///< (1/n) sum_{k<=n} rho_k
  std::vector<double> cesaro_B;     ///< (1/n^2) sum_{k,l<=n} theta_{k,l}; empty for the first-moment report
  std::vector<std::vector<double>> theta;  ///< theta[k-1][l-1] when requested
  Verdict verdict = Verdict::Undetermined;
  double tolerance = 1e-2;
  /// rho_k when it is constant over the last half of the horizon.
  std::optional<DyadicRational> stable_rho;

  double limit_estimate() const { return cesaro_A.empty() ? 0.0 : cesaro_A.back(); }
};

namespace detail {

inline double last_half_range(const std::vector<double>& seq) {
  const std::size_t start = seq.size() / 2;
  const auto [lo, hi] = std::minmax_element(seq.begin() + static_cast<std::ptrdiff_t>(start), seq.end());
  return *hi - *lo;
}

inline BetaFamily family_at(const RecyclingRule& rule, unsigned step, unsigned enumeration_cap) {
  try {
    return rule.beta_family(step, enumeration_cap);
  } catch (const CapacityError& e) {
    throw CapacityError(e.parameter() + " at step " + std::to_string(step), e.value(), e.limit());
  }
}

template <class F>
auto at_step(unsigned step, F&& f) {
  try {
    return f();
  } catch (const CapacityError& e) {
    throw CapacityError(e.parameter() + " at step " + std::to_string(step), e.value(), e.limit());
  }
}

}  // namespace detail

struct MomentOptions {
  double tolerance = 1e-2;
  unsigned enumeration_cap = kDefaultEnumerationCap;
  unsigned expansion_cap = kDefaultExpansionCap;
  bool keep_theta = false;
};

/// rho_k = E[zeta_{k-1}] for k <= horizon and the verdict on their Cesaro means.
inline MomentReport condition_A_partial(const RecyclingRule& rule, unsigned horizon, const MomentOptions& opt = {}) {
  if (horizon == 0) throw std::invalid_argument("condition_A_partial: horizon must be >= 1");
  MomentReport r;
  r.tolerance = opt.tolerance;
  DyadicRational sum;
  for (unsigned k = 1; k <= horizon; ++k) {
    const auto beta = detail::family_at(rule, k, opt.enumeration_cap);
    r.rho.push_back(detail::at_step(k, [&] { return expected_zeta(beta, opt.expansion_cap); }));
    sum += r.rho.back();
    r.cesaro_A.push_back(sum.to_double() / k);
  }
  const std::size_t start = r.rho.size() / 2;
  if (std::all_of(r.rho.begin() + static_cast<std::ptrdiff_t>(start), r.rho.end(),
                  [&](const DyadicRational& v) { return v == r.rho.back(); }))
    r.stable_rho = r.rho.back();
  // An exactly stationary tail counts as settled: the remaining range is the
  // O(1/n) trace of the first few steps.
  if (horizon >= 4)
    r.verdict = (r.stable_rho || detail::last_half_range(r.cesaro_A) < opt.tolerance) ? Verdict::Converged
                                                                                      : Verdict::Diverged;
  return r;
}

/// Adds theta_{k,l} = E[zeta_{k-1} zeta_{l-1}] and the double Cesaro means;
/// converged needs both sequences settled and the double mean close to rho^2.
inline MomentReport condition_B_partial(const RecyclingRule& rule, unsigned horizon = 512, const MomentOptions& opt = {}) {
  MomentReport r = condition_A_partial(rule, horizon, opt);
  std::vector<BetaFamily> fam;
  fam.reserve(horizon);
  for (unsigned k = 1; k <= horizon; ++k) fam.push_back(detail::family_at(rule, k, opt.enumeration_cap));
  if (opt.keep_theta) r.theta.assign(horizon, std::vector<double>(horizon, 0.0));

  DyadicRational total;
  for (unsigned n = 1; n <= horizon; ++n) {
    // Row n: theta_{n,n} = 1 plus twice the off-diagonal terms with k < n.
    DyadicRational row;
    for (unsigned k = 1; k < n; ++k) {
      auto th = detail::at_step(n, [&] { return expected_zeta_pair(fam[k - 1], fam[n - 1], opt.expansion_cap); });
      if (opt.keep_theta) r.theta[k - 1][n - 1] = r.theta[n - 1][k - 1] = th.to_double();
      row += th;
    }
    if (opt.keep_theta) r.theta[n - 1][n - 1] = 1.0;
    total += DyadicRational(2) * row + DyadicRational(1);
    r.cesaro_B.push_back(total.to_double() / (static_cast<double>(n) * n));
  }

  if (horizon >= 4) {
    const double a = r.cesaro_A.back();
    const bool first_settled = r.verdict == Verdict::Converged;
    const bool second_settled = r.stable_rho || detail::last_half_range(r.cesaro_B) < opt.tolerance;
    r.verdict = first_settled && second_settled && std::abs(r.cesaro_B.back() - a * a) < opt.tolerance
                    ? Verdict::Converged
                    : Verdict::Diverged;
  } else {
    r.verdict = Verdict::Undetermined;
  }
  return r;
}

/// Limit correlation for families of disjoint sets of size kappa whose count
/// settles at m (nullopt: the count grows without bound).
inline DyadicRational closed_form_disjoint(std::uint32_t kappa, std::optional<std::uint32_t> m) {
  if (kappa == 0) throw std::invalid_argument("closed_form_disjoint: kappa must be >= 1");
  if (m && *m == 0) return DyadicRational(1);
  if (kappa == 1 || !m) return DyadicRational(0);
  const DyadicRational base = DyadicRational(1) - DyadicRational(1, static_cast<long long>(kappa) - 1);
  DyadicRational out(1);
  for (std::uint32_t i = 0; i < *m; ++i) out *= base;
  return out;
}

/// Limit correlation of the window-max rule with window m.
inline DyadicRational window_rho(std::uint32_t m) {
  if (m == 0) throw std::invalid_argument("window_rho: m must be >= 1");
  return DyadicRational(1) - DyadicRational(1, static_cast<long long>(m) - 1);
}

/// The unbounded-window limit: a degenerate Brownian pair.
inline DyadicRational window_rho_unbounded() { return DyadicRational(1); }

/// Limit correlation when a fraction p of the steps flips the sign.
inline double sign_flip_rho(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sign_flip_rho: p must lie in [0,1]");
  return 1.0 - 2.0 * p;
}

struct SetSequenceReport {
  std::vector<double> first_match_ratio;  ///< N(n)/n for n = 1..horizon
  std::vector<double> match_fraction;     ///< (1/n) #{k <= n : M_k = M_n}
  std::vector<std::uint64_t> first_match; ///< N(n)
  bool sufficient_condition = false;      ///< empirical proxy for an independent limit
  double tolerance = 1e-2;
};

/// N(n) = min{k : M_k = M_n} and the fraction of earlier steps reusing M_n.
inline SetSequenceReport analyze_set_sequence(const SetSequence& seq, std::uint64_t horizon, double tolerance = 1e-2) {
  if (horizon < 2) throw std::invalid_argument("analyze_set_sequence: horizon must be >= 2");
  SetSequenceReport r;
  r.tolerance = tolerance;
  auto bad = [](std::uint64_t k) {
    return std::invalid_argument("analyze_set_sequence: M_" + std::to_string(k) + " is not a subset of {1..k-1}");
  };
  if (seq.nested()) {
    std::uint64_t prev_len = 0, first = 1;
    for (std::uint64_t n = 1; n <= horizon; ++n) {
      const std::uint64_t len = *seq.prefix_length(n);
      if (len > n - 1) throw bad(n);
      if (n > 1 && len < prev_len) throw std::invalid_argument("analyze_set_sequence: prefix lengths must not decrease");
      if (n == 1 || len != prev_len) first = n;
      prev_len = len;
      r.first_match.push_back(first);
      r.first_match_ratio.push_back(static_cast<double>(first) / static_cast<double>(n));
      r.match_fraction.push_back(static_cast<double>(n - first + 1) / static_cast<double>(n));
    }
  } else {
    std::unordered_map<IndexSet, std::pair<std::uint64_t, std::uint64_t>, IndexSetHash> seen;  // first, count
    for (std::uint64_t n = 1; n <= horizon; ++n) {
      const IndexSet m = seq.at(n);
      if (m.max() >= n) throw bad(n);
      auto& [first, count] = seen.try_emplace(m, n, 0).first->second;
      ++count;
      r.first_match.push_back(first);
      r.first_match_ratio.push_back(static_cast<double>(first) / static_cast<double>(n));
      r.match_fraction.push_back(static_cast<double>(count) / static_cast<double>(n));
    }
  }
  const std::size_t start = horizon / 2;
  double min_ratio = 1.0, max_match = 0.0;
  for (std::size_t i = start; i < horizon; ++i) {
    min_ratio = std::min(min_ratio, r.first_match_ratio[i]);
    max_match = std::max(max_match, r.match_fraction[i]);
  }
  r.sufficient_condition = (seq.nested() && min_ratio >= 1.0 - tolerance) || max_match <= tolerance;
  return r;
}

struct IntersectionReport {
  std::vector<double> d;                       ///< d[N-1] = (1/N) sum_{k<=N} |M_k & M_{N+1}|
  std::vector<std::uint32_t> persistent;       ///< indices lying in at least `threshold` of M_1..M_{N+1}
  std::uint64_t threshold = 0;
};

/// Overlap of each set with the earlier ones, a finite-horizon proxy for
/// limsup M_n being empty. Requires |M_k| constant over the last half of the horizon.
inline IntersectionReport intersection_diagnostic(const SetSequence& seq, std::uint64_t horizon,
                                                  std::optional<std::uint64_t> threshold = std::nullopt) {
  if (horizon == 0) throw std::invalid_argument("intersection_diagnostic: horizon must be >= 1");
  std::vector<IndexSet> sets;
  sets.reserve(horizon + 1);
  for (std::uint64_t k = 1; k <= horizon + 1; ++k) sets.push_back(seq.at(k));
  const std::size_t card = sets.back().size();
  for (std::uint64_t k = horizon / 2 + 1; k <= horizon + 1; ++k)
    if (sets[k - 1].size() != card)
      throw std::invalid_argument("intersection_diagnostic: |M_k| is not constant (|M_" + std::to_string(k) +
                                  "| = " + std::to_string(sets[k - 1].size()) + ", expected " + std::to_string(card) + ")");

  IntersectionReport r;
  r.threshold = threshold.value_or(std::max<std::uint64_t>(
      2, static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(horizon))))));
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    std::uint64_t total = 0;
    for (std::uint64_t k = 1; k <= n; ++k) total += sets[k - 1].intersection_size(sets[n]);
    r.d.push_back(static_cast<double>(total) / static_cast<double>(n));
  }
  std::unordered_map<std::uint32_t, std::uint64_t> hits;
  for (const auto& s : sets) s.for_each([&](std::uint32_t i) { ++hits[i]; });
  for (const auto& [i, c] : hits)
    if (c >= r.threshold) r.persistent.push_back(i);
  std::sort(r.persistent.begin(), r.persistent.end());
  return r;
}

}  // namespace gbrw
