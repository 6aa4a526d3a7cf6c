#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gbrw/beta_family.hpp"
#include "gbrw/core.hpp"
#include "gbrw/index_set.hpp"
#include "gbrw/rule.hpp"

namespace gbrw {

/// The permutation tau_n of {-1,+1}^n (mask encoding) induced by a rule.
class TauMap {
 public:
  TauMap(const RecyclingRule& rule, unsigned n) : cursor_(rule), n_(n) {}

  unsigned arity() const noexcept { return n_; }

  std::uint64_t operator()(std::uint64_t mask) {
    cursor_.reset();
    std::uint64_t out = 0;
    for (unsigned k = 0; k < n_; ++k) {
      const Sign xi = ((mask >> k) & 1U) ? kMinus : kPlus;
      if (cursor_.step(xi) < 0) out |= std::uint64_t{1} << k;
    }
    return out;
  }

 private:
  RuleCursor cursor_;
  unsigned n_;
};

struct OrbitDecomposition {
  unsigned n = 0;
  std::vector<std::uint64_t> cycles;  ///< lengths, descending
  bool single_orbit = false;
};

/// Cycle structure of tau_n, walking each orbit once with a visited bit vector.
/// Throws std::logic_error if tau_n is not a permutation.
inline OrbitDecomposition orbit_decompose(const RecyclingRule& rule, unsigned n, unsigned cap = kDefaultEnumerationCap) {
  check_capacity("orbit arity", n, cap);
  const std::uint64_t size = std::uint64_t{1} << n;
  std::vector<std::uint64_t> visited((size + 63) / 64, 0);
  auto seen = [&](std::uint64_t s) { return (visited[s / 64] >> (s % 64)) & 1U; };
  TauMap tau(rule, n);
  OrbitDecomposition d;
  d.n = n;
  std::uint64_t covered = 0;
  for (std::uint64_t start = 0; start < size; ++start) {
    if (seen(start)) continue;
    std::uint64_t len = 0, s = start;
    do {
      if (seen(s)) throw std::logic_error("orbit_decompose: map is not a permutation");
      visited[s / 64] |= std::uint64_t{1} << (s % 64);
      ++len;
      s = tau(s);
    } while (s != start);
    d.cycles.push_back(len);
    covered += len;
  }
  if (covered != size) throw std::logic_error("orbit_decompose: cycles do not cover the state space");
  std::sort(d.cycles.begin(), d.cycles.end(), std::greater<>());
  d.single_orbit = d.cycles.size() == 1;
  return d;
}

/// True when tau_n hits every state exactly once.
inline bool tau_is_bijection(const RecyclingRule& rule, unsigned n, unsigned cap = kDefaultEnumerationCap) {
  check_capacity("bijection arity", n, cap);
  const std::uint64_t size = std::uint64_t{1} << n;
  std::vector<std::uint64_t> hit((size + 63) / 64, 0);
  TauMap tau(rule, n);
  for (std::uint64_t s = 0; s < size; ++s) {
    const auto t = tau(s);
    if ((hit[t / 64] >> (t % 64)) & 1U) return false;
    hit[t / 64] |= std::uint64_t{1} << (t % 64);
  }
  return true;
}

/// Product of psi_n over all 2^n inputs (psi_0 for n = 0).
inline Sign criterion_product(const RecyclingRule& rule, unsigned n, unsigned cap = kDefaultEnumerationCap) {
  if (n == 0) return rule.psi0();
  return (rule.truth_table(n, cap).minus_count() % 2) ? kMinus : kPlus;
}

/// Coefficient of the full set {1..n} in the family of psi_n (psi_0 = -1 for n = 0).
inline int criterion_beta(const RecyclingRule& rule, unsigned n, unsigned cap = kDefaultEnumerationCap) {
  if (n == 0) return rule.psi0() < 0 ? 1 : 0;
  const IndexSet full = IndexSet::interval(1, n);
  if (auto f = rule.closed_family(n + 1)) return f->contains(full) ? 1 : 0;
  return truth_to_beta(rule.truth_table(n, cap)).contains(full) ? 1 : 0;
}

struct ErgodicityVerdict {
  unsigned checked_up_to = 0;
  bool ergodic_so_far = true;
  std::optional<unsigned> first_failure;  ///< step n; 0 means psi_0 = +1
  int failing_value = 0;                  ///< criterion value at the failing step
  bool closed_form = false;               ///< criterion known to hold for every n
};

/// Checks psi_0 = -1 and the full-set criterion for n = 1..horizon.
inline ErgodicityVerdict is_ergodic_up_to(const RecyclingRule& rule, unsigned horizon, bool use_product = false,
                                          unsigned cap = kDefaultEnumerationCap) {
  check_capacity("ergodicity horizon", horizon, cap);
  ErgodicityVerdict v;
  v.checked_up_to = horizon;
  for (unsigned n = 0; n <= horizon; ++n) {
    const int value = use_product ? criterion_product(rule, n, cap) : criterion_beta(rule, n, cap);
    const bool ok = use_product ? value < 0 : value == 1;
    if (!ok) {
      v.ergodic_so_far = false;
      v.first_failure = n;
      v.failing_value = value;
      return v;
    }
  }
  v.closed_form = rule.ergodic_closed_form();
  return v;
}

/// C(n,k) mod 2 by Lucas: odd iff k and n-k share no binary digit. C(n,k) = 0 for k > n.
///
/// No exception here: GCC 11 miscompiles a throwing guard once this is inlined
/// into a loop whose n and k advance at different strides.
inline int binomial_parity(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  return (k & (n - k)) == 0 ? 1 : 0;
}

/// Level coefficients of sgn(u_1 + ... + u_n) with sgn(0) = -1: the sign is a
/// product of u_[K]^beta over all K, where beta depends only on |K| = k.
struct BetaArray {
  std::vector<std::vector<std::uint8_t>> rows;  ///< rows[n][k], k = 0..n; rows[0] = {1}

  unsigned max_n() const noexcept { return static_cast<unsigned>(rows.size()) - 1; }

  /// The family at step n + 1 spelled out set by set (n <= 24).
  BetaFamily family(unsigned n) const {
    check_capacity("beta array family arity", n, kDefaultEnumerationCap);
    std::vector<IndexSet> members;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask)
      if (rows.at(n)[static_cast<std::size_t>(std::popcount(mask))]) members.push_back(IndexSet::from_mask(mask));
    return BetaFamily(n + 1, std::move(members));
  }
};

/// Rows 0..max_n from the parity recurrence; never enumerates inputs.
inline BetaArray sgn_beta_array(unsigned max_n) {
  if (max_n == 0) throw std::invalid_argument("sgn_beta_array: need max_n >= 1");
  BetaArray a;
  a.rows.resize(max_n + 1);
  a.rows[0] = {1};  // sgn(0) = -1 = u_[{}]
  for (unsigned n = 1; n <= max_n; ++n) {
    auto& row = a.rows[n];
    row.assign(n + 1, 0);
    const unsigned zero_upto = (n - 1) / 2;
    for (unsigned m = zero_upto + 1; m <= n; ++m) {
      unsigned acc = 1;
      for (unsigned k = zero_upto + 1; k < m; ++k) acc ^= static_cast<unsigned>(binomial_parity(m, k)) & row[k];
      row[m] = static_cast<std::uint8_t>(acc);
    }
  }
  return a;
}

/// Forces psi_0 = -1 and multiplies psi_n by max(u_1..u_n) wherever the
/// full-set coefficient is 0, for n <= horizon.
inline RecyclingRule ergodic_repair(const RecyclingRule& rule, unsigned horizon, unsigned cap = kDefaultEnumerationCap) {
  std::vector<bool> flip(horizon + 1, false);
  bool any = false;
  for (unsigned n = 1; n <= horizon; ++n) {
    flip[n] = criterion_beta(rule, n, cap) == 0;
    any = any || flip[n];
  }
  if (!any) return rule.with_psi0(kMinus);
  return RecyclingRule(kMinus, rules::MaxRepair{std::make_shared<const RecyclingRule>(rule), std::move(flip)},
                       rule.name() + "+repair");
}

}  // namespace gbrw
