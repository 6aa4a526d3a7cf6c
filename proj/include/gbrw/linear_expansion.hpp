#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "gbrw/beta_family.hpp"
#include "gbrw/dyadic.hpp"
#include "gbrw/index_set.hpp"

namespace gbrw {

/// constant + sum of coefficient * u_[K]; sets are distinct, non-empty and
/// coefficients non-zero. u_[{}] = -1 is folded into the constant.
struct LinearExpansion {
  DyadicRational constant;
  std::vector<std::pair<IndexSet, DyadicRational>> terms;

  DyadicRational evaluate(std::span<const Sign> u) const {
    DyadicRational v = constant;
    for (const auto& [k, c] : terms) {
      if (max_of_set(u, k) > 0) {
        v += c;
      } else {
        v -= c;
      }
    }
    return v;
  }
};

/// Rewrites prod_j u_[M_j] as a linear combination of maxima over unions:
///   1/2 (-1)^m - 1/2 sum_{K subset {1..m}} (-2)^{|K|} u_[M_K],  M_K = union of M_j, j in K.
/// Coefficients of repeated unions are merged.
inline LinearExpansion linearize_product(std::span<const IndexSet> sets, unsigned cap = kDefaultExpansionCap) {
  const auto m = static_cast<unsigned>(sets.size());
  check_capacity("number of sets in expansion", m, cap);

  // Coefficients in units of 1/2; |value| <= 3^m fits easily in 64 bits for m <= 39.
  std::map<IndexSet, long long> half_units;
  std::vector<IndexSet> unions(std::size_t{1} << m);
  for (std::uint64_t k = 0; k < unions.size(); ++k) {
    if (k) {
      const int low = std::countr_zero(k);
      unions[k] = unions[k & (k - 1)] | sets[static_cast<std::size_t>(low)];
    }
    const int card = std::popcount(k);
    // -1/2 (-2)^card in half units: -(-2)^card.
    const long long c = (card % 2 ? 1LL : -1LL) << card;
    half_units[unions[k]] += c;
  }

  LinearExpansion e;
  long long constant_half = (m % 2) ? -1 : 1;
  if (auto it = half_units.find(IndexSet{}); it != half_units.end()) {
    constant_half -= it->second;  // u_[{}] = -1
    half_units.erase(it);
  }
  e.constant = DyadicRational(DyadicRational::Integer(constant_half), 1);
  for (const auto& [k, c] : half_units)
    if (c != 0) e.terms.emplace_back(k, DyadicRational(DyadicRational::Integer(c), 1));
  return e;
}

/// Linear form of psi_{n-1} for the family B(n); phi_n is this times u_n.
inline LinearExpansion expand_phi(const BetaFamily& beta, unsigned cap = kDefaultExpansionCap) {
  return linearize_product(beta.members(), cap);
}

}  // namespace gbrw
