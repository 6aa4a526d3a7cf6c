#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gbrw/core.hpp"
#include "gbrw/index_set.hpp"
#include "gbrw/truth_table.hpp"

namespace gbrw {

/// The sets K with beta_{n,K} = 1 for one step n.
///
/// The family represents psi_{n-1} as the product of u_[K] over its members;
/// every member is a subset of {1, ..., n-1}. The empty set is a member
/// exactly when the step carries a global sign flip.
class BetaFamily {
 public:
  explicit BetaFamily(unsigned step = 1) : step_(step) {
    if (step == 0) throw std::invalid_argument("BetaFamily: step must be >= 1");
  }

  BetaFamily(unsigned step, std::vector<IndexSet> members) : BetaFamily(step) {
    std::sort(members.begin(), members.end());
    if (std::adjacent_find(members.begin(), members.end()) != members.end())
      throw std::invalid_argument("BetaFamily: duplicate member");
    for (const auto& k : members)
      if (k.max() >= step)
        throw std::invalid_argument("BetaFamily: member " + k.to_string() + " is not a subset of {1,...," +
                                    std::to_string(step - 1) + "}");
    members_ = std::move(members);
  }

  /// Family whose dense coefficient vector (bit K <=> K is a member) is bits.
  static BetaFamily from_dense(unsigned step, std::span<const std::uint64_t> bits) {
    BetaFamily f(step);
    const std::uint64_t size = std::uint64_t{1} << (step - 1);
    for (std::uint64_t w = 0; w < bits.size(); ++w) {
      std::uint64_t word = bits[w];
      while (word) {
        const std::uint64_t k = w * 64 + static_cast<std::uint64_t>(std::countr_zero(word));
        if (k < size) f.members_.push_back(IndexSet::from_mask(k));
        word &= word - 1;
      }
    }
    return f;
  }

  unsigned step() const noexcept { return step_; }
  unsigned arity() const noexcept { return step_ - 1; }
  const std::vector<IndexSet>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }

  bool contains(const IndexSet& k) const { return std::binary_search(members_.begin(), members_.end(), k); }

  /// The same coefficients viewed at a later step.
  BetaFamily at_step(unsigned step) const {
    if (step < step_) throw std::invalid_argument("BetaFamily::at_step: cannot shrink the step");
    BetaFamily f = *this;
    f.step_ = step;
    return f;
  }

  /// Dense coefficient bits over K(step-1); requires step-1 <= cap.
  std::vector<std::uint64_t> dense(unsigned cap = kDefaultEnumerationCap) const {
    check_capacity("beta family arity", arity(), cap);
    std::vector<std::uint64_t> bits(words_for_arity(arity()), 0);
    for (const auto& k : members_) {
      const std::uint64_t m = k.mask();
      bits[m / 64] |= std::uint64_t{1} << (m % 64);
    }
    return bits;
  }

  friend bool operator==(const BetaFamily&, const BetaFamily&) = default;

  std::string to_string() const { return gbrw::to_string(std::span<const IndexSet>(members_)); }

 private:
  unsigned step_;
  std::vector<IndexSet> members_;
};

/// Family of the pointwise product of two rules at the same step.
/// Exponents add mod 2, so this is the symmetric difference of the members.
inline BetaFamily operator*(const BetaFamily& a, const BetaFamily& b) {
  const unsigned step = std::max(a.step(), b.step());
  std::vector<IndexSet> out;
  std::set_symmetric_difference(a.members().begin(), a.members().end(), b.members().begin(),
                                b.members().end(), std::back_inserter(out));
  return BetaFamily(step, std::move(out));
}

/// psi(u) = prod over members K of u_[K]. Reads u_1..u_{step-1}.
inline Sign eval_psi(const BetaFamily& beta, std::span<const Sign> u) {
  if (u.size() < beta.arity())
    throw std::invalid_argument("eval_psi: input has " + std::to_string(u.size()) + " entries, step needs " +
                                std::to_string(beta.arity()));
  int v = 1;
  for (const auto& k : beta.members()) v *= max_of_set(u, k);
  return static_cast<Sign>(v);
}

/// Unique beta family of a truth table (step = arity + 1).
///
/// With S = {k : u_k = -1}, u_[K] = -1 exactly when K is a subset of S, so the
/// minus-indicator of the table is the subset-sum mod 2 of the coefficients;
/// the coefficients are recovered with the (self-inverse) GF(2) zeta transform.
inline BetaFamily truth_to_beta(const TruthTable& tt) {
  std::vector<std::uint64_t> bits(tt.minus_bits().begin(), tt.minus_bits().end());
  subset_zeta_gf2(bits, tt.arity());
  return BetaFamily::from_dense(tt.arity() + 1, bits);
}

inline TruthTable beta_to_truth(const BetaFamily& beta, unsigned cap = kDefaultEnumerationCap) {
  check_capacity("beta family arity", beta.arity(), cap);
  auto bits = beta.dense(cap);
  subset_zeta_gf2(bits, beta.arity());
  return TruthTable::from_bits(beta.arity(), std::move(bits));
}

}  // namespace gbrw
