#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "gbrw/index_set.hpp"
#include "gbrw/truth_table.hpp"

namespace gbrw {

/// Alternative building blocks for sign-valued functions on {-1,+1}^n.
///
/// States are labelled by subsets of {1..n} (labels[state] = K) and the
/// subsets carry a strict partial order. Block g_K is -1 at the state labelled
/// K' exactly when K precedes or equals K'. Generic orders cost O(4^n), so the
/// arity is limited to kMaxArity.
class PartialOrderBasis {
 public:
  using Relation = std::function<bool(std::uint64_t, std::uint64_t)>;
  static constexpr unsigned kMaxArity = 10;

  PartialOrderBasis(unsigned arity, std::vector<std::uint64_t> labels, Relation precedes)
      : arity_(arity), labels_(std::move(labels)), precedes_(std::move(precedes)) {
    check_capacity("basis arity", arity, kMaxArity);
    const std::uint64_t size = std::uint64_t{1} << arity;
    if (labels_.size() != size) throw std::invalid_argument("PartialOrderBasis: labels must cover every state");
    states_.assign(size, size);
    for (std::uint64_t s = 0; s < size; ++s) {
      const std::uint64_t k = labels_[s];
      if (k >= size || states_[k] != size) throw std::invalid_argument("PartialOrderBasis: labels are not a bijection");
      states_[k] = s;
    }
    build_order();
  }

  unsigned arity() const noexcept { return arity_; }
  std::uint64_t size() const noexcept { return labels_.size(); }
  std::uint64_t label(std::uint64_t state) const { return labels_.at(state); }
  std::uint64_t state_of(std::uint64_t label) const { return states_.at(label); }
  bool precedes(std::uint64_t a, std::uint64_t b) const { return precedes_(a, b); }

  /// Linear extension of the order.
  const std::vector<std::uint64_t>& topological_order() const noexcept { return topo_; }

  /// g_K evaluated at the state with the given mask encoding.
  Sign block(std::uint64_t k, std::uint64_t state) const {
    const std::uint64_t l = labels_.at(state);
    return (k == l || precedes_(k, l)) ? kMinus : kPlus;
  }

 private:
  void build_order() {
    const std::uint64_t size = labels_.size();
    std::vector<std::vector<std::uint64_t>> succ(size);
    std::vector<std::uint64_t> indegree(size, 0);
    for (std::uint64_t a = 0; a < size; ++a) {
      if (precedes_(a, a)) throw std::invalid_argument("PartialOrderBasis: order is not irreflexive");
      for (std::uint64_t b = 0; b < size; ++b)
        if (a != b && precedes_(a, b)) {
          succ[a].push_back(b);
          ++indegree[b];
        }
    }
    // Transitivity is O(8^n); only checked for small arities.
    if (arity_ <= 6) {
      for (std::uint64_t a = 0; a < size; ++a)
        for (auto b : succ[a])
          for (auto c : succ[b])
            if (!precedes_(a, c)) throw std::invalid_argument("PartialOrderBasis: order is not transitive");
    }
    std::queue<std::uint64_t> ready;
    for (std::uint64_t a = 0; a < size; ++a)
      if (indegree[a] == 0) ready.push(a);
    while (!ready.empty()) {
      const auto a = ready.front();
      ready.pop();
      topo_.push_back(a);
      for (auto b : succ[a])
        if (--indegree[b] == 0) ready.push(b);
    }
    if (topo_.size() != size) throw std::invalid_argument("PartialOrderBasis: order has a cycle");
  }

  unsigned arity_;
  std::vector<std::uint64_t> labels_;
  std::vector<std::uint64_t> states_;
  Relation precedes_;
  std::vector<std::uint64_t> topo_;
};

/// Label by {k : u_k = -1}, order by strict inclusion: g_K = u_[K].
inline PartialOrderBasis max_basis(unsigned n) {
  std::vector<std::uint64_t> labels(std::size_t{1} << n);
  for (std::uint64_t s = 0; s < labels.size(); ++s) labels[s] = s;
  return PartialOrderBasis(n, std::move(labels),
                           [](std::uint64_t a, std::uint64_t b) { return a != b && (a & ~b) == 0; });
}

/// Max basis conjugated by u -> -u: label by {k : u_k = +1}; g_K = -min_K(u), g_{} = -1.
inline PartialOrderBasis min_basis(unsigned n) {
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  std::vector<std::uint64_t> labels(std::size_t{1} << n);
  for (std::uint64_t s = 0; s < labels.size(); ++s) labels[s] = full & ~s;
  return PartialOrderBasis(n, std::move(labels),
                           [](std::uint64_t a, std::uint64_t b) { return a != b && (a & ~b) == 0; });
}

/// Totally unordered: g_K(u) = -1 only at the state labelled K.
inline PartialOrderBasis unordered_basis(unsigned n) {
  std::vector<std::uint64_t> labels(std::size_t{1} << n);
  for (std::uint64_t s = 0; s < labels.size(); ++s) labels[s] = s;
  return PartialOrderBasis(n, std::move(labels), [](std::uint64_t, std::uint64_t) { return false; });
}

/// Exponents gamma with tt(u) = prod_K g_K(u)^{gamma_K}; returns the K with gamma_K = 1.
///
/// Solved by GF(2) back-substitution along a linear extension: the minus-indicator
/// at label K' is the XOR of gamma_K over K preceding or equal to K'.
inline std::vector<IndexSet> change_basis(const TruthTable& tt, const PartialOrderBasis& basis) {
  if (tt.arity() != basis.arity()) throw std::invalid_argument("change_basis: arity mismatch");
  const std::uint64_t size = basis.size();
  std::vector<std::uint8_t> gamma(size, 0);
  for (auto k_prime : basis.topological_order()) {
    std::uint8_t acc = tt.value(basis.state_of(k_prime)) < 0 ? 1 : 0;
    for (std::uint64_t k = 0; k < size; ++k)
      if (gamma[k] && k != k_prime && basis.precedes(k, k_prime)) acc ^= 1;
    gamma[k_prime] = acc;
  }
  std::vector<IndexSet> out;
  for (std::uint64_t k = 0; k < size; ++k)
    if (gamma[k]) out.push_back(IndexSet::from_mask(k));
  return out;
}

/// prod_K g_K(state)^{gamma_K}.
inline Sign eval_in_basis(const PartialOrderBasis& basis, const std::vector<IndexSet>& gamma, std::uint64_t state) {
  int v = 1;
  for (const auto& k : gamma) v *= basis.block(k.mask(), state);
  return static_cast<Sign>(v);
}

}  // namespace gbrw
