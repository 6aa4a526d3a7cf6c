#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "gbrw/core.hpp"

namespace gbrw {

/// In-place GF(2) zeta transform over the subset lattice of {0..n-1}.
///
/// bits holds one bit per subset S (bit index S). After the call bit S is the
/// XOR of the input bits over all T subset of S. The transform is an involution,
/// so the same routine computes the Moebius inverse. Cost O(n 2^n / 64) words.
inline void subset_zeta_gf2(std::span<std::uint64_t> bits, unsigned n) {
  static constexpr std::uint64_t kLow[6] = {
      0x5555555555555555ULL, 0x3333333333333333ULL, 0x0F0F0F0F0F0F0F0FULL,
      0x00FF00FF00FF00FFULL, 0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL,
  };
  for (unsigned j = 0; j < n && j < 6; ++j) {
    const unsigned shift = 1U << j;
    for (auto& w : bits) w ^= (w & kLow[j]) << shift;
  }
  for (unsigned j = 6; j < n; ++j) {
    const std::size_t stride = std::size_t{1} << (j - 6);
    for (std::size_t base = 0; base < bits.size(); base += 2 * stride)
      for (std::size_t w = base; w < base + stride; ++w) bits[w + stride] ^= bits[w];
  }
}

inline std::size_t words_for_arity(unsigned n) { return n >= 6 ? (std::size_t{1} << (n - 6)) : 1; }

/// A function psi: {-1,+1}^n -> {-1,+1}, stored as one bit per input.
///
/// Input u is indexed by S = {k : u_k = -1} (bit k-1 of the index). The stored
/// bit is 1 exactly when psi(u) = -1.
class TruthTable {
 public:
  explicit TruthTable(unsigned arity = 0, unsigned cap = kDefaultEnumerationCap) : arity_(arity) {
    check_capacity("truth table arity", arity, cap);
    bits_.assign(words_for_arity(arity), 0);
  }

  template <class F>
  static TruthTable from_function(unsigned arity, F&& f, unsigned cap = kDefaultEnumerationCap) {
    TruthTable t(arity, cap);
    for (std::uint64_t s = 0; s < t.size(); ++s)
      if (f(s) < 0) t.bits_[s / 64] |= std::uint64_t{1} << (s % 64);
    return t;
  }

  static TruthTable from_signs(std::span<const Sign> values) {
    if (values.empty() || !is_power_of_two(values.size()))
      throw std::invalid_argument("TruthTable: number of entries must be a power of two");
    const auto arity = static_cast<unsigned>(std::countr_zero(values.size()));
    return from_function(arity, [&](std::uint64_t s) { return checked_sign(values[s], "truth table entry"); });
  }

  /// Takes ownership of a packed minus-bit vector; bits outside the table are cleared.
  static TruthTable from_bits(unsigned arity, std::vector<std::uint64_t> bits) {
    TruthTable t(arity, 64);
    if (bits.size() != t.bits_.size()) throw std::invalid_argument("TruthTable::from_bits: wrong word count");
    t.bits_ = std::move(bits);
    t.clear_padding();
    return t;
  }

  unsigned arity() const noexcept { return arity_; }
  std::uint64_t size() const noexcept { return std::uint64_t{1} << arity_; }

  Sign value(std::uint64_t mask) const {
    if (mask >= size()) throw std::out_of_range("TruthTable::value: index out of range");
    return ((bits_[mask / 64] >> (mask % 64)) & 1U) ? kMinus : kPlus;
  }

  Sign operator[](std::uint64_t mask) const { return value(mask); }

  /// Evaluates on a sign vector; only the first arity entries are read.
  Sign operator()(std::span<const Sign> u) const {
    if (u.size() < arity_) throw std::invalid_argument("TruthTable: input shorter than arity");
    return value(mask_from_signs(u.first(arity_)));
  }

  void set(std::uint64_t mask, Sign v) {
    if (mask >= size()) throw std::out_of_range("TruthTable::set: index out of range");
    const std::uint64_t bit = std::uint64_t{1} << (mask % 64);
    if (v < 0) {
      bits_[mask / 64] |= bit;
    } else {
      bits_[mask / 64] &= ~bit;
    }
  }

  std::span<const std::uint64_t> minus_bits() const noexcept { return bits_; }

  std::uint64_t minus_count() const noexcept {
    std::uint64_t c = 0;
    for (auto w : bits_) c += static_cast<std::uint64_t>(std::popcount(w));
    return c;
  }

  /// True when the value depends only on how many coordinates are -1.
  bool is_symmetric() const {
    std::vector<int> level(arity_ + 1, 0);
    for (std::uint64_t s = 0; s < size(); ++s) {
      const int pc = std::popcount(s);
      const int v = value(s);
      if (level[pc] == 0) {
        level[pc] = v;
      } else if (level[pc] != v) {
        return false;
      }
    }
    return true;
  }

  friend bool operator==(const TruthTable&, const TruthTable&) = default;

 private:
  void clear_padding() {
    if (arity_ < 6) bits_[0] &= (std::uint64_t{1} << size()) - 1;
  }

  unsigned arity_;
  std::vector<std::uint64_t> bits_;
};

}  // namespace gbrw
