#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "gbrw/core.hpp"

namespace gbrw {

/// Finite set of positive integers, stored as a bitset (bit i-1 <=> i is a member).
///
/// Sets that only use indices 1..64 live inline. Ordering is the numeric order of
/// the underlying bitmask, so for small sets it coincides with the subset-lattice
/// index used by truth tables: {} < {1} < {2} < {1,2} < {3} < ...
class IndexSet {
 public:
  using Word = std::uint64_t;

  IndexSet() = default;

  IndexSet(std::initializer_list<std::uint32_t> members) {
    for (auto m : members) insert_new(m);
  }

  template <class Range>
  static IndexSet from_range(const Range& members) {
    IndexSet s;
    for (auto m : members) s.insert_new(static_cast<std::uint32_t>(m));
    return s;
  }

  static IndexSet from_mask(std::uint64_t mask) {
    IndexSet s;
    if (mask != 0) s.words_.push_back(mask);
    return s;
  }

  /// {lo, lo+1, ..., hi}; empty when lo > hi.
  static IndexSet interval(std::uint32_t lo, std::uint32_t hi) {
    if (lo == 0) throw std::invalid_argument("IndexSet: indices are positive");
    IndexSet s;
    if (lo > hi) return s;
    s.words_.assign((hi + 63) / 64, 0);
    for (std::uint32_t i = lo; i <= hi;) {
      const std::uint32_t bit = (i - 1) % 64;
      const std::uint32_t span = std::min<std::uint32_t>(64 - bit, hi - i + 1);
      const Word chunk = span == 64 ? ~Word{0} : ((Word{1} << span) - 1) << bit;
      s.words_[(i - 1) / 64] |= chunk;
      i += span;
    }
    return s;
  }

  bool empty() const noexcept { return words_.empty(); }

  std::size_t size() const noexcept {
    std::size_t n = 0;
    for (Word w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  bool contains(std::uint32_t i) const noexcept {
    if (i == 0) return false;
    const std::size_t w = (i - 1) / 64;
    return w < words_.size() && ((words_[w] >> ((i - 1) % 64)) & 1U);
  }

  /// Largest member, 0 for the empty set.
  std::uint32_t max() const noexcept {
    if (words_.empty()) return 0;
    const Word top = words_.back();
    return static_cast<std::uint32_t>((words_.size() - 1) * 64 + (64 - std::countl_zero(top)));
  }

  bool fits_mask() const noexcept { return words_.size() <= 1; }

  std::uint64_t mask() const {
    if (!fits_mask()) throw std::invalid_argument("IndexSet::mask: member larger than 64");
    return words_.empty() ? 0 : words_[0];
  }

  std::span<const Word> words() const noexcept { return {words_.data(), words_.size()}; }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      Word bits = words_[w];
      while (bits) {
        const int b = std::countr_zero(bits);
        f(static_cast<std::uint32_t>(w * 64 + b + 1));
        bits &= bits - 1;
      }
    }
  }

  std::vector<std::uint32_t> members() const {
    std::vector<std::uint32_t> out;
    out.reserve(size());
    for_each([&](std::uint32_t i) { out.push_back(i); });
    return out;
  }

  void insert(std::uint32_t i) {
    if (i == 0) throw std::invalid_argument("IndexSet: indices are positive");
    const std::size_t w = (i - 1) / 64;
    if (w >= words_.size()) words_.resize(w + 1, 0);
    words_[w] |= Word{1} << ((i - 1) % 64);
  }

  bool is_subset_of(const IndexSet& other) const noexcept {
    if (words_.size() > other.words_.size()) return false;
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & ~other.words_[w]) return false;
    return true;
  }

  IndexSet& operator|=(const IndexSet& other) {
    if (other.words_.size() > words_.size()) words_.resize(other.words_.size(), 0);
    for (std::size_t w = 0; w < other.words_.size(); ++w) words_[w] |= other.words_[w];
    return *this;
  }

  IndexSet& operator&=(const IndexSet& other) {
    if (words_.size() > other.words_.size()) words_.resize(other.words_.size());
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
    trim();
    return *this;
  }

  /// Symmetric difference.
  IndexSet& operator^=(const IndexSet& other) {
    if (other.words_.size() > words_.size()) words_.resize(other.words_.size(), 0);
    for (std::size_t w = 0; w < other.words_.size(); ++w) words_[w] ^= other.words_[w];
    trim();
    return *this;
  }

  friend IndexSet operator|(IndexSet a, const IndexSet& b) { return a |= b; }
  friend IndexSet operator&(IndexSet a, const IndexSet& b) { return a &= b; }
  friend IndexSet operator^(IndexSet a, const IndexSet& b) { return a ^= b; }

  std::size_t intersection_size(const IndexSet& other) const noexcept {
    const std::size_t n = std::min(words_.size(), other.words_.size());
    std::size_t c = 0;
    for (std::size_t w = 0; w < n; ++w) c += static_cast<std::size_t>(std::popcount(words_[w] & other.words_[w]));
    return c;
  }

  std::size_t union_size(const IndexSet& other) const noexcept {
    return size() + other.size() - intersection_size(other);
  }

  friend bool operator==(const IndexSet& a, const IndexSet& b) noexcept {
    return std::equal(a.words_.begin(), a.words_.end(), b.words_.begin(), b.words_.end());
  }

  friend std::strong_ordering operator<=>(const IndexSet& a, const IndexSet& b) noexcept {
    if (a.words_.size() != b.words_.size()) return a.words_.size() <=> b.words_.size();
    for (std::size_t w = a.words_.size(); w-- > 0;)
      if (a.words_[w] != b.words_[w]) return a.words_[w] <=> b.words_[w];
    return std::strong_ordering::equal;
  }

  std::size_t hash() const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (Word w : words_) h ^= std::hash<Word>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

  /// "{1,2,5}", "{}" for the empty set.
  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for_each([&](std::uint32_t i) {
      if (!first) s += ',';
      s += std::to_string(i);
      first = false;
    });
    return s + "}";
  }

 private:
  void insert_new(std::uint32_t i) {
    if (contains(i)) throw std::invalid_argument("IndexSet: duplicate member " + std::to_string(i));
    insert(i);
  }

  void trim() {
    while (!words_.empty() && words_.back() == 0) words_.pop_back();
  }

  boost::container::small_vector<Word, 1> words_;
};

struct IndexSetHash {
  std::size_t operator()(const IndexSet& s) const noexcept { return s.hash(); }
};

/// u_[K]: -1 for the empty set, otherwise the maximum of u_k over k in K.
inline Sign max_of_set(std::span<const Sign> u, const IndexSet& K) {
  if (K.empty()) return kMinus;
  if (K.max() > u.size())
    throw std::invalid_argument("max_of_set: index " + std::to_string(K.max()) + " exceeds length " +
                                std::to_string(u.size()));
  Sign result = kMinus;
  K.for_each([&](std::uint32_t k) {
    if (u[k - 1] > 0) result = kPlus;
  });
  return result;
}

/// "{{1},{1,2}}".
inline std::string to_string(std::span<const IndexSet> sets) {
  std::string s = "{";
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (i) s += ',';
    s += sets[i].to_string();
  }
  return s + "}";
}

}  // namespace gbrw
