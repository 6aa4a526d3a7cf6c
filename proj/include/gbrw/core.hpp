#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gbrw {

/// A value in {-1,+1}. Increments, rule outputs and truth-table entries all use it.
using Sign = std::int8_t;

inline constexpr Sign kMinus = -1;
inline constexpr Sign kPlus = 1;

/// Largest arity whose 2^n state space is enumerated.
inline constexpr unsigned kDefaultEnumerationCap = 24;
/// Largest number of sets fed to a 2^m linear expansion.
inline constexpr unsigned kDefaultExpansionCap = 20;

/// Raised when a computation would exceed one of the enumeration limits.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(std::string parameter, std::uint64_t value, std::uint64_t limit)
      : std::runtime_error("capacity exceeded: " + parameter + " = " + std::to_string(value) +
                           " > " + std::to_string(limit)),
        parameter_(std::move(parameter)),
        value_(value),
        limit_(limit) {}

  const std::string& parameter() const noexcept { return parameter_; }
  std::uint64_t value() const noexcept { return value_; }
  std::uint64_t limit() const noexcept { return limit_; }

 private:
  std::string parameter_;
  std::uint64_t value_;
  std::uint64_t limit_;
};

inline void check_capacity(const char* parameter, std::uint64_t value, std::uint64_t limit) {
  if (value > limit) throw CapacityError(parameter, value, limit);
}

inline bool is_sign(int v) noexcept { return v == -1 || v == 1; }

inline Sign checked_sign(int v, const char* what = "value") {
  if (!is_sign(v)) throw std::invalid_argument(std::string(what) + " must be -1 or +1");
  return static_cast<Sign>(v);
}

/// Sign vector encoded by a mask: bit k-1 set <=> u_k = -1.
inline std::vector<Sign> signs_from_mask(std::uint64_t mask, unsigned n) {
  std::vector<Sign> u(n);
  for (unsigned k = 0; k < n; ++k) u[k] = ((mask >> k) & 1U) ? kMinus : kPlus;
  return u;
}

inline std::uint64_t mask_from_signs(std::span<const Sign> u) {
  if (u.size() > 64) throw std::invalid_argument("mask_from_signs: more than 64 entries");
  std::uint64_t mask = 0;
  for (std::size_t k = 0; k < u.size(); ++k)
    if (u[k] < 0) mask |= std::uint64_t{1} << k;
  return mask;
}

inline bool is_power_of_two(std::uint64_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace gbrw
