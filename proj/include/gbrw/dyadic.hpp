#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace gbrw {

/// Exact number p / 2^e with p arbitrary precision and e >= 0.
///
/// Canonical form: p odd, or p == 0 and e == 0. Every probability and
/// expectation produced by the moment engine is of this form.
class DyadicRational {
 public:
  using Integer = boost::multiprecision::cpp_int;

  DyadicRational() = default;
  DyadicRational(long long value) : numerator_(value) {}  // NOLINT: implicit from integers is intended

  /// numerator * 2^(-exponent); a negative exponent scales up.
  DyadicRational(Integer numerator, long long exponent) : numerator_(std::move(numerator)) {
    if (exponent < 0) {
      numerator_ <<= static_cast<unsigned>(-exponent);
    } else {
      exponent_ = static_cast<std::uint64_t>(exponent);
    }
    normalize();
  }

  /// 2^power (power may be negative).
  static DyadicRational pow2(long long power) { return DyadicRational(Integer(1), -power); }

  const Integer& numerator() const noexcept { return numerator_; }
  std::uint64_t exponent() const noexcept { return exponent_; }

  bool is_zero() const noexcept { return numerator_.is_zero(); }
  int sign() const noexcept { return numerator_.sign(); }

  DyadicRational operator-() const {
    DyadicRational r = *this;
    r.numerator_ = -r.numerator_;
    return r;
  }

  DyadicRational& operator+=(const DyadicRational& other) {
    if (exponent_ >= other.exponent_) {
      numerator_ += Integer(other.numerator_) << static_cast<unsigned>(exponent_ - other.exponent_);
    } else {
      numerator_ <<= static_cast<unsigned>(other.exponent_ - exponent_);
      numerator_ += other.numerator_;
      exponent_ = other.exponent_;
    }
    normalize();
    return *this;
  }

  DyadicRational& operator-=(const DyadicRational& other) { return *this += -other; }

  DyadicRational& operator*=(const DyadicRational& other) {
    numerator_ *= other.numerator_;
    exponent_ += other.exponent_;
    normalize();
    return *this;
  }

  friend DyadicRational operator+(DyadicRational a, const DyadicRational& b) { return a += b; }
  friend DyadicRational operator-(DyadicRational a, const DyadicRational& b) { return a -= b; }
  friend DyadicRational operator*(DyadicRational a, const DyadicRational& b) { return a *= b; }

  friend bool operator==(const DyadicRational& a, const DyadicRational& b) {
    return a.exponent_ == b.exponent_ && a.numerator_ == b.numerator_;
  }

  friend std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b) {
    const std::uint64_t e = std::max(a.exponent_, b.exponent_);
    const Integer lhs = a.numerator_ << static_cast<unsigned>(e - a.exponent_);
    const Integer rhs = b.numerator_ << static_cast<unsigned>(e - b.exponent_);
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  DyadicRational abs() const {
    DyadicRational r = *this;
    if (r.numerator_ < 0) r.numerator_ = -r.numerator_;
    return r;
  }

  double to_double() const {
    if (numerator_.is_zero()) return 0.0;
    // Keep the top 64 bits so huge numerators do not overflow before scaling.
    const std::size_t bits = boost::multiprecision::msb(boost::multiprecision::abs(numerator_)) + 1;
    const std::size_t drop = bits > 64 ? bits - 64 : 0;
    const Integer head = numerator_ >> drop;
    const double m = head.convert_to<double>();
    return std::ldexp(m, static_cast<int>(drop) - static_cast<int>(exponent_));
  }

  /// "p/2^e", the exact serialization used in reports.
  std::string to_string() const { return numerator_.str() + "/2^" + std::to_string(exponent_); }

  friend std::ostream& operator<<(std::ostream& os, const DyadicRational& d) { return os << d.to_string(); }

 private:
  void normalize() {
    if (numerator_.is_zero()) {
      exponent_ = 0;
      return;
    }
    if (exponent_ == 0) return;
    const std::uint64_t tz = boost::multiprecision::lsb(boost::multiprecision::abs(numerator_));
    const std::uint64_t shift = std::min<std::uint64_t>(tz, exponent_);
    if (shift) {
      numerator_ >>= static_cast<unsigned>(shift);
      exponent_ -= shift;
    }
  }

  Integer numerator_{0};
  std::uint64_t exponent_ = 0;
};

}  // namespace gbrw
