#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "gbrw/index_set.hpp"

namespace gbrw {

/// A sequence of index sets M_1, M_2, ... (one per step k).
class SetSequence {
 public:
  /// M_k given explicitly for k = 1..sets.size().
  struct Explicit {
    std::vector<IndexSet> sets;
  };
  /// M_k = {1, ..., floor(lambda k)}, 0 < lambda < 1.
  struct Prefix {
    double lambda;
  };
  /// M_k = {1, ..., floor(ln k)}.
  struct PrefixLog {};
  /// M_k = {k-m, ..., k-1}, truncated at 1.
  struct Window {
    std::uint32_t m;
  };
  /// M_k = {1, ..., min(m, k-1)}: eventually constant.
  struct Fixed {
    std::uint32_t m;
  };
  /// M_k = {1, ..., floor(R(k))} for a user-supplied R.
  struct PrefixFunction {
    std::function<double(double)> r;
    std::string label;
  };

  using Kind = std::variant<Explicit, Prefix, PrefixLog, Window, Fixed, PrefixFunction>;

  template <class K>
    requires std::is_constructible_v<Kind, K&&>
  SetSequence(K&& kind) : kind_(std::forward<K>(kind)) {  // NOLINT: implicit from a kind is intended
    if (auto* p = std::get_if<Prefix>(&kind_); p && !(p->lambda > 0.0 && p->lambda < 1.0))
      throw std::invalid_argument("SetSequence: prefix lambda must lie in (0,1)");
    if (auto* w = std::get_if<Window>(&kind_); w && w->m == 0)
      throw std::invalid_argument("SetSequence: window length must be >= 1");
    if (auto* f = std::get_if<PrefixFunction>(&kind_); f && !f->r)
      throw std::invalid_argument("SetSequence: prefix function is empty");
  }

  static SetSequence power(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("SetSequence: power exponent must lie in (0,1)");
    return SetSequence(PrefixFunction{[alpha](double z) { return std::pow(z, alpha); }, "power:" + std::to_string(alpha)});
  }

  const Kind& kind() const noexcept { return kind_; }

  /// Nested kinds satisfy M_k subset of M_{k+1}, each M_k = {1..prefix_length(k)}.
  bool nested() const noexcept { return !std::holds_alternative<Explicit>(kind_) && !std::holds_alternative<Window>(kind_); }

  /// |M_k| for the nested kinds.
  std::optional<std::uint64_t> prefix_length(std::uint64_t k) const {
    return std::visit(
        [k](const auto& s) -> std::optional<std::uint64_t> {
          using T = std::decay_t<decltype(s)>;
          const double kd = static_cast<double>(k);
          if constexpr (std::is_same_v<T, Prefix>) {
            return static_cast<std::uint64_t>(std::floor(s.lambda * kd));
          } else if constexpr (std::is_same_v<T, PrefixLog>) {
            return static_cast<std::uint64_t>(std::floor(std::log(kd)));
          } else if constexpr (std::is_same_v<T, Fixed>) {
            return std::min<std::uint64_t>(s.m, k - 1);
          } else if constexpr (std::is_same_v<T, PrefixFunction>) {
            const double r = s.r(kd);
            return r <= 0.0 ? 0 : static_cast<std::uint64_t>(std::floor(r));
          } else {
            return std::nullopt;
          }
        },
        kind_);
  }

  /// M_k for k >= 1.
  IndexSet at(std::uint64_t k) const {
    if (k == 0) throw std::invalid_argument("SetSequence::at: steps start at 1");
    if (auto len = prefix_length(k)) return IndexSet::interval(1, static_cast<std::uint32_t>(*len));
    if (const auto* w = std::get_if<Window>(&kind_)) {
      const std::uint64_t lo = k > w->m ? k - w->m : 1;
      return IndexSet::interval(static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(k - 1));
    }
    const auto& e = std::get<Explicit>(kind_);
    if (k > e.sets.size())
      throw std::out_of_range("SetSequence::at: explicit list has " + std::to_string(e.sets.size()) + " sets");
    return e.sets[k - 1];
  }

  std::string label() const {
    return std::visit(
        [](const auto& s) -> std::string {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Explicit>) return "explicit(" + std::to_string(s.sets.size()) + ")";
          else if constexpr (std::is_same_v<T, Prefix>) return "prefix:" + std::to_string(s.lambda);
          else if constexpr (std::is_same_v<T, PrefixLog>) return "prefix-log";
          else if constexpr (std::is_same_v<T, Window>) return "window:" + std::to_string(s.m);
          else if constexpr (std::is_same_v<T, Fixed>) return "fixed:" + std::to_string(s.m);
          else return s.label;
        },
        kind_);
  }

 private:
  Kind kind_;
};

}  // namespace gbrw
