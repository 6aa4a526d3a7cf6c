#pragma once

#include <charconv>
#include <limits>
#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gbrw/core.hpp"
#include "gbrw/rule.hpp"
#include "gbrw/set_sequence.hpp"
#include "gbrw/walk_sim.hpp"

namespace gbrw::builtin {

inline RecyclingRule identity() { return {kPlus, rules::Identity{}, "identity"}; }
inline RecyclingRule negation() { return {kMinus, rules::Negation{}, "negation"}; }
inline RecyclingRule product() { return {kPlus, rules::Product{}, "product"}; }
inline RecyclingRule levy(Sign sgn0 = kMinus) { return {checked_sign(sgn0, "sgn0"), rules::Levy{sgn0}, "levy"}; }
inline RecyclingRule modified_levy() { return {kMinus, rules::ModifiedLevy{}, "modified-levy"}; }
inline RecyclingRule modified_levy_max() { return {kMinus, rules::ModifiedLevyMax{}, "modified-levy-max"}; }
inline RecyclingRule running_max() { return {kMinus, rules::RunningMax{}, "max"}; }

inline RecyclingRule window_max(std::uint32_t m) {
  if (m == 0) throw std::invalid_argument("window-max: window must be >= 1");
  return {kMinus, rules::WindowMax{m}, "window-max:" + std::to_string(m)};
}

inline RecyclingRule extended_brw(SetSequence sets) {
  auto label = "extended-brw:" + sets.label();
  return {kPlus, rules::ExtendedBrw{std::move(sets)}, std::move(label)};
}

inline RecyclingRule sign_flips(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sign-flips: density must lie in [0,1]");
  const Sign psi0 = detail::beatty_member(1, p) ? kMinus : kPlus;
  return {psi0, rules::SignFlips{p}, "sign-flips:" + std::to_string(p)};
}

inline RecyclingRule disjoint_blocks(std::uint32_t kappa, std::uint32_t count) {
  if (kappa == 0) throw std::invalid_argument("disjoint: block size must be >= 1");
  return {kPlus, rules::DisjointBlocks{kappa, count},
          "disjoint:" + std::to_string(kappa) + ":" + std::to_string(count)};
}

/// eta_k = inner psi_{k-2}(xi_1..xi_{k-2}) xi_{k-1} xi_k.
inline RecyclingRule predictable(const RecyclingRule& inner, Sign psi0 = kPlus) {
  return {psi0, rules::Predictable{std::make_shared<const RecyclingRule>(inner)}, "predictable:" + inner.name()};
}

namespace detail {

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

inline double to_double(std::string_view s, std::string_view what) {
  try {
    std::size_t used = 0;
    const std::string str(s);
    const double v = std::stod(str, &used);
    if (used != str.size() || !std::isfinite(v)) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("builtin rule: bad " + std::string(what) + " '" + std::string(s) + "'");
  }
}

inline std::uint32_t to_uint(std::string_view s, std::string_view what) {
  std::uint32_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw std::invalid_argument("builtin rule: bad " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

inline void expect_args(const std::vector<std::string_view>& parts, std::size_t n, std::string_view usage) {
  if (parts.size() != n) throw std::invalid_argument("builtin rule: usage " + std::string(usage));
}

}  // namespace detail

/// Set sequence from prefix:L | prefix-log | window:M | fixed:M | power:A.
inline SetSequence parse_set_sequence(std::string_view spec) {
  const auto parts = detail::split(spec, ':');
  const auto kind = parts[0];
  if (kind == "prefix") {
    detail::expect_args(parts, 2, "prefix:<lambda>");
    return SetSequence::Prefix{detail::to_double(parts[1], "lambda")};
  }
  if (kind == "prefix-log") {
    detail::expect_args(parts, 1, "prefix-log");
    return SetSequence::PrefixLog{};
  }
  if (kind == "window") {
    detail::expect_args(parts, 2, "window:<m>");
    return SetSequence::Window{detail::to_uint(parts[1], "window")};
  }
  if (kind == "fixed") {
    detail::expect_args(parts, 2, "fixed:<m>");
    return SetSequence::Fixed{detail::to_uint(parts[1], "size")};
  }
  if (kind == "power") {
    detail::expect_args(parts, 2, "power:<alpha>");
    return SetSequence::power(detail::to_double(parts[1], "exponent"));
  }
  throw std::invalid_argument("unknown set sequence '" + std::string(spec) + "'");
}

/// Step function from "v0,a1,v1,a2,v2,...": value v0 below jump a1, v1 from a1, ...
inline StepFunction parse_step_function(std::string_view spec) {
  const auto parts = detail::split(spec, ',');
  if (parts.size() % 2 == 0) throw std::invalid_argument("step function: expected v0,a1,v1,...");
  StepFunction f;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i % 2 == 0) {
      f.values.push_back(checked_sign(static_cast<int>(detail::to_double(parts[i], "value")), "step function value"));
    } else {
      f.jumps.push_back(detail::to_double(parts[i], "jump"));
    }
  }
  f.validate();
  return f;
}

/// Colon-separated builtin names, e.g. window-max:3 or extended-brw:prefix:0.5.
/// sgn0 applies to the rules built on sgn.
inline RecyclingRule parse(std::string_view spec, Sign sgn0 = kMinus) {
  const auto parts = detail::split(spec, ':');
  const auto name = parts[0];
  auto rest = [&]() { return spec.size() > name.size() ? spec.substr(name.size() + 1) : std::string_view{}; };
  if (name == "identity") return detail::expect_args(parts, 1, "identity"), identity();
  if (name == "negation") return detail::expect_args(parts, 1, "negation"), negation();
  if (name == "product" || name == "brw") return detail::expect_args(parts, 1, "product"), product();
  if (name == "levy" || name == "sgn") return detail::expect_args(parts, 1, "levy"), levy(sgn0);
  if (name == "modified-levy") return detail::expect_args(parts, 1, "modified-levy"), modified_levy();
  if (name == "modified-levy-max") return detail::expect_args(parts, 1, "modified-levy-max"), modified_levy_max();
  if (name == "max") return detail::expect_args(parts, 1, "max"), running_max();
  if (name == "window-max") {
    detail::expect_args(parts, 2, "window-max:<m>");
    return window_max(detail::to_uint(parts[1], "window"));
  }
  if (name == "extended-brw") {
    if (parts.size() < 2) throw std::invalid_argument("builtin rule: usage extended-brw:<set sequence>");
    return extended_brw(parse_set_sequence(rest()));
  }
  if (name == "sign-flips") {
    detail::expect_args(parts, 2, "sign-flips:<p>");
    return sign_flips(detail::to_double(parts[1], "density"));
  }
  if (name == "symmetric") {
    if (parts.size() != 2) throw std::invalid_argument("builtin rule: usage symmetric:v0,a1,v1,...");
    auto r = symmetric_rule(parse_step_function(parts[1]), sgn0);
    return RecyclingRule(r.psi0(), r.generator(), std::string(spec));
  }
  if (name == "disjoint") {
    if (parts.size() != 2 && parts.size() != 3) throw std::invalid_argument("builtin rule: usage disjoint:<kappa>[:<count>]");
    const auto count = parts.size() == 3 ? detail::to_uint(parts[2], "count") : std::numeric_limits<std::uint32_t>::max();
    return disjoint_blocks(detail::to_uint(parts[1], "block size"), count);
  }
  if (name == "predictable") {
    if (parts.size() == 1) return predictable(identity());
    return predictable(parse(rest(), sgn0));
  }
  throw std::invalid_argument("unknown builtin rule '" + std::string(spec) + "'");
}

/// Names accepted by parse, with their parameters.
inline std::vector<std::string> catalog() {
  return {"identity",
          "negation",
          "product (alias brw)",
          "levy (alias sgn)",
          "modified-levy",
          "modified-levy-max",
          "max",
          "window-max:<m>",
          "extended-brw:prefix:<lambda> | prefix-log | window:<m> | fixed:<m> | power:<alpha>",
          "sign-flips:<p>",
          "symmetric:<v0>,<a1>,<v1>,...",
          "disjoint:<kappa>[:<count>]",
          "predictable[:<inner builtin>]"};
}

}  // namespace gbrw::builtin
