#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gbrw/beta_family.hpp"
#include "gbrw/core.hpp"
#include "gbrw/index_set.hpp"
#include "gbrw/set_sequence.hpp"
#include "gbrw/truth_table.hpp"

namespace gbrw {

/// Right-continuous {-1,+1}-valued step function on the real line.
///
/// values[i] holds on [jumps[i-1], jumps[i]); consecutive values differ, so every
/// listed point is a genuine jump.
struct StepFunction {
  std::vector<double> jumps;
  std::vector<Sign> values;

  static StepFunction sign() { return {{0.0}, {kMinus, kPlus}}; }
  static StepFunction constant(Sign v) { return {{}, {v}}; }

  void validate() const {
    if (values.size() != jumps.size() + 1) throw std::invalid_argument("StepFunction: need one more value than jumps");
    for (auto v : values) checked_sign(v, "step function value");
    for (std::size_t i = 0; i < jumps.size(); ++i) {
      if (!std::isfinite(jumps[i])) throw std::invalid_argument("StepFunction: jump locations must be finite");
      if (i && !(jumps[i] > jumps[i - 1])) throw std::invalid_argument("StepFunction: jumps need a positive minimum gap");
      if (values[i] == values[i + 1])
        throw std::invalid_argument("StepFunction: no jump at " + std::to_string(jumps[i]));
    }
  }

  /// f(z). Exactly at a jump the right value is used when at_jump > 0 and the
  /// left value when at_jump < 0 (sgn(0) = at_jump for the sign function).
  Sign operator()(double z, Sign at_jump) const {
    const auto it = std::upper_bound(jumps.begin(), jumps.end(), z);
    auto idx = static_cast<std::size_t>(it - jumps.begin());
    if (at_jump < 0 && idx > 0 && jumps[idx - 1] == z) --idx;
    return values[idx];
  }
};

class RecyclingRule;
using RulePtr = std::shared_ptr<const RecyclingRule>;

/// Generators: each defines psi_n for every n >= 1 (psi_0 lives on the rule).
namespace rules {
struct Identity {};
struct Negation {};
/// psi_n = u_1 ... u_n (the bootstrap random walk).
struct Product {};
/// psi_n = sgn(u_1 + ... + u_n).
struct Levy {
  Sign sgn0 = kMinus;
};
/// sgn at powers of two, max * sgn elsewhere (sgn(0) = -1).
struct ModifiedLevy {};
/// psi_n = max(u_1..u_n) * sgn(u_1 + ... + u_{n-1}) (sgn(0) = -1).
struct ModifiedLevyMax {};
/// psi_n = max(u_1..u_n).
struct RunningMax {};
/// psi_{k-1} = max(u_{k-m}, ..., u_{k-1}).
struct WindowMax {
  std::uint32_t m;
};
/// psi_{k-1} = prod_{j in M_k} u_j.
struct ExtendedBrw {
  SetSequence sets;
};
/// psi_{k-1} = eps_k with eps_k = -1 on a Beatty set of density p.
struct SignFlips {
  double density;
};
/// psi_{k-1} = f((u_1 + ... + u_{k-1}) / sqrt(k)).
struct Symmetric {
  StepFunction f;
  Sign sgn0 = kMinus;
};
/// B(k) = first min(count, floor((k-1)/size)) blocks {j size + 1, ..., (j+1) size}.
struct DisjointBlocks {
  std::uint32_t size;
  std::uint32_t count;
};
/// psi_{k-1} = inner psi_{k-2}(u_1..u_{k-2}) * u_{k-1}.
struct Predictable {
  RulePtr inner;
};
/// Listed steps use the stored family, the rest the fallback rule.
struct ExplicitBeta {
  std::map<unsigned, BetaFamily> steps;
  RulePtr fallback;
  std::map<unsigned, TruthTable> tables;  ///< filled by RecyclingRule for fast evaluation
};
/// Listed steps use the stored table of psi_{step-1}, the rest the fallback rule.
struct ExplicitTruth {
  std::map<unsigned, TruthTable> steps;
  RulePtr fallback;
};
/// psi_n = base psi_n * max(u_1..u_n) where flip[n] is set.
struct MaxRepair {
  RulePtr base;
  std::vector<bool> flip;
};
}  // namespace rules

using Generator = std::variant<rules::Identity, rules::Negation, rules::Product, rules::Levy, rules::ModifiedLevy,
                               rules::ModifiedLevyMax, rules::RunningMax, rules::WindowMax, rules::ExtendedBrw,
                               rules::SignFlips, rules::Symmetric, rules::DisjointBlocks, rules::Predictable,
                               rules::ExplicitBeta, rules::ExplicitTruth, rules::MaxRepair>;

namespace detail {
template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

inline Sign sgn(long long s, Sign at_zero) { return s > 0 ? kPlus : (s < 0 ? kMinus : at_zero); }

inline bool beatty_member(std::uint64_t k, double p) {
  return std::floor(static_cast<double>(k) * p) > std::floor(static_cast<double>(k - 1) * p);
}

inline Sign symmetric_value(const rules::Symmetric& s, long long sum, std::uint64_t k) {
  if (s.f.jumps.size() == 1 && s.f.jumps[0] == 0.0) {
    if (sum == 0) return s.sgn0 > 0 ? s.f.values[1] : s.f.values[0];
    return sum > 0 ? s.f.values[1] : s.f.values[0];
  }
  if (s.f.jumps.empty()) return s.f.values[0];
  return s.f(static_cast<double>(sum) / std::sqrt(static_cast<double>(k)), s.sgn0);
}
}  // namespace detail

class RuleCursor;

/// A recycling rule: psi_0 plus a generator for psi_n, n >= 1.
///
/// eta_k = psi_{k-1}(xi_1, ..., xi_{k-1}) xi_k. Rules are immutable values and
/// are cheap to copy (nested rules are shared).
class RecyclingRule {
 public:
  RecyclingRule(Sign psi0, Generator generator, std::string name)
      : psi0_(checked_sign(psi0, "psi0")), generator_(std::move(generator)), name_(std::move(name)) {
    if (auto* e = std::get_if<rules::ExplicitBeta>(&generator_)) {
      if (!e->fallback) throw std::invalid_argument("explicit rule needs a fallback");
      e->tables.clear();
      for (const auto& [step, fam] : e->steps) {
        if (step != fam.step()) throw std::invalid_argument("explicit rule: family stored under the wrong step");
        if (fam.arity() <= kDefaultEnumerationCap) e->tables.emplace(step, beta_to_truth(fam));
      }
    }
    if (auto* e = std::get_if<rules::ExplicitTruth>(&generator_)) {
      if (!e->fallback) throw std::invalid_argument("explicit rule needs a fallback");
      for (const auto& [step, tt] : e->steps)
        if (step != tt.arity() + 1) throw std::invalid_argument("explicit rule: table stored under the wrong step");
    }
  }

  Sign psi0() const noexcept { return psi0_; }
  const Generator& generator() const noexcept { return generator_; }
  const std::string& name() const noexcept { return name_; }

  RecyclingRule with_psi0(Sign psi0) const {
    RecyclingRule r = *this;
    r.psi0_ = checked_sign(psi0, "psi0");
    return r;
  }

  /// psi_n(u_1..u_n) with n = u.size().
  Sign psi(std::span<const Sign> u) const;

  /// Table of psi_n over {-1,+1}^n.
  TruthTable truth_table(unsigned n, unsigned cap = kDefaultEnumerationCap) const;

  /// B(step), the beta family of psi_{step-1}. B(1) is {} or {{}} according to psi_0.
  /// Builtins with a known family return it directly; otherwise psi_{step-1}
  /// is enumerated (arity <= cap) and converted.
  BetaFamily beta_family(unsigned step, unsigned cap = kDefaultEnumerationCap) const;

  /// The family of B(step) when it is known without enumeration.
  std::optional<BetaFamily> closed_family(unsigned step) const;

  /// Builtins whose ergodicity criterion holds at every n.
  bool ergodic_closed_form() const noexcept {
    return psi0_ < 0 && (std::holds_alternative<rules::RunningMax>(generator_) ||
                         std::holds_alternative<rules::ModifiedLevy>(generator_) ||
                         std::holds_alternative<rules::ModifiedLevyMax>(generator_));
  }

 private:
  Sign psi0_;
  Generator generator_;
  std::string name_;
};

/// Incremental evaluator of psi_j along one increment sequence.
///
/// psi() is psi_j(u_1..u_j) for the j increments pushed so far. Builtins update
/// in O(1) amortized per push. The rule must outlive the cursor.
class RuleCursor {
 public:
  explicit RuleCursor(const RecyclingRule& rule) : rule_(&rule) { reset(); }

  RuleCursor(const RuleCursor&) = delete;
  RuleCursor& operator=(const RuleCursor&) = delete;
  RuleCursor(RuleCursor&&) noexcept = default;
  RuleCursor& operator=(RuleCursor&&) noexcept = default;

  Sign psi() const noexcept { return psi_; }
  std::uint64_t steps() const noexcept { return j_; }

  /// eta = psi * xi, then consumes xi.
  Sign step(Sign xi) {
    const auto eta = static_cast<Sign>(psi_ * xi);
    push(xi);
    return eta;
  }

  void reset() {
    j_ = 0;
    sum_ = prev_sum_ = 0;
    all_minus_ = true;
    product_ = kPlus;
    window_count_ = 0;
    ring_pos_ = 0;
    ring_.clear();
    history_.clear();
    prefix_product_.assign(1, kPlus);
    minus_mask_ = 0;
    block_plus_ = false;
    block_product_ = kPlus;
    psi_ = rule_->psi0();
    std::visit(detail::Overloaded{
                   [&](const rules::WindowMax& w) { ring_.assign(w.m, kMinus); },
                   [&](const rules::ExtendedBrw& e) {
                     if (const auto* w = std::get_if<SetSequence::Window>(&e.sets.kind())) ring_.assign(w->m, kPlus);
                   },
                   [&](const rules::Predictable& p) { reset_child(*p.inner); },
                   [&](const rules::ExplicitBeta& e) { reset_child(*e.fallback); },
                   [&](const rules::ExplicitTruth& e) { reset_child(*e.fallback); },
                   [&](const rules::MaxRepair& m) { reset_child(*m.base); },
                   [](const auto&) {},
               },
               rule_->generator());
  }

  void push(Sign u) {
    ++j_;
    prev_sum_ = sum_;
    sum_ += u;
    if (u > 0) all_minus_ = false;
    product_ = static_cast<Sign>(product_ * u);
    psi_ = std::visit([&](const auto& g) { return advance(g, u); }, rule_->generator());
  }

 private:
  void reset_child(const RecyclingRule& r) {
    if (child_ && &child_->rule() == &r) {
      child_->reset();
    } else {
      child_ = std::make_unique<RuleCursor>(r);
    }
  }
  const RecyclingRule& rule() const noexcept { return *rule_; }

  Sign advance(const rules::Identity&, Sign) { return kPlus; }
  Sign advance(const rules::Negation&, Sign) { return kMinus; }
  Sign advance(const rules::Product&, Sign) { return product_; }
  Sign advance(const rules::Levy& l, Sign) { return detail::sgn(sum_, l.sgn0); }
  Sign advance(const rules::ModifiedLevy&, Sign) {
    if (!is_power_of_two(j_) && all_minus_) return kPlus;
    return detail::sgn(sum_, kMinus);
  }
  Sign advance(const rules::ModifiedLevyMax&, Sign) {
    const Sign mx = all_minus_ ? kMinus : kPlus;
    return static_cast<Sign>(mx * detail::sgn(prev_sum_, kMinus));
  }
  Sign advance(const rules::RunningMax&, Sign) { return all_minus_ ? kMinus : kPlus; }
  Sign advance(const rules::WindowMax& w, Sign u) {
    // ring_ holds the last m increments (initialised to -1, which never counts).
    if (ring_[ring_pos_] > 0) --window_count_;
    ring_[ring_pos_] = u;
    if (u > 0) ++window_count_;
    ring_pos_ = (ring_pos_ + 1) % w.m;
    return window_count_ > 0 ? kPlus : kMinus;
  }
  Sign advance(const rules::ExtendedBrw& e, Sign u) {
    const std::uint64_t k = j_ + 1;
    if (e.sets.nested()) {
      prefix_product_.push_back(static_cast<Sign>(prefix_product_.back() * u));
      const std::uint64_t len = *e.sets.prefix_length(k);
      if (len > j_)
        throw std::invalid_argument("extended-brw: M_" + std::to_string(k) + " is not a subset of {1..k-1}");
      return prefix_product_[len];
    }
    if (const auto* w = std::get_if<SetSequence::Window>(&e.sets.kind())) {
      if (ring_[ring_pos_] < 0) --window_count_;
      ring_[ring_pos_] = u;
      if (u < 0) ++window_count_;
      ring_pos_ = (ring_pos_ + 1) % w->m;
      return (window_count_ % 2) ? kMinus : kPlus;
    }
    history_.push_back(u);
    const IndexSet m = e.sets.at(k);
    if (m.max() > j_) throw std::invalid_argument("extended-brw: M_" + std::to_string(k) + " is not a subset of {1..k-1}");
    int v = 1;
    m.for_each([&](std::uint32_t i) { v *= history_[i - 1]; });
    return static_cast<Sign>(v);
  }
  Sign advance(const rules::SignFlips& s, Sign) { return detail::beatty_member(j_ + 1, s.density) ? kMinus : kPlus; }
  Sign advance(const rules::Symmetric& s, Sign) { return detail::symmetric_value(s, sum_, j_ + 1); }
  Sign advance(const rules::DisjointBlocks& d, Sign u) {
    if (j_ <= static_cast<std::uint64_t>(d.size) * d.count) {
      if (u > 0) block_plus_ = true;
      if (j_ % d.size == 0) {
        block_product_ = static_cast<Sign>(block_product_ * (block_plus_ ? kPlus : kMinus));
        block_plus_ = false;
      }
    }
    return block_product_;
  }
  Sign advance(const rules::Predictable&, Sign u) {
    const Sign lagged = child_->psi();
    child_->push(u);
    return static_cast<Sign>(lagged * u);
  }
  Sign advance(const rules::ExplicitBeta& e, Sign u) {
    child_->push(u);
    history_.push_back(u);
    if (u < 0 && j_ <= 64) minus_mask_ |= std::uint64_t{1} << (j_ - 1);
    const auto step = static_cast<unsigned>(j_ + 1);
    if (auto t = e.tables.find(step); t != e.tables.end()) return t->second.value(minus_mask_);
    if (auto it = e.steps.find(step); it != e.steps.end()) return eval_psi(it->second, history_);
    return child_->psi();
  }
  Sign advance(const rules::ExplicitTruth& e, Sign u) {
    child_->push(u);
    if (u < 0 && j_ <= 64) minus_mask_ |= std::uint64_t{1} << (j_ - 1);
    if (auto it = e.steps.find(static_cast<unsigned>(j_ + 1)); it != e.steps.end()) return it->second.value(minus_mask_);
    return child_->psi();
  }
  Sign advance(const rules::MaxRepair& m, Sign u) {
    child_->push(u);
    const Sign base = child_->psi();
    if (j_ < m.flip.size() && m.flip[j_] && all_minus_) return static_cast<Sign>(-base);
    return base;
  }

  const RecyclingRule* rule_;
  Sign psi_ = kPlus;
  std::uint64_t j_ = 0;
  long long sum_ = 0;
  long long prev_sum_ = 0;
  bool all_minus_ = true;
  Sign product_ = kPlus;
  std::vector<Sign> ring_;
  std::size_t ring_pos_ = 0;
  std::uint32_t window_count_ = 0;
  std::vector<Sign> history_;
  std::vector<Sign> prefix_product_;
  std::uint64_t minus_mask_ = 0;
  bool block_plus_ = false;
  Sign block_product_ = kPlus;
  std::unique_ptr<RuleCursor> child_;
};

inline Sign RecyclingRule::psi(std::span<const Sign> u) const {
  RuleCursor c(*this);
  for (auto v : u) c.push(checked_sign(v, "increment"));
  return c.psi();
}

inline TruthTable RecyclingRule::truth_table(unsigned n, unsigned cap) const {
  check_capacity("truth table arity", n, cap);
  RuleCursor c(*this);
  return TruthTable::from_function(
      n,
      [&](std::uint64_t mask) {
        c.reset();
        for (unsigned k = 0; k < n; ++k) c.push(((mask >> k) & 1U) ? kMinus : kPlus);
        return c.psi();
      },
      cap);
}

inline std::optional<BetaFamily> RecyclingRule::closed_family(unsigned step) const {
  if (step == 0) throw std::invalid_argument("beta_family: steps start at 1");
  if (step == 1) return psi0_ < 0 ? BetaFamily(1, {IndexSet{}}) : BetaFamily(1);
  const auto n = step - 1;  // arity of psi_{step-1}
  return std::visit(
      detail::Overloaded{
          [&](const rules::Identity&) -> std::optional<BetaFamily> { return BetaFamily(step); },
          [&](const rules::Negation&) -> std::optional<BetaFamily> { return BetaFamily(step, {IndexSet{}}); },
          [&](const rules::Product&) -> std::optional<BetaFamily> {
            std::vector<IndexSet> m;
            for (std::uint32_t i = 1; i <= n; ++i) m.push_back(IndexSet{i});
            return BetaFamily(step, std::move(m));
          },
          [&](const rules::RunningMax&) -> std::optional<BetaFamily> {
            return BetaFamily(step, {IndexSet::interval(1, n)});
          },
          [&](const rules::WindowMax& w) -> std::optional<BetaFamily> {
            const std::uint32_t lo = step > w.m ? step - w.m : 1;
            return BetaFamily(step, {IndexSet::interval(lo, n)});
          },
          [&](const rules::ExtendedBrw& e) -> std::optional<BetaFamily> {
            const IndexSet m = e.sets.at(step);
            std::vector<IndexSet> singles;
            m.for_each([&](std::uint32_t i) { singles.push_back(IndexSet{i}); });
            return BetaFamily(step, std::move(singles));
          },
          [&](const rules::SignFlips& s) -> std::optional<BetaFamily> {
            return detail::beatty_member(step, s.density) ? BetaFamily(step, {IndexSet{}}) : BetaFamily(step);
          },
          [&](const rules::DisjointBlocks& d) -> std::optional<BetaFamily> {
            const std::uint32_t blocks = std::min<std::uint32_t>(d.count, n / d.size);
            std::vector<IndexSet> m;
            for (std::uint32_t b = 0; b < blocks; ++b) m.push_back(IndexSet::interval(b * d.size + 1, (b + 1) * d.size));
            return BetaFamily(step, std::move(m));
          },
          [&](const rules::Predictable& p) -> std::optional<BetaFamily> {
            auto inner = p.inner->closed_family(step - 1);
            if (!inner) return std::nullopt;
            return inner->at_step(step) * BetaFamily(step, {IndexSet{n}});
          },
          [&](const rules::ExplicitBeta& e) -> std::optional<BetaFamily> {
            if (auto it = e.steps.find(step); it != e.steps.end()) return it->second;
            return e.fallback->closed_family(step);
          },
          [&](const rules::ExplicitTruth& e) -> std::optional<BetaFamily> {
            if (auto it = e.steps.find(step); it != e.steps.end()) return truth_to_beta(it->second);
            return e.fallback->closed_family(step);
          },
          [&](const rules::MaxRepair& m) -> std::optional<BetaFamily> {
            auto base = m.base->closed_family(step);
            if (!base) return std::nullopt;
            if (n < m.flip.size() && m.flip[n]) return *base * BetaFamily(step, {IndexSet::interval(1, n)});
            return base;
          },
          [](const auto&) -> std::optional<BetaFamily> { return std::nullopt; },
      },
      generator_);
}

inline BetaFamily RecyclingRule::beta_family(unsigned step, unsigned cap) const {
  if (auto f = closed_family(step)) return *std::move(f);
  return truth_to_beta(truth_table(step - 1, cap));
}

/// eta_n = psi_{n-1}(u_1..u_{n-1}) u_n for a length-n input (n >= 1).
inline Sign eval_rule_increment(const RecyclingRule& rule, std::span<const Sign> u) {
  if (u.empty()) throw std::invalid_argument("eval_rule_increment: need at least one increment");
  return static_cast<Sign>(rule.psi(u.first(u.size() - 1)) * checked_sign(u.back(), "increment"));
}

/// (eta_1, ..., eta_n) for increments xi.
inline std::vector<Sign> apply_rule(const RecyclingRule& rule, std::span<const Sign> xi) {
  RuleCursor c(rule);
  std::vector<Sign> eta(xi.size());
  for (std::size_t k = 0; k < xi.size(); ++k) eta[k] = c.step(checked_sign(xi[k], "increment"));
  return eta;
}

/// Unique xi with apply_rule(rule, xi) = eta (the map is invertible step by step).
inline std::vector<Sign> invert_rule(const RecyclingRule& rule, std::span<const Sign> eta) {
  RuleCursor c(rule);
  std::vector<Sign> xi(eta.size());
  for (std::size_t k = 0; k < eta.size(); ++k) {
    xi[k] = static_cast<Sign>(c.psi() * checked_sign(eta[k], "increment"));
    c.push(xi[k]);
  }
  return xi;
}

}  // namespace gbrw
