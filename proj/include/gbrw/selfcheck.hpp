#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gbrw/beta_family.hpp"
#include "gbrw/builtins.hpp"
#include "gbrw/ergodicity.hpp"
#include "gbrw/linear_expansion.hpp"
#include "gbrw/moments.hpp"
#include "gbrw/rule.hpp"
#include "gbrw/truth_table.hpp"
#include "gbrw/walk_sim.hpp"

// Cross-checks of the library against independent brute-force computations.
// Sizes are parameters so the CLI can run quick versions and the acceptance
// suite the full ones.
namespace gbrw::check {

struct Result {
  std::string name;
  bool pass = true;
  std::string detail;
  double seconds = 0.0;
};

template <class F>
Result timed(std::string name, F&& body) {
  Result r;
  r.name = std::move(name);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline void fail(Result& r, const std::string& why) {
  if (r.pass) r.detail = why;
  r.pass = false;
}

inline TruthTable random_table(unsigned n, std::mt19937_64& rng) {
  std::vector<std::uint64_t> bits(words_for_arity(n));
  for (auto& w : bits) w = rng();
  return TruthTable::from_bits(n, std::move(bits));
}

inline BetaFamily random_family(unsigned step, std::mt19937_64& rng) {
  std::vector<std::uint64_t> bits(words_for_arity(step - 1));
  for (auto& w : bits) w = rng();
  if (step - 1 < 6) bits[0] &= (std::uint64_t{1} << (std::uint64_t{1} << (step - 1))) - 1;
  return BetaFamily::from_dense(step, bits);
}

/// Random subset of {1..support} with at least one element.
inline IndexSet random_set(unsigned support, std::mt19937_64& rng, unsigned max_size) {
  std::uniform_int_distribution<unsigned> size_d(1, max_size), idx(1, support);
  IndexSet s;
  const unsigned size = size_d(rng);
  while (s.size() < size) s.insert(idx(rng));
  return s;
}

/// Truth -> beta -> truth on every table of arity n_all, and both directions on
/// `count` random tables / families at each arity in `arities`.
inline Result round_trip(unsigned n_all, const std::vector<unsigned>& arities, unsigned count, std::uint64_t seed) {
  return timed("representation round-trip", [&](Result& r) {
    const std::uint64_t tables = std::uint64_t{1} << (std::uint64_t{1} << n_all);
    for (std::uint64_t t = 0; t < tables; ++t) {
      const auto tt = TruthTable::from_bits(n_all, {t});
      if (!(beta_to_truth(truth_to_beta(tt)) == tt)) return fail(r, "exhaustive table " + std::to_string(t));
    }
    std::mt19937_64 rng(seed);
    std::uint64_t checked = tables;
    for (unsigned n : arities)
      for (unsigned i = 0; i < count; ++i) {
        const auto tt = random_table(n, rng);
        if (!(beta_to_truth(truth_to_beta(tt)) == tt)) return fail(r, "random table at n=" + std::to_string(n));
        const auto beta = random_family(n + 1, rng);
        if (!(truth_to_beta(beta_to_truth(beta)) == beta)) return fail(r, "random family at n=" + std::to_string(n));
        checked += 2;
      }
    r.detail = std::to_string(checked) + " conversions";
  });
}

/// Linear expansion against the direct product of maxima at every point.
inline Result linearization(unsigned instances, unsigned max_sets, unsigned support, std::uint64_t seed) {
  return timed("linearization", [&](Result& r) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<unsigned> m_d(1, max_sets);
    for (unsigned i = 0; i < instances; ++i) {
      std::vector<IndexSet> sets(m_d(rng));
      for (auto& s : sets) s = (rng() % 8 == 0) ? IndexSet{} : random_set(support, rng, support);
      const auto e = linearize_product(sets);
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << support); ++mask) {
        const auto u = signs_from_mask(mask, support);
        int direct = 1;
        for (const auto& s : sets) direct *= max_of_set(u, s);
        if (!(e.evaluate(u) == DyadicRational(direct)))
          return fail(r, "instance " + std::to_string(i) + " " + to_string(std::span<const IndexSet>(sets)));
      }
    }
    r.detail = std::to_string(instances) + " instances";
  });
}

/// Expected zeta values (single and pair) against full enumeration.
inline Result moment_oracle(unsigned instances, unsigned support, std::uint64_t seed) {
  return timed("moment oracle", [&](Result& r) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<unsigned> count_d(0, 6);
    auto family = [&]() {
      std::vector<IndexSet> m;
      const unsigned c = count_d(rng);
      for (unsigned j = 0; j < c; ++j) {
        auto s = (rng() % 10 == 0) ? IndexSet{} : random_set(support, rng, 6);
        if (std::find(m.begin(), m.end(), s) == m.end()) m.push_back(std::move(s));
      }
      return BetaFamily(support + 1, std::move(m));
    };
    for (unsigned i = 0; i < instances; ++i) {
      const auto a = family(), b = family();
      const std::vector<BetaFamily> one{a}, two{a, b};
      if (!(expected_zeta(a) == brute_force_expect(one))) return fail(r, "single family " + a.to_string());
      if (!(expected_zeta_pair(a, b) == brute_force_expect(two)))
        return fail(r, "pair " + a.to_string() + " " + b.to_string());
    }
    r.detail = std::to_string(instances) + " family pairs";
  });
}

/// Stabilized rho_k of disjoint-block and window-max rules against their closed forms.
inline Result closed_forms(unsigned max_kappa, unsigned max_m) {
  return timed("closed forms", [&](Result& r) {
    unsigned cases = 0;
    for (unsigned kappa = 1; kappa <= max_kappa; ++kappa)
      for (unsigned m = 0; m <= max_m; ++m) {
        const auto rule = builtin::disjoint_blocks(kappa, m);
        const auto rep = condition_A_partial(rule, 2 * (kappa * m + 2));
        const auto want = closed_form_disjoint(kappa, m);
        if (!rep.stable_rho || !(*rep.stable_rho == want))
          return fail(r, "disjoint kappa=" + std::to_string(kappa) + " m=" + std::to_string(m) + " want " + want.to_string());
        ++cases;
      }
    for (unsigned m = 1; m <= max_m; ++m) {
      const auto rep = condition_A_partial(builtin::window_max(m), 2 * (m + 2));
      if (!rep.stable_rho || !(*rep.stable_rho == window_rho(m)))
        return fail(r, "window-max m=" + std::to_string(m));
      ++cases;
    }
    r.detail = std::to_string(cases) + " closed forms";
  });
}

/// Rule with random psi_0 and random tables for steps 2..max_n+1.
inline RecyclingRule random_truth_rule(unsigned max_n, std::mt19937_64& rng) {
  std::map<unsigned, TruthTable> steps;
  for (unsigned s = 2; s <= max_n + 1; ++s) steps.emplace(s, random_table(s - 1, rng));
  const Sign psi0 = (rng() & 1U) ? kPlus : kMinus;
  return RecyclingRule(psi0, rules::ExplicitTruth{std::move(steps), std::make_shared<const RecyclingRule>(builtin::identity())},
                       "random-truth");
}

/// tau_n is a permutation for random rules and every n <= max_n.
inline Result measure_preservation(unsigned rules_count, unsigned max_n, std::uint64_t seed) {
  return timed("measure preservation", [&](Result& r) {
    std::mt19937_64 rng(seed);
    for (unsigned i = 0; i < rules_count; ++i) {
      const auto rule = random_truth_rule(max_n, rng);
      for (unsigned n = 1; n <= max_n; ++n)
        if (!tau_is_bijection(rule, n)) return fail(r, "rule " + std::to_string(i) + " at n=" + std::to_string(n));
    }
    r.detail = std::to_string(rules_count) + " rules, n <= " + std::to_string(max_n);
  });
}

/// Random explicit-beta rules; the first half keeps the full set at every step.
inline RecyclingRule random_beta_rule(unsigned max_n, bool keep_full, std::mt19937_64& rng) {
  std::map<unsigned, BetaFamily> steps;
  for (unsigned s = 2; s <= max_n + 1; ++s) {
    auto f = random_family(s, rng);
    const auto full = IndexSet::interval(1, s - 1);
    const bool want = keep_full || (rng() % 4 != 0);
    if (f.contains(full) != want) f = f * BetaFamily(s, {full});
    steps.emplace(s, std::move(f));
  }
  const Sign psi0 = (keep_full || rng() % 4 != 0) ? kMinus : kPlus;
  return RecyclingRule(psi0, rules::ExplicitBeta{std::move(steps), std::make_shared<const RecyclingRule>(builtin::running_max()), {}},
                       "random-beta");
}

/// criterion_beta <=> criterion_product, and passing up to n-1 <=> single orbits up to n.
inline Result ergodicity_equivalence(unsigned rules_count, unsigned max_n, std::uint64_t seed) {
  return timed("ergodicity equivalence", [&](Result& r) {
    std::mt19937_64 rng(seed);
    unsigned ergodic = 0;
    for (unsigned i = 0; i < rules_count; ++i) {
      const auto rule = random_beta_rule(max_n, i < rules_count / 2, rng);
      bool orbits_so_far = true;
      for (unsigned n = 0; n <= max_n; ++n) {
        const int b = criterion_beta(rule, n);
        const Sign p = criterion_product(rule, n);
        if ((b == 1) != (p < 0)) return fail(r, "criteria disagree for rule " + std::to_string(i) + " n=" + std::to_string(n));
        if (n == 0) continue;
        // tau_n is built from psi_0..psi_{n-1}, i.e. the criteria up to n-1.
        orbits_so_far = orbits_so_far && orbit_decompose(rule, n).single_orbit;
        if (is_ergodic_up_to(rule, n - 1).ergodic_so_far != orbits_so_far)
          return fail(r, "orbit structure disagrees for rule " + std::to_string(i) + " n=" + std::to_string(n));
      }
      ergodic += orbits_so_far ? 1 : 0;
    }
    r.detail = std::to_string(rules_count) + " rules (" + std::to_string(ergodic) + " ergodic up to n=" +
               std::to_string(max_n) + ")";
  });
}

/// levy fails early; the two modified transformations pass to `horizon`.
inline Result levy_classification(unsigned horizon) {
  return timed("levy classification", [&](Result& r) {
    const auto lv = is_ergodic_up_to(builtin::levy(), horizon);
    if (lv.ergodic_so_far || !lv.first_failure || *lv.first_failure > 4) return fail(r, "levy not rejected by step 4");
    for (const auto& rule : {builtin::modified_levy(), builtin::modified_levy_max()}) {
      const auto v = is_ergodic_up_to(rule, horizon);
      const auto vp = is_ergodic_up_to(rule, horizon, true);
      if (!v.ergodic_so_far || !vp.ergodic_so_far) return fail(r, rule.name() + " rejected");
    }
    r.detail = "levy fails at n=" + std::to_string(*lv.first_failure) + "; modified rules pass to n=" + std::to_string(horizon);
  });
}

/// Recurrence rows against enumerated sgn tables, plus the n=2,3 factorizations.
inline Result beta_array_fidelity(unsigned consistency_n, unsigned big_n, double max_seconds) {
  return timed("beta array fidelity", [&](Result& r) {
    const auto a = sgn_beta_array(consistency_n);
    const auto levy = builtin::levy();
    for (unsigned n = 1; n <= consistency_n; ++n)
      if (!(beta_to_truth(a.family(n)) == levy.truth_table(n))) return fail(r, "row " + std::to_string(n));
    if (a.rows[2] != std::vector<std::uint8_t>{0, 1, 1}) return fail(r, "row 2");
    if (a.rows[3] != std::vector<std::uint8_t>{0, 0, 1, 0}) return fail(r, "row 3");
    const auto t0 = std::chrono::steady_clock::now();
    const auto big = sgn_beta_array(big_n);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (big.rows.size() != big_n + 1) return fail(r, "large array size");
    if (secs > max_seconds) return fail(r, "large array took " + std::to_string(secs) + " s");
    std::ostringstream s;
    s << "rows <= " << consistency_n << " match; n=" << big_n << " in " << secs << " s";
    r.detail = s.str();
  });
}

/// Window-max and the predictable rule: mean [U,V]_1 within 3 SE of the limit.
inline Result gaussian_covariation(std::uint64_t n, std::uint64_t reps, std::uint64_t seed) {
  return timed("gaussian covariation", [&](Result& r) {
    const auto wm = mc_covariation(builtin::window_max(2), n, reps, seed);
    const auto pr = mc_covariation(builtin::predictable(builtin::identity()), n, reps, seed + 1);
    const double zw = std::abs(wm.mean - 0.5) / wm.standard_error;
    const double zp = pr.standard_error > 0 ? std::abs(pr.mean) / pr.standard_error : (pr.mean == 0 ? 0.0 : 1e9);
    std::ostringstream s;
    s << "window-max:2 mean " << wm.mean << " (z=" << zw << "); predictable mean " << pr.mean << " (z=" << zp << ")";
    r.detail = s.str();
    if (zw > 3.0 || zp > 3.0) r.pass = false;
  });
}

/// Exact occupation laws approach the reference CDF; Monte Carlo KS distance below `ks_max`.
inline Result arcsine_limit(unsigned exact_max, std::uint64_t n, std::uint64_t reps, std::uint64_t seed, double ks_max) {
  return timed("non-gaussian limit", [&](Result& r) {
    std::vector<double> dist;
    for (unsigned k = 2; k <= exact_max; ++k) dist.push_back(exact_law_distance(exact_sign_occupation_law(k)));
    for (std::size_t i = 1; i < dist.size(); ++i)
      if (dist[i] > dist[i - 1] + 1e-15) return fail(r, "exact distance increases at n=" + std::to_string(i + 2));
    // Along even n every step is a strict improvement.
    for (std::size_t i = 2; i < dist.size(); i += 2)
      if (!(dist[i] < dist[i - 2])) return fail(r, "exact distance stalls at even n=" + std::to_string(i + 2));
    const auto rep = arcsine_test(n, reps, seed);
    std::ostringstream s;
    s << "exact distance " << dist.front() << " (n=2) -> " << dist.back() << " (n=" << exact_max << "); KS " << rep.ks;
    r.detail = s.str();
    if (!(rep.ks < ks_max)) r.pass = false;
  });
}

/// C(2n-1, n-1) odd iff n is a power of two; sum_{k <= (n-1)/2} C(n,k) = 2^(n-1) for odd n.
inline Result parity_identities(unsigned max_power_n, unsigned max_odd_n) {
  return timed("parity identities", [&](Result& r) {
    for (std::uint64_t n = 1; n <= max_power_n; ++n)
      if ((binomial_parity(2 * n - 1, n - 1) == 1) != is_power_of_two(n)) return fail(r, "n=" + std::to_string(n));
    for (std::uint64_t n = 1; n <= max_odd_n; n += 2) {
      std::uint64_t c = 1, sum = 0;  // C(n,k) built incrementally; exact in 64 bits for n <= 61
      for (std::uint64_t k = 0; k <= (n - 1) / 2; ++k) {
        sum += c;
        c = c * (n - k) / (k + 1);
      }
      if (sum != (std::uint64_t{1} << (n - 1))) return fail(r, "odd n=" + std::to_string(n));
    }
    r.detail = "n <= " + std::to_string(max_power_n) + " and odd n <= " + std::to_string(max_odd_n);
  });
}

}  // namespace gbrw::check
