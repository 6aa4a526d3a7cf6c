// Acceptance run: one line per criterion, full sizes, runtime targets enforced.
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "gbrw/selfcheck.hpp"

using namespace gbrw;

namespace {

struct Criterion {
  int id;
  double limit_seconds;  // 0: no runtime target
  std::function<check::Result()> run;
};

}  // namespace

int main() {
  constexpr std::uint64_t seed = 20240601;
  const std::vector<Criterion> criteria{
      {1, 10.0, [] { return check::round_trip(4, {8, 12, 16}, 1000, seed); }},
      {2, 5.0, [] { return check::linearization(500, 5, 10, seed); }},
      {3, 30.0, [] { return check::moment_oracle(500, 16, seed); }},
      {4, 0.0, [] { return check::closed_forms(5, 5); }},
      {5, 60.0, [] { return check::measure_preservation(50, 14, seed); }},
      {6, 120.0, [] { return check::ergodicity_equivalence(200, 10, seed); }},
      {7, 60.0, [] { return check::levy_classification(16); }},
      {8, 0.0, [] { return check::beta_array_fidelity(14, 800, 10.0); }},
      {9, 60.0, [] { return check::gaussian_covariation(100000, 200, seed); }},
      {10, 300.0, [] { return check::arcsine_limit(20, 100000, 10000, seed, 0.02); }},
      {11, 5.0, [] { return check::parity_identities(4096, 29); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    auto r = c.run();
    if (c.limit_seconds > 0 && r.seconds > c.limit_seconds) {
      r.pass = false;
      r.detail += " [over the " + std::to_string(static_cast<int>(c.limit_seconds)) + " s target]";
    }
    failures += r.pass ? 0 : 1;
    std::printf("%s  %2d  %-28s %8.2f s  %s\n", r.pass ? "PASS" : "FAIL", c.id, r.name.c_str(), r.seconds, r.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
