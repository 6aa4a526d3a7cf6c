#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gbrw/ergodicity.hpp"
#include "gbrw/moments.hpp"
#include "gbrw/walk_sim.hpp"

namespace gbrw::report {

inline std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Writes the whole content to path via a temporary file and a rename.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string rho_csv(const MomentReport& r) {
  std::ostringstream s;
  s << "k,rho_exact,rho,cesaro\n";
  for (std::size_t k = 0; k < r.rho.size(); ++k)
    s << k + 1 << ',' << r.rho[k].to_string() << ',' << num(r.rho[k].to_double()) << ',' << num(r.cesaro_A[k]) << '\n';
  return s.str();
}

inline std::string theta_csv(const MomentReport& r) {
  std::ostringstream s;
  s << "k,l,theta\n";
  for (std::size_t k = 0; k < r.theta.size(); ++k)
    for (std::size_t l = 0; l < r.theta[k].size(); ++l) s << k + 1 << ',' << l + 1 << ',' << num(r.theta[k][l]) << '\n';
  return s.str();
}

inline std::string set_diag_csv(const SetSequenceReport& r, const std::optional<IntersectionReport>& d) {
  std::ostringstream s;
  s << "n,first_match_ratio,match_fraction,d_n\n";
  for (std::size_t i = 0; i < r.first_match_ratio.size(); ++i) {
    s << i + 1 << ',' << num(r.first_match_ratio[i]) << ',' << num(r.match_fraction[i]) << ',';
    if (d && i < d->d.size()) s << num(d->d[i]);
    s << '\n';
  }
  return s.str();
}

inline std::string paths_csv(const PathPair& p) {
  std::ostringstream s;
  s << "k,x,y\n";
  for (std::size_t k = 0; k <= p.n; ++k) s << k << ',' << p.x[k] << ',' << p.y[k] << '\n';
  return s.str();
}

inline std::string cov_summary_csv(const MonteCarloSummary& m) {
  std::ostringstream s;
  s << "replicate,final_covariation\n";
  for (std::size_t r = 0; r < m.finals.size(); ++r) s << r << ',' << num(m.finals[r]) << '\n';
  return s.str();
}

inline std::string ks_report_csv(const std::vector<double>& sample, std::size_t points = 201) {
  std::vector<double> sorted(sample);
  std::sort(sorted.begin(), sorted.end());
  std::ostringstream s;
  s << "x,empirical_cdf,reference_cdf\n";
  for (std::size_t i = 0; i < points; ++i) {
    const double x = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(points - 1);
    const auto below = std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
    s << num(x) << ',' << num(static_cast<double>(below) / static_cast<double>(sorted.size())) << ','
      << num(arcsine_reference_cdf(x)) << '\n';
  }
  return s.str();
}

inline std::string beta_array_csv(const BetaArray& a) {
  std::ostringstream s;
  s << "n,k,beta\n";
  for (std::size_t n = 1; n < a.rows.size(); ++n)
    for (std::size_t k = 0; k < a.rows[n].size(); ++k) s << n << ',' << k << ',' << int(a.rows[n][k]) << '\n';
  return s.str();
}

/// Binary PPM: row n, column k; black for beta = 1, white otherwise (and outside k <= n).
inline std::string beta_array_ppm(const BetaArray& a) {
  const std::size_t rows = a.rows.size() - 1;
  const std::size_t cols = rows + 1;
  std::string out = "P6\n" + std::to_string(cols) + " " + std::to_string(rows) + "\n255\n";
  out.reserve(out.size() + rows * cols * 3);
  for (std::size_t n = 1; n <= rows; ++n)
    for (std::size_t k = 0; k < cols; ++k) {
      const bool on = k <= n && a.rows[n][k];
      const char c = on ? '\0' : '\xff';
      out.append(3, c);
    }
  return out;
}

inline std::string orbits_csv(const OrbitDecomposition& d) {
  std::ostringstream s;
  s << "cycle,length\n";
  for (std::size_t i = 0; i < d.cycles.size(); ++i) s << i << ',' << d.cycles[i] << '\n';
  return s.str();
}

}  // namespace gbrw::report
