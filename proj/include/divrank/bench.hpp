#pragma once

// Runtime harness comparing the dual search without screening ("alg1") and
// with screening ("alg2") over a grid of (m, n). Each repetition draws a fresh
// seeded instance; only the solve call is timed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "divrank/datagen.hpp"
#include "divrank/solver.hpp"

namespace divrank::bench {

struct BenchConfig {
  std::vector<std::size_t> m_list{100, 300, 1000, 3000, 10000};
  std::vector<std::size_t> n_list{10, 30};
  std::size_t reps = 20;
  double alpha = 0.5;
  std::uint64_t seed = 0;
};

struct BenchCell {
  std::size_t m = 0;
  std::size_t n = 0;
  std::string algorithm;  // "alg1" (no screening) or "alg2" (screening)
  std::vector<double> times_ms;
  bool all_exact = true;

  double mean() const {
    if (times_ms.empty()) return 0.0;
    double s = 0.0;
    for (double t : times_ms) s += t;
    return s / static_cast<double>(times_ms.size());
  }
  // Sample standard deviation.
  double stddev() const {
    if (times_ms.size() < 2) return 0.0;
    const double mu = mean();
    double s = 0.0;
    for (double t : times_ms) s += (t - mu) * (t - mu);
    return std::sqrt(s / static_cast<double>(times_ms.size() - 1));
  }
  double median() const {
    if (times_ms.empty()) return 0.0;
    auto v = times_ms;
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size() / 2;
    return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
  }
};

/// Seed of repetition `rep` in cell (m, n).
inline std::uint64_t instance_seed(std::uint64_t seed, std::size_t m, std::size_t n, std::size_t rep) {
  return derive_seed(derive_seed(derive_seed(seed, m), n), rep);
}

/// Reference alg2 runtimes (ms) for the synthetic grid, shown side by side
/// with local timings only.
inline std::optional<double> reference_ms(std::size_t m, std::size_t n) {
  struct Row {
    std::size_t m;
    double n10, n30;
  };
  static constexpr Row rows[] = {
      {100, 0.8, 1.7}, {300, 1.2, 2.1}, {1000, 2.5, 3.7}, {3000, 5.6, 7.3}, {10000, 14.3, 19.1}};
  for (const auto& r : rows) {
    if (r.m != m) continue;
    if (n == 10) return r.n10;
    if (n == 30) return r.n30;
  }
  return std::nullopt;
}

inline double time_solve_ms(const Instance& inst, bool screening, bool* exact = nullptr) {
  SolveOptions opts;
  opts.dual.screening = screening;
  const auto t0 = std::chrono::steady_clock::now();
  auto sol = solve(inst, opts);
  const auto t1 = std::chrono::steady_clock::now();
  if (exact) *exact = sol.stats.exact;
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

/// Runs the grid, timing alg1 and/or alg2 on the same instances.
inline std::vector<BenchCell> run_bench(const BenchConfig& cfg, bool with_alg1 = true, bool with_alg2 = true) {
  std::vector<BenchCell> cells;
  for (std::size_t n : cfg.n_list) {
    for (std::size_t m : cfg.m_list) {
      if (n > m) continue;
      BenchCell c1{m, n, "alg1", {}, true};
      BenchCell c2{m, n, "alg2", {}, true};
      for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
        GenConfig g;
        g.m = m;
        g.n = n;
        g.alpha = cfg.alpha;
        g.seed = instance_seed(cfg.seed, m, n, rep);
        const Instance inst = gen_synthetic(g);
        bool exact = true;
        if (with_alg1) {
          c1.times_ms.push_back(time_solve_ms(inst, false, &exact));
          c1.all_exact = c1.all_exact && exact;
        }
        if (with_alg2) {
          c2.times_ms.push_back(time_solve_ms(inst, true, &exact));
          c2.all_exact = c2.all_exact && exact;
        }
      }
      if (with_alg1) cells.push_back(std::move(c1));
      if (with_alg2) cells.push_back(std::move(c2));
    }
  }
  return cells;
}

inline void write_csv(std::ostream& os, const std::vector<BenchCell>& cells) {
  os << "m,n,algorithm,mean_ms,std_ms,reps\n";
  for (const auto& c : cells)
    os << c.m << ',' << c.n << ',' << c.algorithm << ',' << c.mean() << ',' << c.stddev() << ','
       << c.times_ms.size() << '\n';
}

}  // namespace divrank::bench
