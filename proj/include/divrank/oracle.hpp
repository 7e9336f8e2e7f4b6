#pragma once

// Ground-truth solvers for testing. Deliberately naive and independent of
// the rank/dual/solver code paths: full std::sort of scores, exhaustive
// pairwise breakpoint enumeration, and vertex-pair enumeration.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "divrank/model.hpp"

namespace divrank::oracle {

class SizeCap : public std::length_error {
 public:
  using std::length_error::length_error;
};

namespace detail {

inline std::vector<std::size_t> order_at(const OneSidedProblem& p, double lambda) {
  std::vector<std::pair<double, std::size_t>> z(p.m());
  for (std::size_t i = 0; i < p.m(); ++i) z[i] = {p.c[i] - lambda * p.a[i], i};
  std::sort(z.begin(), z.end(), [](const auto& x, const auto& y) {
    return x.first > y.first || (x.first == y.first && x.second < y.second);
  });
  std::vector<std::size_t> order(p.m());
  for (std::size_t k = 0; k < p.m(); ++k) order[k] = z[k].second;
  return order;
}

}  // namespace detail

/// g(lambda) by a full sort.
inline double dual_value(const OneSidedProblem& p, double lambda) {
  auto order = detail::order_at(p, lambda);
  double g = p.b2 * lambda;
  for (std::size_t k = 0; k < p.n(); ++k) g += p.w[k] * (p.c[order[k]] - lambda * p.a[order[k]]);
  return g;
}

/// Slope of g at a point that is not a breakpoint.
inline double dual_slope(const OneSidedProblem& p, double lambda) {
  auto order = detail::order_at(p, lambda);
  double s = p.b2;
  for (std::size_t k = 0; k < p.n(); ++k) s -= p.w[k] * p.a[order[k]];
  return s;
}

/// 0 and every pairwise crossing (c_i - c_j)/(a_i - a_j) >= 0, sorted, unique.
inline std::vector<double> candidate_breakpoints(const OneSidedProblem& p) {
  const double eps = p.parallel_threshold();
  std::vector<double> pts{0.0};
  for (std::size_t i = 0; i < p.m(); ++i)
    for (std::size_t j = i + 1; j < p.m(); ++j) {
      if (std::abs(p.a[i] - p.a[j]) <= eps) continue;
      const double t = (p.c[i] - p.c[j]) / (p.a[i] - p.a[j]);
      if (t >= 0.0) pts.push_back(t);
    }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

namespace detail {

// Slope of g on the open interval to the right of pts[k].
inline double right_slope(const OneSidedProblem& p, const std::vector<double>& pts, std::size_t k) {
  const double t = k + 1 < pts.size() ? 0.5 * (pts[k] + pts[k + 1]) : pts[k] + std::max(1.0, std::abs(pts[k]));
  return dual_slope(p, t);
}

}  // namespace detail

struct DualOracleResult {
  double lambda_star = 0.0;
  double g_star = 0.0;
  std::vector<double> breakpoints;  // all candidates, including 0
};

/// Global minimizer of g over lambda >= 0. The minimizer is 0 or a
/// breakpoint; slopes between consecutive candidates are nondecreasing, so
/// the smallest candidate with a nonnegative slope to its right is the
/// smallest minimizer. Throws std::domain_error when g decreases forever.
inline DualOracleResult oracle_dual_breakpoints(const OneSidedProblem& p, std::size_t size_cap = 2000) {
  if (p.m() > size_cap) throw SizeCap("oracle_dual_breakpoints: m exceeds size cap");
  DualOracleResult r;
  r.breakpoints = candidate_breakpoints(p);
  const auto& pts = r.breakpoints;
  std::size_t lo = 0, hi = pts.size();  // first k in [lo, hi) with right slope >= 0
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (detail::right_slope(p, pts, mid) >= 0.0)
      hi = mid;
    else
      lo = mid + 1;
  }
  if (lo == pts.size()) throw std::domain_error("oracle_dual_breakpoints: dual is unbounded below");
  r.lambda_star = pts[lo];
  r.g_star = dual_value(p, r.lambda_star);
  return r;
}

/// Breakpoints > 0 where the slope of g actually changes, by exhaustive scan
/// of every interval between consecutive candidates.
inline std::vector<double> oracle_kinks(const OneSidedProblem& p, std::size_t size_cap = 200) {
  if (p.m() > size_cap) throw SizeCap("oracle_kinks: m exceeds size cap");
  auto pts = candidate_breakpoints(p);
  double scale = 0.0;
  for (std::size_t k = 0; k < p.n(); ++k) scale += p.w[k];
  scale *= 1.0 + p.max_abs_a();
  std::vector<double> slopes(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) slopes[k] = detail::right_slope(p, pts, k);
  std::vector<double> kinks;
  for (std::size_t k = 1; k < pts.size(); ++k)
    if (std::abs(slopes[k] - slopes[k - 1]) > 1e-12 * scale) kinks.push_back(pts[k]);
  return kinks;
}

/// Indices in the top-n of c - lambda a, counting anything within `tol` of
/// the n-th score as tied. Every optimal primal solution at an exact dual
/// optimum is supported here.
inline std::vector<std::size_t> support_at(const OneSidedProblem& p, double lambda, double tol = 1e-9) {
  auto order = detail::order_at(p, lambda);
  const std::size_t nth = order[p.n() - 1];
  const double cut = p.c[nth] - lambda * p.a[nth];
  double scale = 0.0;
  for (std::size_t i = 0; i < p.m(); ++i) scale = std::max(scale, std::abs(p.c[i] - lambda * p.a[i]));
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < p.m(); ++i)
    if (p.c[i] - lambda * p.a[i] >= cut - tol * (1.0 + scale)) s.push_back(i);
  std::sort(s.begin(), s.end());
  return s;
}

struct TinyResult {
  bool feasible = false;
  double objective = -std::numeric_limits<double>::infinity();
  PrimalMixture best;
};

/// Exact optimum of the two-sided problem for m <= 7, n <= 3 by enumerating
/// every pair of vertices and the best feasible convex combination of each.
/// One extra linear constraint on S_{m,n} puts every vertex of the feasible
/// region on an edge of S_{m,n}, so two vertices always suffice.
inline TinyResult brute_force_tiny(const Instance& inst) {
  if (inst.m > 7 || inst.n > 3) throw SizeCap("brute_force_tiny: requires m <= 7, n <= 3");
  const std::size_t m = inst.m, n = inst.n;

  struct Vertex {
    ExtremeAssignment x;
    double obj;
    double div;
  };
  std::vector<Vertex> vs;
  std::vector<std::size_t> slots(n);
  std::vector<bool> used(m, false);
  auto rec = [&](auto&& self, std::size_t j) -> void {
    if (j == n) {
      ExtremeAssignment x{slots};
      vs.push_back({x, weighted_value(x, inst.c, inst.w), weighted_value(x, inst.a, inst.w)});
      return;
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (used[i]) continue;
      used[i] = true;
      slots[j] = i;
      self(self, j + 1);
      used[i] = false;
    }
  };
  rec(rec, 0);

  TinyResult r;
  auto consider = [&](const Vertex& v1, const Vertex& v2, double rho) {
    const double obj = rho * v1.obj + (1.0 - rho) * v2.obj;
    if (obj > r.objective) {
      r.feasible = true;
      r.objective = obj;
      r.best = make_mixture(v1.x, v2.x, rho, inst.c, inst.a, inst.w);
    }
  };

  for (std::size_t s = 0; s < vs.size(); ++s) {
    for (std::size_t t = s; t < vs.size(); ++t) {
      const Vertex& v1 = vs[s];
      const Vertex& v2 = vs[t];
      // diversity(rho) = v2.div + rho (v1.div - v2.div), rho in [0, 1]
      double lo = 0.0, hi = 1.0;
      const double slope = v1.div - v2.div;
      if (slope == 0.0) {
        if (v2.div < inst.b1 || v2.div > inst.b2) continue;
      } else {
        double r1 = (inst.b1 - v2.div) / slope;
        double r2 = (inst.b2 - v2.div) / slope;
        if (r1 > r2) std::swap(r1, r2);
        lo = std::max(lo, r1);
        hi = std::min(hi, r2);
        if (lo > hi) continue;
      }
      consider(v1, v2, v1.obj >= v2.obj ? hi : lo);
    }
  }
  return r;
}

}  // namespace divrank::oracle
