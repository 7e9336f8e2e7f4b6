#pragma once

// The dual function of the one-sided problem
//
//   g(lambda) = max_{X in S_{m,n}} (c - lambda a)^T X w + b2 lambda,   lambda >= 0,
//
// is convex and piecewise linear. g is evaluated by ranking z = c - lambda a;
// its one-sided derivatives are b2 minus the max / min of a^T X w over the
// optimal vertices at lambda, and its kinks are crossings z_i = z_j that
// involve a top-n coordinate.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "divrank/model.hpp"
#include "divrank/rank.hpp"

namespace divrank {

/// Candidate indices still in play, ascending.
struct ActiveSet {
  std::vector<std::size_t> indices;

  static ActiveSet all(std::size_t m) {
    ActiveSet s;
    s.indices.resize(m);
    std::iota(s.indices.begin(), s.indices.end(), std::size_t{0});
    return s;
  }
  std::size_t size() const { return indices.size(); }
};

/// g and its one-sided derivatives at `lambda`, restricted to an active set.
/// All index-valued fields use original candidate indices.
struct DualEvaluation {
  double lambda = 0.0;
  double g = 0.0;
  double g_minus = 0.0;
  double g_plus = 0.0;
  double div_min = 0.0;  // min a^T X w over the optimal vertices
  double div_max = 0.0;  // max a^T X w over the optimal vertices
  SortedScores sorted;
  TopSet topset;
  ExtremeAssignment x_min_div;
  ExtremeAssignment x_max_div;
};

/// Relative tie tolerance applied when evaluating at a traced kink.
inline constexpr double kKinkTieTolerance = 1e-9;

namespace detail {

inline void remap(std::vector<std::size_t>& v, const std::vector<std::size_t>& to) {
  for (auto& i : v) i = to[i];
}

}  // namespace detail

inline DualEvaluation eval_dual(const OneSidedProblem& p, double lambda, const ActiveSet& active, double tau = 0.0) {
  const std::size_t n = p.n();
  std::vector<double> z(active.size());
  for (std::size_t k = 0; k < active.size(); ++k) {
    const std::size_t i = active.indices[k];
    z[k] = p.c[i] - lambda * p.a[i];
  }

  DualEvaluation ev;
  ev.lambda = lambda;
  ev.sorted = sort_top_scores(z, n, tau);
  // Active indices are ascending, so local tie order equals original index order.
  detail::remap(ev.sorted.order, active.indices);
  ev.topset = top_n_with_ties(ev.sorted, n);

  double top_sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) top_sum += p.w[j] * ev.sorted.scores[j];
  ev.g = top_sum + p.b2 * lambda;

  auto lo = extremal_diversity(ev.sorted, ev.topset, p.a, p.w, Direction::Min);
  auto hi = extremal_diversity(ev.sorted, ev.topset, p.a, p.w, Direction::Max);
  ev.div_min = lo.value;
  ev.div_max = hi.value;
  ev.x_min_div = std::move(lo.assignment);
  ev.x_max_div = std::move(hi.assignment);
  ev.g_minus = p.b2 - ev.div_max;
  ev.g_plus = p.b2 - ev.div_min;
  return ev;
}

/// Evaluation at a point expected to be a kink: near-ties within
/// kKinkTieTolerance * max|z| are grouped so the derivative jump is seen.
inline DualEvaluation eval_dual_at_kink(const OneSidedProblem& p, double lambda, const ActiveSet& active) {
  double scale = 0.0;
  for (auto i : active.indices) scale = std::max(scale, std::abs(p.c[i] - lambda * p.a[i]));
  return eval_dual(p, lambda, active, kKinkTieTolerance * scale);
}

namespace detail {

// Crossing point of lines z_i(t) = c_i - t a_i and z_j(t); computed from the
// data directly so that the same pair always yields the same double.
inline double crossing(const OneSidedProblem& p, std::size_t i, std::size_t j) {
  return (p.c[i] - p.c[j]) / (p.a[i] - p.a[j]);
}

}  // namespace detail

/// Smallest kink of g strictly greater than ev.lambda, or +infinity when g is
/// affine on [ev.lambda, inf). Pairs are (i, j) with j in the top set that
/// holds just to the right of ev.lambda and i any active index.
inline double kink_right(const OneSidedProblem& p, const DualEvaluation& ev, const ActiveSet& active) {
  const double eps = p.parallel_threshold();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j : ev.x_min_div.slots) {
    for (std::size_t i : active.indices) {
      if (std::abs(p.a[i] - p.a[j]) <= eps) continue;
      const double t = detail::crossing(p, i, j);
      if (t > ev.lambda && t < best) best = t;
    }
  }
  return best;
}

/// Largest kink of g in [0, ev.lambda), or nullopt when g is affine on
/// [0, ev.lambda]. Mirror of kink_right using the top set just to the left.
inline std::optional<double> kink_left(const OneSidedProblem& p, const DualEvaluation& ev, const ActiveSet& active) {
  const double eps = p.parallel_threshold();
  double best = -1.0;
  bool found = false;
  for (std::size_t j : ev.x_max_div.slots) {
    for (std::size_t i : active.indices) {
      if (std::abs(p.a[i] - p.a[j]) <= eps) continue;
      const double t = detail::crossing(p, i, j);
      if (t < ev.lambda && t >= 0.0 && t > best) {
        best = t;
        found = true;
      }
    }
  }
  if (!found) return std::nullopt;
  return best;
}

}  // namespace divrank
