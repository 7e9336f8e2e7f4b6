#pragma once

// Sorting and selection over score vectors. For rank-one objectives
// sum_k w_k * z_{assigned(k)} with strictly decreasing w, the optimal
// assignments are exactly the descending orders of z; ties make the optimum
// set a product of permutations within tie groups.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "divrank/model.hpp"

namespace divrank {

/// Half-open range [begin, end) of positions in SortedScores::order.
struct TieGroup {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const TieGroup&, const TieGroup&) = default;
};

/// Score-descending view of a vector z. `order` holds indices into z (or into
/// whatever index space the caller remapped them to); equal scores are ordered
/// by ascending index. Consecutive entries whose scores differ by at most the
/// tie tolerance share a group, so adjacent groups are separated by more than
/// the tolerance.
///
/// A view produced by sort_top_scores only covers a top segment of z; that
/// segment always contains every index of the top-n set including boundary
/// ties.
struct SortedScores {
  std::vector<std::size_t> order;
  std::vector<double> scores;
  std::vector<TieGroup> groups;
};

namespace detail {

struct ByScoreDesc {
  std::span<const double> z;
  bool operator()(std::size_t i, std::size_t j) const {
    return z[i] > z[j] || (z[i] == z[j] && i < j);
  }
};

inline void fill_groups(SortedScores& s, double tau) {
  s.groups.clear();
  const std::size_t k = s.order.size();
  std::size_t begin = 0;
  for (std::size_t p = 1; p <= k; ++p) {
    if (p == k || s.scores[p - 1] - s.scores[p] > tau) {
      s.groups.push_back({begin, p});
      begin = p;
    }
  }
}

}  // namespace detail

/// Full descending sort of z with tie groups under absolute tolerance tau.
inline SortedScores sort_scores(std::span<const double> z, double tau = 0.0) {
  SortedScores s;
  s.order.resize(z.size());
  std::iota(s.order.begin(), s.order.end(), std::size_t{0});
  std::sort(s.order.begin(), s.order.end(), detail::ByScoreDesc{z});
  s.scores.resize(z.size());
  for (std::size_t p = 0; p < z.size(); ++p) s.scores[p] = z[s.order[p]];
  detail::fill_groups(s, tau);
  return s;
}

/// Sorted top segment of z that covers the n largest scores plus every score
/// chained to them within tau. Linear selection followed by a sort of the
/// segment only.
inline SortedScores sort_top_scores(std::span<const double> z, std::size_t n, double tau = 0.0) {
  assert(n >= 1 && n <= z.size());
  const std::size_t k = z.size();
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  detail::ByScoreDesc cmp{z};

  std::size_t segment = k;
  if (n < k) {
    std::nth_element(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n - 1), perm.end(), cmp);
    segment = n;
    double lowest = z[perm[n - 1]];
    for (;;) {
      auto first = perm.begin() + static_cast<std::ptrdiff_t>(segment);
      const double cut = lowest - tau;
      auto last = std::partition(first, perm.end(), [&](std::size_t p) { return z[p] >= cut; });
      if (first == last) break;
      for (auto it = first; it != last; ++it) lowest = std::min(lowest, z[*it]);
      segment = static_cast<std::size_t>(last - perm.begin());
      if (tau == 0.0) break;
    }
  }

  perm.resize(segment);
  std::sort(perm.begin(), perm.end(), cmp);

  SortedScores s;
  s.order = std::move(perm);
  s.scores.resize(segment);
  for (std::size_t p = 0; p < segment; ++p) s.scores[p] = z[s.order[p]];
  detail::fill_groups(s, tau);
  return s;
}

/// T_n: the top-n indices including all ties at the rank-n cut.
/// `certain` is in every top-n selection; `slots_in_tied` members of `tied`
/// complete it.
struct TopSet {
  std::vector<std::size_t> certain;
  std::vector<std::size_t> tied;
  std::size_t slots_in_tied = 0;
  // Index into SortedScores::groups of the boundary group, or groups.size()
  // when the cut at rank n falls between two groups.
  std::size_t boundary_group = 0;

  std::size_t size() const { return certain.size() + tied.size(); }
};

inline TopSet top_n_with_ties(const SortedScores& sorted, std::size_t n) {
  assert(n >= 1 && n <= sorted.order.size());
  TopSet top;
  // Group containing position n - 1.
  auto it = std::upper_bound(sorted.groups.begin(), sorted.groups.end(), n - 1,
                             [](std::size_t pos, const TieGroup& g) { return pos < g.end; });
  assert(it != sorted.groups.end());
  const TieGroup g = *it;
  if (g.end == n) {
    top.certain.assign(sorted.order.begin(), sorted.order.begin() + static_cast<std::ptrdiff_t>(n));
    top.boundary_group = sorted.groups.size();
    return top;
  }
  top.certain.assign(sorted.order.begin(), sorted.order.begin() + static_cast<std::ptrdiff_t>(g.begin));
  top.tied.assign(sorted.order.begin() + static_cast<std::ptrdiff_t>(g.begin),
                  sorted.order.begin() + static_cast<std::ptrdiff_t>(g.end));
  top.slots_in_tied = n - g.begin;
  top.boundary_group = static_cast<std::size_t>(it - sorted.groups.begin());
  return top;
}

enum class Direction { Min, Max };

struct Extremal {
  double value = 0.0;
  ExtremeAssignment assignment;
};

/// Extremum of a^T X w over the optimal vertices for the scores behind
/// `sorted`. Each tie group owns a fixed block of slots; inside it the
/// occupants are the group's largest (Max) or smallest (Min) a values laid
/// out against descending weights in descending (Max) or ascending (Min)
/// order. `a` is indexed in the same space as sorted.order.
inline Extremal extremal_diversity(const SortedScores& sorted, const TopSet& top, std::span<const double> a,
                                   std::span<const double> w, Direction dir) {
  const std::size_t n = w.size();
  assert(top.certain.size() + top.slots_in_tied == n);
  Extremal out;
  out.assignment.slots.resize(n);
  std::vector<std::size_t> members;

  auto better = [&](std::size_t i, std::size_t j) {
    if (a[i] != a[j]) return dir == Direction::Max ? a[i] > a[j] : a[i] < a[j];
    return i < j;
  };

  for (const TieGroup& g : sorted.groups) {
    if (g.begin >= n) break;
    members.assign(sorted.order.begin() + static_cast<std::ptrdiff_t>(g.begin),
                   sorted.order.begin() + static_cast<std::ptrdiff_t>(g.end));
    const std::size_t fill = std::min(g.end, n) - g.begin;
    if (g.size() == 1) {
      out.assignment.slots[g.begin] = members[0];
    } else {
      std::partial_sort(members.begin(), members.begin() + static_cast<std::ptrdiff_t>(fill), members.end(),
                        better);
      for (std::size_t s = 0; s < fill; ++s) out.assignment.slots[g.begin + s] = members[s];
    }
  }
  for (std::size_t j = 0; j < n; ++j) out.value += w[j] * a[out.assignment.slots[j]];
  return out;
}

/// Closed-form solve without the diversity constraint, plus the extremes of
/// a^T X w over its (tie-dependent) optimal set.
struct UnconstrainedSolution {
  double value = 0.0;
  double min_div = 0.0;
  double max_div = 0.0;
  ExtremeAssignment x_min;
  ExtremeAssignment x_max;
};

inline UnconstrainedSolution solve_unconstrained(std::span<const double> c, std::span<const double> a,
                                                 std::span<const double> w) {
  const std::size_t n = w.size();
  auto sorted = sort_top_scores(c, n, 0.0);
  auto top = top_n_with_ties(sorted, n);
  UnconstrainedSolution out;
  for (std::size_t j = 0; j < n; ++j) out.value += w[j] * sorted.scores[j];
  auto lo = extremal_diversity(sorted, top, a, w, Direction::Min);
  auto hi = extremal_diversity(sorted, top, a, w, Direction::Max);
  out.min_div = lo.value;
  out.max_div = hi.value;
  out.x_min = std::move(lo.assignment);
  out.x_max = std::move(hi.assignment);
  return out;
}

inline UnconstrainedSolution solve_unconstrained(const Instance& inst) {
  return solve_unconstrained(inst.c, inst.a, inst.w);
}

}  // namespace divrank
