#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "divrank/rank.hpp"
#include "test_support.hpp"

using namespace divrank;

namespace {

std::vector<std::size_t> sorted_copy(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// Min and max of a^T X w over the vertices maximizing z^T X w, by enumeration.
struct BruteExtremes {
  double best = -1e300;
  double lo = 1e300;
  double hi = -1e300;
};

BruteExtremes brute_extremes(const std::vector<double>& z, const std::vector<double>& a, const std::vector<double>& w) {
  const std::size_t m = z.size(), n = w.size();
  std::vector<std::pair<double, double>> vals;  // (score value, diversity)
  std::vector<std::size_t> slots(n);
  std::vector<bool> used(m, false);
  auto rec = [&](auto&& self, std::size_t j) -> void {
    if (j == n) {
      ExtremeAssignment x{slots};
      vals.emplace_back(weighted_value(x, z, w), weighted_value(x, a, w));
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
  BruteExtremes r;
  for (auto& [v, d] : vals) r.best = std::max(r.best, v);
  for (auto& [v, d] : vals)
    if (v >= r.best - 1e-12) {
      r.lo = std::min(r.lo, d);
      r.hi = std::max(r.hi, d);
    }
  return r;
}

}  // namespace

TEST(SortScores, DistinctValues) {
  std::vector<double> z{3, 2, 0};
  auto s = sort_scores(z);
  EXPECT_EQ(s.order, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(s.groups, (std::vector<TieGroup>{{0, 1}, {1, 2}, {2, 3}}));
}

TEST(SortScores, ExactTie) {
  std::vector<double> z{2.5, 2.5, 0};
  auto s = sort_scores(z);
  EXPECT_EQ(s.order, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(s.groups, (std::vector<TieGroup>{{0, 2}, {2, 3}}));
}

TEST(SortScores, TotalTie) {
  std::vector<double> z{1, 1, 1};
  auto s = sort_scores(z);
  EXPECT_EQ(s.groups, (std::vector<TieGroup>{{0, 3}}));
}

TEST(SortScores, ToleranceChainsGroups) {
  std::vector<double> z{1.0, 1.0 + 4e-10, 1.0 - 4e-10, 0.5};
  auto s = sort_scores(z, 1e-9);
  EXPECT_EQ(s.order, (std::vector<std::size_t>{1, 0, 2, 3}));
  EXPECT_EQ(s.groups, (std::vector<TieGroup>{{0, 3}, {3, 4}}));
}

TEST(SortScores, InvariantsOnRandomInput) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> v(-5, 5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> z(1 + trial % 30);
    for (auto& x : z) x = v(rng) * 0.25;
    auto s = sort_scores(z);
    std::size_t covered = 0;
    for (std::size_t g = 0; g < s.groups.size(); ++g) {
      ASSERT_EQ(s.groups[g].begin, covered);
      covered = s.groups[g].end;
      for (std::size_t p = s.groups[g].begin + 1; p < s.groups[g].end; ++p) {
        ASSERT_EQ(s.scores[p], s.scores[p - 1]);
        ASSERT_LT(s.order[p - 1], s.order[p]);
      }
      if (g > 0) ASSERT_GT(s.scores[s.groups[g - 1].end - 1], s.scores[s.groups[g].begin]);
    }
    ASSERT_EQ(covered, z.size());
  }
}

TEST(SortTopScores, AgreesWithFullSortOnPrefix) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> v(-4, 4);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 1 + trial % 25;
    std::vector<double> z(m);
    for (auto& x : z) x = v(rng);
    const std::size_t n = 1 + static_cast<std::size_t>(rng() % m);
    auto full = sort_scores(z);
    auto top = sort_top_scores(z, n);
    ASSERT_GE(top.order.size(), n);
    for (std::size_t p = 0; p < top.order.size(); ++p) ASSERT_EQ(top.order[p], full.order[p]);
    auto a = top_n_with_ties(full, n);
    auto b = top_n_with_ties(top, n);
    EXPECT_EQ(a.certain, b.certain);
    EXPECT_EQ(a.tied, b.tied);
    EXPECT_EQ(a.slots_in_tied, b.slots_in_tied);
  }
}

TEST(TopNWithTies, BoundaryTie) {
  std::vector<double> z{5, 3, 3, 1};
  auto t = top_n_with_ties(sort_scores(z), 2);
  EXPECT_EQ(t.certain, (std::vector<std::size_t>{0}));
  EXPECT_EQ(t.tied, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(t.slots_in_tied, 1u);
  EXPECT_EQ(t.size(), 3u);
}

TEST(TopNWithTies, NoBoundaryTie) {
  std::vector<double> z{3, 2, 0};
  auto t = top_n_with_ties(sort_scores(z), 2);
  EXPECT_EQ(t.certain, (std::vector<std::size_t>{0, 1}));
  EXPECT_TRUE(t.tied.empty());
  EXPECT_EQ(t.slots_in_tied, 0u);
}

TEST(TopNWithTies, TotalTie) {
  std::vector<double> z{1, 1, 1};
  auto t = top_n_with_ties(sort_scores(z), 2);
  EXPECT_TRUE(t.certain.empty());
  EXPECT_EQ(t.tied, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(t.slots_in_tied, 2u);
}

TEST(TopNWithTies, InvariantUnderPositiveAffineMaps) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> v(-6, 6);
  // Powers of two keep the transformed values exact.
  const double scales[] = {0.5, 2.0, 8.0};
  const double shifts[] = {-3.0, 0.0, 16.0};
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 2 + trial % 15;
    std::vector<double> z(m);
    for (auto& x : z) x = v(rng);
    const std::size_t n = 1 + static_cast<std::size_t>(rng() % m);
    auto base = top_n_with_ties(sort_scores(z), n);
    for (double s : scales)
      for (double t : shifts) {
        std::vector<double> y(m);
        for (std::size_t i = 0; i < m; ++i) y[i] = s * z[i] + t;
        auto other = top_n_with_ties(sort_scores(y), n);
        ASSERT_EQ(sorted_copy(other.certain), sorted_copy(base.certain));
        ASSERT_EQ(sorted_copy(other.tied), sorted_copy(base.tied));
        ASSERT_EQ(other.slots_in_tied, base.slots_in_tied);
      }
  }
}

TEST(TopNWithTies, SizeInvariants) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> v(0, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + trial % 12;
    std::vector<double> z(m);
    for (auto& x : z) x = v(rng);
    const std::size_t n = 1 + static_cast<std::size_t>(rng() % m);
    auto t = top_n_with_ties(sort_scores(z), n);
    EXPECT_EQ(t.certain.size() + t.slots_in_tied, n);
    EXPECT_GE(t.size(), n);
    EXPECT_LE(t.slots_in_tied, t.tied.size());
  }
}

TEST(ExtremalDiversity, SingleSlotTie) {
  std::vector<double> z{2.5, 2.5, 0}, a{1, -1, 0}, w{1};
  auto s = sort_scores(z);
  auto t = top_n_with_ties(s, 1);
  auto hi = extremal_diversity(s, t, a, w, Direction::Max);
  auto lo = extremal_diversity(s, t, a, w, Direction::Min);
  EXPECT_EQ(hi.value, 1);
  EXPECT_EQ(hi.assignment.slots, (std::vector<std::size_t>{0}));
  EXPECT_EQ(lo.value, -1);
  EXPECT_EQ(lo.assignment.slots, (std::vector<std::size_t>{1}));
}

TEST(ExtremalDiversity, NoTies) {
  std::vector<double> z{3, 2, 0}, a{1, -1, 0}, w{2, 1};
  auto s = sort_scores(z);
  auto t = top_n_with_ties(s, 2);
  EXPECT_EQ(extremal_diversity(s, t, a, w, Direction::Max).value, 1);
  EXPECT_EQ(extremal_diversity(s, t, a, w, Direction::Min).value, 1);
}

TEST(ExtremalDiversity, ThreeWayGroupFillingTwoSlots) {
  std::vector<double> z{1, 1, 1}, a{5, 1, 3}, w{2, 1};
  auto s = sort_scores(z);
  auto t = top_n_with_ties(s, 2);
  EXPECT_EQ(extremal_diversity(s, t, a, w, Direction::Max).value, 13);
  EXPECT_EQ(extremal_diversity(s, t, a, w, Direction::Min).value, 5);
}

TEST(ExtremalDiversity, DistinctScoresGiveEqualExtremes) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 3 + trial % 20;
    const std::size_t n = 1 + static_cast<std::size_t>(rng() % m);
    std::vector<double> z(m), a(m);
    for (std::size_t i = 0; i < m; ++i) {
      z[i] = nd(rng);
      a[i] = nd(rng);
    }
    auto w = default_weights(n);
    auto s = sort_top_scores(z, n);
    auto t = top_n_with_ties(s, n);
    EXPECT_EQ(t.size(), n);
    auto hi = extremal_diversity(s, t, a, w, Direction::Max);
    auto lo = extremal_diversity(s, t, a, w, Direction::Min);
    EXPECT_EQ(hi.value, lo.value);
    EXPECT_EQ(hi.assignment, lo.assignment);
  }
}

TEST(ExtremalDiversity, MatchesBruteForceOnTinyInstances) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 1000; ++trial) {
    auto inst = testkit::random_tiny_instance(rng, /*integer_data=*/true);
    auto s = sort_scores(inst.c);
    auto t = top_n_with_ties(s, inst.n);
    auto hi = extremal_diversity(s, t, inst.a, inst.w, Direction::Max);
    auto lo = extremal_diversity(s, t, inst.a, inst.w, Direction::Min);
    auto ref = brute_extremes(inst.c, inst.a, inst.w);
    ASSERT_NEAR(hi.value, ref.hi, 1e-12) << "trial " << trial;
    ASSERT_NEAR(lo.value, ref.lo, 1e-12) << "trial " << trial;
    ASSERT_TRUE(is_vertex(hi.assignment, inst.m, inst.n));
    ASSERT_NEAR(weighted_value(hi.assignment, inst.c, inst.w), ref.best, 1e-12);
    ASSERT_NEAR(weighted_value(lo.assignment, inst.c, inst.w), ref.best, 1e-12);
  }
}

TEST(ExtremalDiversity, SwapsInsideGroupsNeverImprove) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    auto inst = testkit::random_tiny_instance(rng, true);
    auto s = sort_scores(inst.c);
    auto t = top_n_with_ties(s, inst.n);
    for (auto dir : {Direction::Max, Direction::Min}) {
      auto ex = extremal_diversity(s, t, inst.a, inst.w, dir);
      for (const auto& g : s.groups) {
        if (g.begin >= inst.n) break;
        const std::size_t end = std::min(g.end, inst.n);
        for (std::size_t p = g.begin; p < end; ++p) {
          // Swap within the slot block.
          for (std::size_t q = p + 1; q < end; ++q) {
            auto x = ex.assignment;
            std::swap(x.slots[p], x.slots[q]);
            const double v = weighted_value(x, inst.a, inst.w);
            if (dir == Direction::Max) ASSERT_LE(v, ex.value + 1e-12);
            else ASSERT_GE(v, ex.value - 1e-12);
          }
          // Replace with a group member left outside the slots.
          for (std::size_t q = g.begin; q < g.end; ++q) {
            const std::size_t cand = s.order[q];
            if (std::find(ex.assignment.slots.begin(), ex.assignment.slots.end(), cand) != ex.assignment.slots.end())
              continue;
            auto x = ex.assignment;
            x.slots[p] = cand;
            const double v = weighted_value(x, inst.a, inst.w);
            if (dir == Direction::Max) ASSERT_LE(v, ex.value + 1e-12);
            else ASSERT_GE(v, ex.value - 1e-12);
          }
        }
      }
    }
  }
}

TEST(SolveUnconstrained, NoTies) {
  std::vector<double> c{3, 2, 0}, a{1, -1, 0}, w{2, 1};
  auto u = solve_unconstrained(c, a, w);
  EXPECT_EQ(u.value, 8);
  EXPECT_EQ(u.x_min.slots, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(u.x_max.slots, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(u.min_div, 1);
  EXPECT_EQ(u.max_div, 1);
}

TEST(SolveUnconstrained, TieGroupFillsBothSlots) {
  std::vector<double> c{3, 3, 0}, a{1, -1, 0}, w{2, 1};
  auto u = solve_unconstrained(c, a, w);
  EXPECT_EQ(u.value, 9);
  EXPECT_EQ(u.x_min.slots, (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(u.min_div, -1);
  EXPECT_EQ(u.x_max.slots, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(u.max_div, 1);
}

TEST(SolveUnconstrained, ZeroFeature) {
  std::vector<double> c{1, 1, 1}, a{0, 0, 0}, w{3, 1};
  auto u = solve_unconstrained(c, a, w);
  EXPECT_EQ(u.min_div, 0);
  EXPECT_EQ(u.max_div, 0);
}
