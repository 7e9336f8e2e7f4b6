#pragma once

// End-to-end solve of
//
//   max c^T X w  s.t.  X in S_{m,n},  b1 <= a^T X w <= b2.
//
// Pipeline: feasibility precheck, reduction to a single upper bound (or
// detection that the unconstrained optimum already satisfies both bounds),
// bisection on the one-dimensional dual with exact kink tracing and optional
// safe screening of candidates, then closed-form primal recovery as a
// mixture of two optimal vertices.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "divrank/dual.hpp"
#include "divrank/model.hpp"
#include "divrank/rank.hpp"

namespace divrank {

// ---------------------------------------------------------------------------
// Feasibility and reduction
// ---------------------------------------------------------------------------

struct FeasibilityReport {
  bool feasible = false;
  double div_min_S = 0.0;  // min of a^T X w over all of S_{m,n}
  double div_max_S = 0.0;  // max of a^T X w over all of S_{m,n}
};

inline FeasibilityReport precheck_feasibility(const Instance& inst) {
  // Ranking by a itself: the Max extreme is the top-n by a, the Min extreme
  // is the top-n by -a laid out in ascending a.
  const std::size_t n = inst.n;
  std::vector<double> neg(inst.a.size());
  std::transform(inst.a.begin(), inst.a.end(), neg.begin(), [](double x) { return -x; });
  auto hi = sort_top_scores(inst.a, n);
  auto lo = sort_top_scores(neg, n);
  FeasibilityReport r;
  for (std::size_t j = 0; j < n; ++j) {
    r.div_max_S += inst.w[j] * hi.scores[j];
    r.div_min_S -= inst.w[j] * lo.scores[j];
  }
  r.feasible = std::max(inst.b1, r.div_min_S) <= std::min(inst.b2, r.div_max_S);
  return r;
}

enum class ReductionKind { AlreadyOptimal, Upper, LowerAsUpper };

struct Reduction {
  ReductionKind kind = ReductionKind::AlreadyOptimal;
  UnconstrainedSolution unconstrained;
  // AlreadyOptimal: an unconstrained optimum inside [b1, b2]. A single
  // extreme assignment when one exists, otherwise a mixture of the two
  // extremal ones.
  PrimalMixture already;
  // Upper / LowerAsUpper: the one-sided problem to hand to the dual search.
  std::optional<OneSidedProblem> problem;
};

inline Reduction reduce_two_sided(const Instance& inst) {
  Reduction r;
  r.unconstrained = solve_unconstrained(inst);
  const auto& u = r.unconstrained;
  if (u.min_div > inst.b2) {
    r.kind = ReductionKind::Upper;
    r.problem = upper_form(inst);
  } else if (u.max_div < inst.b1) {
    r.kind = ReductionKind::LowerAsUpper;
    r.problem = lower_as_upper_form(inst);
  } else {
    r.kind = ReductionKind::AlreadyOptimal;
    if (u.min_div >= inst.b1) {
      r.already = make_mixture(u.x_min, u.x_min, 1.0, inst.c, inst.a, inst.w);
    } else if (u.max_div <= inst.b2) {
      r.already = make_mixture(u.x_max, u.x_max, 1.0, inst.c, inst.a, inst.w);
    } else {
      // min_div < b1 <= b2 < max_div: mix the extremes to land on b2.
      double rho = (inst.b2 - u.max_div) / (u.min_div - u.max_div);
      r.already = make_mixture(u.x_min, u.x_max, std::clamp(rho, 0.0, 1.0), inst.c, inst.a, inst.w);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Dual search
// ---------------------------------------------------------------------------

/// One bisection iteration, for tracing and tests.
struct IterationRecord {
  std::size_t iteration = 0;
  double lambda = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;  // bracket after the iteration's update
  std::size_t active_size = 0;
  std::vector<std::size_t> dropped;
};

struct DualSearchOptions {
  // Bracket width that triggers kink tracing. Unset: 1e-2 * (1 + lambda_max)
  // fixed when the optimum is first bracketed.
  std::optional<double> big_delta;
  double small_delta = 1e-10;
  bool screening = true;
  std::size_t iteration_cap = 200;
  double initial_lambda = 1.0;
  bool record_trace = false;
  std::function<void(const IterationRecord&)> on_iteration;
};

struct DualSearchState {
  double lambda_min = 0.0;
  double lambda_max = std::numeric_limits<double>::infinity();
  double lambda = 1.0;
  ActiveSet active;
  double big_delta = std::numeric_limits<double>::quiet_NaN();
  double small_delta = 1e-10;
  std::size_t iterations = 0;
  std::size_t screen_events = 0;
};

enum class DualOutcome {
  Exact,         // lambda_star satisfies g'_-(lambda*) <= 0 <= g'_+(lambda*)
  Bracket,       // bracket shrank below small_delta without an accepted kink
  IterationCap,  // gave up; bracket reported
  Unbounded,     // doubling ran past the lambda cap; constraint cannot be met
};

constexpr std::string_view to_string(DualOutcome o) {
  switch (o) {
    case DualOutcome::Exact: return "Exact";
    case DualOutcome::Bracket: return "Bracket";
    case DualOutcome::IterationCap: return "IterationCap";
    case DualOutcome::Unbounded: return "Unbounded";
  }
  return "Unknown";
}

struct DualSearchResult {
  DualOutcome outcome = DualOutcome::Exact;
  double lambda_star = 0.0;  // meaningful for Exact
  DualEvaluation final_eval;  // at lambda_star for Exact
  // Evaluations at the bracket ends, for recovery from a bracket.
  std::optional<DualEvaluation> lo_eval;
  std::optional<DualEvaluation> hi_eval;
  DualSearchState state;
  std::vector<std::size_t> dropped;
  std::vector<IterationRecord> trace;
};

/// Drops every active index i that is strictly below all of `top` at both
/// ends of the bracket; such an i has a zero row at the optimum whenever the
/// bracket contains the dual optimum. The members of `top` are never dropped.
inline std::vector<std::size_t> screen_candidates(DualSearchState& state, const OneSidedProblem& p,
                                                  std::span<const std::size_t> top) {
  std::vector<std::size_t> dropped;
  if (!std::isfinite(state.lambda_max)) return dropped;
  const double lo = state.lambda_min;
  const double hi = state.lambda_max;
  double theta_lo = std::numeric_limits<double>::infinity();
  double theta_hi = std::numeric_limits<double>::infinity();
  for (auto i : top) {
    theta_lo = std::min(theta_lo, p.c[i] - lo * p.a[i]);
    theta_hi = std::min(theta_hi, p.c[i] - hi * p.a[i]);
  }
  auto& idx = state.active.indices;
  std::size_t keep = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const std::size_t i = idx[k];
    if (p.c[i] - lo * p.a[i] < theta_lo && p.c[i] - hi * p.a[i] < theta_hi) {
      dropped.push_back(i);
    } else {
      idx[keep++] = i;
    }
  }
  idx.resize(keep);
  ++state.screen_events;
  return dropped;
}

inline DualSearchResult solve_dual_bisection(const OneSidedProblem& p, const DualSearchOptions& opts = {}) {
  if (!(opts.small_delta >= 0.0)) throw std::invalid_argument("small_delta must be >= 0");
  if (opts.screening && !(opts.small_delta > 0.0))
    throw std::invalid_argument("screening requires small_delta > 0");
  if (opts.big_delta && !(*opts.big_delta > opts.small_delta))
    throw std::invalid_argument("big_delta must exceed small_delta");
  if (!(opts.initial_lambda > 0.0)) throw std::invalid_argument("initial_lambda must be > 0");

  DualSearchResult r;
  auto& st = r.state;
  st.active = ActiveSet::all(p.m());
  st.small_delta = opts.small_delta;
  st.lambda = opts.initial_lambda;
  if (opts.big_delta) st.big_delta = *opts.big_delta;

  auto finish = [&](DualOutcome outcome, double lambda, DualEvaluation ev) {
    r.outcome = outcome;
    r.lambda_star = lambda;
    r.final_eval = std::move(ev);
    return std::move(r);
  };
  auto optimal_at = [](const DualEvaluation& ev) {
    // The dual domain is lambda >= 0, so at zero only the right slope counts.
    if (ev.lambda == 0.0) return ev.g_plus >= 0.0;
    return ev.g_minus <= 0.0 && 0.0 <= ev.g_plus;
  };

  {
    auto ev0 = eval_dual(p, 0.0, st.active);
    if (ev0.g_plus >= 0.0) {
      st.lambda_max = 0.0;
      return finish(DualOutcome::Exact, 0.0, std::move(ev0));
    }
    r.lo_eval = std::move(ev0);
  }

  const double amax = p.max_abs_a();
  const double lambda_cap = 1e12 * (1.0 + (amax > 0.0 ? p.max_abs_c() / amax : p.max_abs_c()));
  const std::size_t n = p.n();

  while (st.lambda_max - st.lambda_min > st.small_delta) {
    if (st.iterations >= opts.iteration_cap) {
      r.outcome = DualOutcome::IterationCap;
      return r;
    }
    ++st.iterations;
    const double lambda = st.lambda;
    auto ev = eval_dual(p, lambda, st.active);

    IterationRecord rec;
    if (opts.screening && std::isfinite(st.lambda_max)) {
      std::span<const std::size_t> top(ev.sorted.order.data(), n);
      rec.dropped = screen_candidates(st, p, top);
      r.dropped.insert(r.dropped.end(), rec.dropped.begin(), rec.dropped.end());
    }

    const bool tracing = std::isfinite(st.lambda_max) && st.lambda_max - st.lambda_min < st.big_delta;

    if (ev.g_plus < 0.0) {
      // Optimum lies to the right of lambda.
      if (tracing) {
        const double k = kink_right(p, ev, st.active);
        if (std::isfinite(k)) {
          auto ek = eval_dual_at_kink(p, k, st.active);
          if (optimal_at(ek)) return finish(DualOutcome::Exact, k, std::move(ek));
          if (ek.g_plus < 0.0 && k < st.lambda_max && k > st.lambda_min) {
            st.lambda_min = k;
            r.lo_eval = std::move(ek);
          }
        }
      }
      if (lambda > st.lambda_min) {
        st.lambda_min = lambda;
        r.lo_eval = std::move(ev);
      }
      if (std::isfinite(st.lambda_max)) {
        st.lambda = 0.5 * (st.lambda_min + st.lambda_max);
      } else {
        st.lambda = 2.0 * st.lambda_min;
        if (st.lambda > lambda_cap) {
          r.outcome = DualOutcome::Unbounded;
          return r;
        }
      }
    } else if (ev.g_minus > 0.0) {
      // Optimum lies to the left of lambda.
      if (tracing) {
        auto kl = kink_left(p, ev, st.active);
        const double k = kl.value_or(0.0);
        auto ek = kl ? eval_dual_at_kink(p, k, st.active) : eval_dual(p, 0.0, st.active);
        if (optimal_at(ek)) return finish(DualOutcome::Exact, k, std::move(ek));
        if (ek.g_minus > 0.0 && k > st.lambda_min && k < st.lambda_max) {
          st.lambda_max = k;
          r.hi_eval = std::move(ek);
        }
      }
      if (lambda < st.lambda_max) {
        st.lambda_max = lambda;
        r.hi_eval = std::move(ev);
      }
      if (std::isnan(st.big_delta)) st.big_delta = 1e-2 * (1.0 + st.lambda_max);
      st.lambda = 0.5 * (st.lambda_min + st.lambda_max);
    } else {
      return finish(DualOutcome::Exact, lambda, std::move(ev));
    }

    if (opts.record_trace || opts.on_iteration) {
      rec.iteration = st.iterations;
      rec.lambda = lambda;
      rec.lambda_min = st.lambda_min;
      rec.lambda_max = st.lambda_max;
      rec.active_size = st.active.size();
      if (opts.on_iteration) opts.on_iteration(rec);
      if (opts.record_trace) r.trace.push_back(std::move(rec));
    }
  }
  r.outcome = DualOutcome::Bracket;
  return r;
}

// ---------------------------------------------------------------------------
// Primal recovery
// ---------------------------------------------------------------------------

class RecoveryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Optimal primal solution from an exact dual optimum: X1 (diversity <= b2)
/// and X2 (diversity >= b2) are extreme optimal vertices at lambda*, mixed so
/// the diversity equals b2. Objective and diversity are reported in terms of
/// the problem passed in.
inline PrimalMixture recover_primal(double lambda_star, const DualEvaluation& ev, const OneSidedProblem& p) {
  const double d1 = ev.div_min;
  const double d2 = ev.div_max;
  const double tol = 1e-9 * (1.0 + std::abs(p.b2));
  if (d1 > p.b2 + tol || (lambda_star > 0.0 && d2 < p.b2 - tol))
    throw RecoveryError("BracketOnly: evaluation point is not a dual optimum");
  if (lambda_star == 0.0 && d2 <= p.b2) {
    // Unconstrained optimum already feasible.
    return make_mixture(ev.x_max_div, ev.x_max_div, 1.0, p.c, p.a, p.w);
  }
  double rho = 1.0;
  if (d1 != d2) rho = std::clamp((p.b2 - d2) / (d1 - d2), 0.0, 1.0);
  return make_mixture(ev.x_min_div, ev.x_max_div, rho, p.c, p.a, p.w);
}

/// Feasible mixture from a bracket [lo, hi] around the dual optimum: the
/// vertex at hi is feasible (diversity < b2), the one at lo is not, and the
/// mix lands on b2. `gap` receives min(g(lo), g(hi)) - objective.
inline PrimalMixture recover_from_bracket(const DualEvaluation& lo, const DualEvaluation& hi, const OneSidedProblem& p,
                                          double* gap = nullptr) {
  const double d1 = hi.div_max;
  const double d2 = lo.div_min;
  double rho = 1.0;
  if (d2 > p.b2 && d1 != d2) rho = std::clamp((p.b2 - d2) / (d1 - d2), 0.0, 1.0);
  auto mix = make_mixture(hi.x_max_div, lo.x_min_div, rho, p.c, p.a, p.w);
  if (gap) *gap = std::max(0.0, std::min(lo.g, hi.g) - mix.objective);
  return mix;
}

// ---------------------------------------------------------------------------
// Full pipeline
// ---------------------------------------------------------------------------

struct SolveOptions {
  DualSearchOptions dual;
};

inline Solution solve(const Instance& inst, const SolveOptions& opts = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  Solution sol;
  auto stamp = [&] {
    sol.stats.wall_time_us =
        std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - t0).count();
  };

  if (!precheck_feasibility(inst).feasible) {
    sol.status = Status::Infeasible;
    sol.stats.exact = false;
    stamp();
    return sol;
  }

  auto red = reduce_two_sided(inst);
  if (red.kind == ReductionKind::AlreadyOptimal) {
    sol.status = Status::UnconstrainedOptimal;
    sol.mixture = std::move(red.already);
    sol.lambda_star = 0.0;
    stamp();
    return sol;
  }

  const OneSidedProblem& p = *red.problem;
  auto dual = solve_dual_bisection(p, opts.dual);
  sol.status = red.kind == ReductionKind::Upper ? Status::UpperActive : Status::LowerActive;
  sol.stats.iterations = dual.state.iterations;
  sol.stats.screens = dual.state.screen_events;
  sol.stats.dropped = dual.dropped.size();
  sol.stats.lambda_lo = dual.state.lambda_min;
  sol.stats.lambda_hi = dual.state.lambda_max;

  PrimalMixture reduced;
  if (dual.outcome == DualOutcome::Exact) {
    reduced = recover_primal(dual.lambda_star, dual.final_eval, p);
    sol.lambda_star = dual.lambda_star;
    sol.stats.lambda_lo = sol.stats.lambda_hi = dual.lambda_star;
  } else if (dual.outcome == DualOutcome::Unbounded || !dual.hi_eval || !dual.lo_eval) {
    sol.status = Status::Infeasible;
    sol.stats.exact = false;
    stamp();
    return sol;
  } else {
    sol.stats.exact = false;
    reduced = recover_from_bracket(*dual.lo_eval, *dual.hi_eval, p, &sol.stats.gap);
    sol.lambda_star = 0.5 * (dual.state.lambda_min + dual.state.lambda_max);
  }
  // Report objective and diversity with the original a.
  sol.mixture = make_mixture(std::move(reduced.x1), std::move(reduced.x2), reduced.rho, inst.c, inst.a, inst.w);
  stamp();
  return sol;
}

}  // namespace divrank
