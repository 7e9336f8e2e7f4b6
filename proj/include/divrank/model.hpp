#pragma once

// Problem data for ranking with a diversity constraint:
//
//   max  c^T X w   s.t.  X in S_{m,n},  b1 <= a^T X w <= b2
//
// where S_{m,n} is the set of m x n matrices with X >= 0, row sums <= 1 and
// column sums = 1. Vertices of S_{m,n} are injective slot -> candidate maps.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace divrank {

struct Instance {
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<double> c;  // utility scores, length m
  std::vector<double> a;  // diversity features, length m
  std::vector<double> w;  // slot weights, length n, strictly decreasing
  double b1 = 0.0;
  double b2 = 0.0;

  friend bool operator==(const Instance&, const Instance&) = default;
};

enum class ValidationError {
  NonDecreasingWeights,
  NonPositiveWeight,
  BoundsReversed,
  DimensionMismatch,
  NonFinite,
  NTooLarge,
};

constexpr std::string_view to_string(ValidationError e) {
  switch (e) {
    case ValidationError::NonDecreasingWeights: return "NonDecreasingWeights";
    case ValidationError::NonPositiveWeight: return "NonPositiveWeight";
    case ValidationError::BoundsReversed: return "BoundsReversed";
    case ValidationError::DimensionMismatch: return "DimensionMismatch";
    case ValidationError::NonFinite: return "NonFinite";
    case ValidationError::NTooLarge: return "NTooLarge";
  }
  return "Unknown";
}

/// Every violated invariant of `inst`, each reported once, in enum order.
inline std::vector<ValidationError> check_instance(const Instance& inst) {
  std::vector<ValidationError> errors;
  auto add = [&](ValidationError e) {
    for (auto seen : errors)
      if (seen == e) return;
    errors.push_back(e);
  };

  bool weights_ok = inst.w.size() == inst.n;
  for (std::size_t j = 0; j < inst.w.size(); ++j) {
    if (!std::isfinite(inst.w[j])) continue;
    if (j + 1 < inst.w.size() && std::isfinite(inst.w[j + 1]) && !(inst.w[j] > inst.w[j + 1]))
      add(ValidationError::NonDecreasingWeights);
  }
  for (double wj : inst.w)
    if (std::isfinite(wj) && !(wj > 0.0)) add(ValidationError::NonPositiveWeight);

  if (std::isfinite(inst.b1) && std::isfinite(inst.b2) && inst.b1 > inst.b2)
    add(ValidationError::BoundsReversed);

  if (inst.m == 0 || inst.n == 0 || inst.c.size() != inst.m || inst.a.size() != inst.m || !weights_ok)
    add(ValidationError::DimensionMismatch);

  auto all_finite = [](std::span<const double> v) {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  };
  if (!all_finite(inst.c) || !all_finite(inst.a) || !all_finite(inst.w) || !std::isfinite(inst.b1) ||
      !std::isfinite(inst.b2))
    add(ValidationError::NonFinite);

  if (inst.n > inst.m) add(ValidationError::NTooLarge);

  std::sort(errors.begin(), errors.end());
  return errors;
}

using Validated = std::variant<Instance, std::vector<ValidationError>>;

/// Returns the instance unchanged if valid, otherwise the full error list.
/// Invalid data is never repaired.
inline Validated validate_instance(Instance raw) {
  auto errors = check_instance(raw);
  if (errors.empty()) return raw;
  return errors;
}

/// DCG position discount w_j = 1 / log2(1 + j), j = 1..n.
inline std::vector<double> default_weights(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t j = 1; j <= n; ++j) w[j - 1] = 1.0 / std::log2(1.0 + static_cast<double>(j));
  return w;
}

/// A vertex of S_{m,n}: slot j holds candidate slots[j].
struct ExtremeAssignment {
  std::vector<std::size_t> slots;

  friend bool operator==(const ExtremeAssignment&, const ExtremeAssignment&) = default;
};

/// sum_j w_j * values[slots[j]], i.e. values^T X w for the vertex X.
inline double weighted_value(const ExtremeAssignment& x, std::span<const double> values,
                             std::span<const double> w) {
  double s = 0.0;
  for (std::size_t j = 0; j < x.slots.size(); ++j) s += w[j] * values[x.slots[j]];
  return s;
}

/// True when the assignment is injective into [0, m) and fills exactly n slots.
inline bool is_vertex(const ExtremeAssignment& x, std::size_t m, std::size_t n) {
  if (x.slots.size() != n) return false;
  std::vector<bool> used(m, false);
  for (auto i : x.slots) {
    if (i >= m || used[i]) return false;
    used[i] = true;
  }
  return true;
}

/// rho * X1 + (1 - rho) * X2.
struct PrimalMixture {
  ExtremeAssignment x1;
  ExtremeAssignment x2;
  double rho = 1.0;
  double objective = 0.0;
  double diversity = 0.0;
};

inline PrimalMixture make_mixture(ExtremeAssignment x1, ExtremeAssignment x2, double rho,
                                  std::span<const double> c, std::span<const double> a,
                                  std::span<const double> w) {
  PrimalMixture mix;
  mix.objective = rho * weighted_value(x1, c, w) + (1.0 - rho) * weighted_value(x2, c, w);
  mix.diversity = rho * weighted_value(x1, a, w) + (1.0 - rho) * weighted_value(x2, a, w);
  mix.x1 = std::move(x1);
  mix.x2 = std::move(x2);
  mix.rho = rho;
  return mix;
}

/// Dense m x n form of a mixture. Used by tests and debugging output only.
inline std::vector<std::vector<double>> dense_matrix(const PrimalMixture& mix, std::size_t m) {
  const std::size_t n = mix.x1.slots.size();
  std::vector<std::vector<double>> x(m, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    x[mix.x1.slots[j]][j] += mix.rho;
    x[mix.x2.slots[j]][j] += 1.0 - mix.rho;
  }
  return x;
}

/// The upper-bound-only problem  max c^T X w  s.t.  X in S_{m,n}, a^T X w <= b2.
/// A lower bound b1 is expressed in this form with a -> -a, b2 -> -b1.
struct OneSidedProblem {
  std::vector<double> c;
  std::vector<double> a;
  std::vector<double> w;
  double b2 = 0.0;

  std::size_t m() const { return c.size(); }
  std::size_t n() const { return w.size(); }

  double max_abs_a() const {
    double s = 0.0;
    for (double x : a) s = std::max(s, std::abs(x));
    return s;
  }
  double max_abs_c() const {
    double s = 0.0;
    for (double x : c) s = std::max(s, std::abs(x));
    return s;
  }
  /// Slope differences at or below this are treated as parallel lines.
  double parallel_threshold() const { return 1e-15 * max_abs_a(); }
};

inline OneSidedProblem upper_form(const Instance& inst) { return {inst.c, inst.a, inst.w, inst.b2}; }

inline OneSidedProblem lower_as_upper_form(const Instance& inst) {
  OneSidedProblem p{inst.c, inst.a, inst.w, -inst.b1};
  for (double& x : p.a) x = -x;
  return p;
}

enum class Status { UnconstrainedOptimal, UpperActive, LowerActive, Infeasible };

constexpr std::string_view to_string(Status s) {
  switch (s) {
    case Status::UnconstrainedOptimal: return "UnconstrainedOptimal";
    case Status::UpperActive: return "UpperActive";
    case Status::LowerActive: return "LowerActive";
    case Status::Infeasible: return "Infeasible";
  }
  return "Unknown";
}

inline std::optional<Status> status_from_string(std::string_view s) {
  for (auto st : {Status::UnconstrainedOptimal, Status::UpperActive, Status::LowerActive, Status::Infeasible})
    if (to_string(st) == s) return st;
  return std::nullopt;
}

struct SolveStats {
  std::size_t iterations = 0;
  std::size_t screens = 0;
  std::size_t dropped = 0;
  std::int64_t wall_time_us = 0;
  // False when the dual search ended on a bracket instead of an exact kink.
  bool exact = true;
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  // Upper bound on the primal suboptimality, zero for exact solves.
  double gap = 0.0;
};

struct Solution {
  PrimalMixture mixture;
  // Dual value of the reduced one-sided problem (after a -> -a for LowerActive).
  double lambda_star = 0.0;
  Status status = Status::Infeasible;
  SolveStats stats;
};

}  // namespace divrank
