#pragma once

// Seeded synthetic instances: (a_i, c_i) i.i.d. bivariate normal with unit
// variances and covariance alpha, DCG weights, and symmetric bounds set to a
// fraction of the unconstrained optimum's diversity so the constraint binds.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "divrank/model.hpp"
#include "divrank/rank.hpp"
#include "divrank/solver.hpp"

namespace divrank {

struct GenConfig {
  std::size_t m = 100;
  std::size_t n = 10;
  double alpha = 0.5;
  std::uint64_t seed = 0;
  double b_scale = 0.8;
  std::size_t max_regen = 1000;
};

class GenerationError : public std::runtime_error {
 public:
  enum class Kind { InvalidConfig, RegenExhausted, ZeroScores, InvalidLevel };

  GenerationError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// splitmix64 finalizer over (seed, stream). Used to derive independent
/// substreams: regeneration attempt r of a config uses derive_seed(seed, r),
/// ensemble member k uses derive_seed(base, k).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Second row of the lower-triangular factor of [[1, alpha], [alpha, 1]].
inline std::array<double, 2> correlation_factor_row(double alpha) {
  return {alpha, std::sqrt(1.0 - alpha * alpha)};
}

struct GeneratedInstance {
  Instance instance;
  std::size_t attempts = 0;
};

inline GeneratedInstance generate(const GenConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw GenerationError(GenerationError::Kind::InvalidConfig, "alpha must lie in (0, 1)");
  if (!(cfg.b_scale > 0.0 && cfg.b_scale <= 1.0))
    throw GenerationError(GenerationError::Kind::InvalidConfig, "b_scale must lie in (0, 1]");
  if (cfg.n == 0 || cfg.n > cfg.m)
    throw GenerationError(GenerationError::Kind::InvalidConfig, "need 1 <= n <= m");

  const auto row = correlation_factor_row(cfg.alpha);
  GeneratedInstance out;
  Instance& inst = out.instance;
  inst.m = cfg.m;
  inst.n = cfg.n;
  inst.w = default_weights(cfg.n);
  inst.a.resize(cfg.m);
  inst.c.resize(cfg.m);

  for (std::size_t attempt = 0; attempt <= cfg.max_regen; ++attempt) {
    out.attempts = attempt + 1;
    std::mt19937_64 rng(derive_seed(cfg.seed, attempt));
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t i = 0; i < cfg.m; ++i) {
      const double u1 = normal(rng);
      const double u2 = normal(rng);
      inst.a[i] = u1;
      inst.c[i] = row[0] * u1 + row[1] * u2;
    }
    // Smallest diversity over the unconstrained optima; positive means every
    // unconstrained optimum violates b2 = b_scale * div.
    const double div = solve_unconstrained(inst).min_div;
    if (!(div > 0.0)) continue;
    inst.b2 = cfg.b_scale * div;
    inst.b1 = -inst.b2;
    if (!precheck_feasibility(inst).feasible) continue;
    return out;
  }
  throw GenerationError(GenerationError::Kind::RegenExhausted, "no acceptable draw within max_regen attempts");
}

inline Instance gen_synthetic(const GenConfig& cfg) { return generate(cfg).instance; }

/// c = c0 + level * (||c0|| / ||eps||) * eps with eps ~ N(0, I). Everything
/// else is copied.
inline Instance noise_replicate(const Instance& base, double level = 0.2, std::uint64_t seed = 0) {
  if (!(level > 0.0)) throw GenerationError(GenerationError::Kind::InvalidLevel, "noise level must be > 0");
  double c_norm = 0.0;
  for (double x : base.c) c_norm += x * x;
  c_norm = std::sqrt(c_norm);
  if (c_norm == 0.0) throw GenerationError(GenerationError::Kind::ZeroScores, "scores have zero norm");

  std::mt19937_64 rng(derive_seed(seed, 0));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> eps(base.c.size());
  double e_norm = 0.0;
  do {
    e_norm = 0.0;
    for (double& e : eps) {
      e = normal(rng);
      e_norm += e * e;
    }
  } while (e_norm == 0.0);
  e_norm = std::sqrt(e_norm);

  Instance out = base;
  const double scale = level * c_norm / e_norm;
  for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] = base.c[i] + scale * eps[i];
  return out;
}

}  // namespace divrank
