// divrank: solve, generate, verify and benchmark diversity-constrained
// ranking LPs.
//
//   divrank solve  --input F [--output F] [--no-screening] [--delta X] [--big-delta X]
//   divrank gen    --m M --n N --alpha A --seed S --output F
//   divrank noise  --input F --level L --seed S --output F
//   divrank verify --count K --m M --n N --seed S
//   divrank bench  --m-list .. --n-list .. --reps R --seed S --csv F
//
// DIVRANK_LOG=1 prints a summary per solve to stderr, DIVRANK_LOG=2 also
// prints every bisection iteration.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "divrank/bench.hpp"
#include "divrank/datagen.hpp"
#include "divrank/io.hpp"
#include "divrank/oracle.hpp"
#include "divrank/solver.hpp"

namespace {

using namespace divrank;

constexpr int kExitMismatch = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitInfeasible = 3;

int log_level() {
  const char* env = std::getenv("DIVRANK_LOG");
  if (!env) return 0;
  std::string v(env);
  if (v == "trace" || v == "debug" || v == "2") return 2;
  if (v == "info" || v == "1") return 1;
  return 0;
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

bool write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return true;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << text;
  return static_cast<bool>(out);
}

void print_errors(const std::vector<std::string>& errors) {
  io::json j = {{"errors", errors}};
  std::cerr << j.dump() << '\n';
}

struct SolveArgs {
  std::string input;
  std::string output;
  bool no_screening = false;
  double delta = 1e-10;
  double big_delta = 0.0;  // <= 0: default rule
};

int cmd_solve(const SolveArgs& args) {
  std::string text;
  if (!read_file(args.input, text)) {
    print_errors({"cannot read input file '" + args.input + "'"});
    return kExitInvalid;
  }
  auto parsed = io::parse_instance(text);
  if (auto* errors = std::get_if<std::vector<std::string>>(&parsed)) {
    print_errors(*errors);
    return kExitInvalid;
  }
  const Instance& inst = std::get<Instance>(parsed);

  SolveOptions opts;
  opts.dual.screening = !args.no_screening;
  opts.dual.small_delta = args.delta;
  if (args.big_delta > 0.0) opts.dual.big_delta = args.big_delta;
  const int level = log_level();
  if (level >= 2) {
    opts.dual.on_iteration = [](const IterationRecord& r) {
      std::fprintf(stderr, "iter %zu lambda=%.17g bracket=[%.17g, %.17g] active=%zu dropped=%zu\n", r.iteration,
                   r.lambda, r.lambda_min, r.lambda_max, r.active_size, r.dropped.size());
    };
  }

  Solution sol;
  try {
    sol = solve(inst, opts);
  } catch (const std::exception& e) {
    print_errors({e.what()});
    return kExitInvalid;
  }
  if (level >= 1) {
    std::fprintf(stderr, "status=%s lambda*=%.17g objective=%.17g iterations=%zu dropped=%zu time_us=%lld\n",
                 std::string(to_string(sol.status)).c_str(), sol.lambda_star, sol.mixture.objective,
                 sol.stats.iterations, sol.stats.dropped, static_cast<long long>(sol.stats.wall_time_us));
  }
  if (!write_text(args.output, io::to_json(sol).dump(2) + "\n")) {
    print_errors({"cannot write output file '" + args.output + "'"});
    return kExitInvalid;
  }
  return sol.status == Status::Infeasible ? kExitInfeasible : 0;
}

int cmd_gen(const GenConfig& cfg, const std::string& output) {
  try {
    auto inst = gen_synthetic(cfg);
    if (!write_text(output, io::to_json(inst).dump() + "\n")) {
      print_errors({"cannot write output file '" + output + "'"});
      return kExitInvalid;
    }
  } catch (const GenerationError& e) {
    print_errors({e.what()});
    return kExitInvalid;
  }
  return 0;
}

int cmd_noise(const std::string& input, double level, std::uint64_t seed, const std::string& output) {
  std::string text;
  if (!read_file(input, text)) {
    print_errors({"cannot read input file '" + input + "'"});
    return kExitInvalid;
  }
  auto parsed = io::parse_instance(text);
  if (auto* errors = std::get_if<std::vector<std::string>>(&parsed)) {
    print_errors(*errors);
    return kExitInvalid;
  }
  try {
    auto out = noise_replicate(std::get<Instance>(parsed), level, seed);
    if (!write_text(output, io::to_json(out).dump() + "\n")) return kExitInvalid;
  } catch (const GenerationError& e) {
    print_errors({e.what()});
    return kExitInvalid;
  }
  return 0;
}

bool close(double x, double y, double rel) { return std::abs(x - y) <= rel * std::max(1.0, std::abs(y)); }

struct VerifyArgs {
  std::size_t count = 100;
  std::size_t m = 100;
  std::size_t n = 10;
  std::uint64_t seed = 0;
  double alpha = 0.5;
};

int cmd_verify(const VerifyArgs& args) {
  constexpr double kTol = 1e-9;
  std::vector<std::uint64_t> bad;
  const bool tiny = args.m <= 7 && args.n <= 3;
  for (std::size_t k = 0; k < args.count; ++k) {
    GenConfig g;
    g.m = args.m;
    g.n = args.n;
    g.alpha = args.alpha;
    g.seed = derive_seed(args.seed, k);
    Instance inst;
    try {
      inst = gen_synthetic(g);
    } catch (const GenerationError& e) {
      std::cerr << "seed " << g.seed << ": " << e.what() << '\n';
      bad.push_back(g.seed);
      continue;
    }

    SolveOptions o1, o2;
    o1.dual.screening = false;
    const auto s1 = solve(inst, o1);
    const auto s2 = solve(inst, o2);
    const auto red = reduce_two_sided(inst);

    bool ok = s1.stats.exact && s2.stats.exact;
    if (red.problem) {
      const auto orc = oracle::oracle_dual_breakpoints(*red.problem);
      for (const auto* s : {&s1, &s2}) {
        ok = ok && close(s->mixture.objective, orc.g_star, kTol) && close(s->lambda_star, orc.lambda_star, kTol);
      }
    } else {
      ok = ok && close(s1.mixture.objective, red.already.objective, kTol) &&
           close(s2.mixture.objective, red.already.objective, kTol);
    }
    if (tiny) {
      const auto bf = oracle::brute_force_tiny(inst);
      ok = ok && bf.feasible && close(s1.mixture.objective, bf.objective, kTol) &&
           close(s2.mixture.objective, bf.objective, kTol);
    }
    if (!ok) bad.push_back(g.seed);
  }

  std::cout << "verified " << args.count << " instances (m=" << args.m << ", n=" << args.n << "): "
            << (args.count - bad.size()) << " match, " << bad.size() << " mismatch\n";
  if (!bad.empty()) {
    std::cout << "offending seeds:";
    for (auto s : bad) std::cout << ' ' << s;
    std::cout << '\n';
    return kExitMismatch;
  }
  return 0;
}

int cmd_bench(const bench::BenchConfig& cfg, const std::string& csv) {
  const auto cells = bench::run_bench(cfg);
  std::ostringstream table;
  bench::write_csv(table, cells);
  if (!write_text(csv, table.str())) {
    print_errors({"cannot write csv file '" + csv + "'"});
    return kExitInvalid;
  }
  // Human-readable comparison next to the reference alg2 timings.
  std::ostream& os = (csv.empty() || csv == "-") ? std::cerr : std::cout;
  os << "m\tn\talg1_median_ms\talg2_median_ms\tspeedup\treference_alg2_ms\n";
  for (std::size_t k = 0; k + 1 < cells.size(); k += 2) {
    const auto& c1 = cells[k];
    const auto& c2 = cells[k + 1];
    auto ref = bench::reference_ms(c2.m, c2.n);
    os << c2.m << '\t' << c2.n << '\t' << c1.median() << '\t' << c2.median() << '\t'
       << (c2.median() > 0 ? c1.median() / c2.median() : 0.0) << '\t' << (ref ? std::to_string(*ref) : "-")
       << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diversity-constrained ranking LP solver"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance JSON file");
  solve_cmd->add_option("--input", solve_args.input, "Instance JSON")->required();
  solve_cmd->add_option("--output", solve_args.output, "Solution JSON (default stdout)");
  solve_cmd->add_flag("--no-screening", solve_args.no_screening, "Disable candidate screening");
  solve_cmd->add_option("--delta", solve_args.delta, "Bracket termination width")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--big-delta", solve_args.big_delta, "Bracket width that triggers kink tracing")
      ->check(CLI::PositiveNumber);

  GenConfig gen_cfg;
  std::string gen_output;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic instance");
  gen_cmd->add_option("--m", gen_cfg.m, "Candidates")->required();
  gen_cmd->add_option("--n", gen_cfg.n, "Slots")->required();
  gen_cmd->add_option("--alpha", gen_cfg.alpha, "Score/diversity covariance")->capture_default_str();
  gen_cmd->add_option("--seed", gen_cfg.seed, "RNG seed")->capture_default_str();
  gen_cmd->add_option("--b-scale", gen_cfg.b_scale, "Bound multiplier")->capture_default_str();
  gen_cmd->add_option("--output", gen_output, "Instance JSON (default stdout)");

  std::string noise_input, noise_output;
  double noise_level = 0.2;
  std::uint64_t noise_seed = 0;
  auto* noise_cmd = app.add_subcommand("noise", "Write a noised replication of an instance");
  noise_cmd->add_option("--input", noise_input, "Instance JSON")->required();
  noise_cmd->add_option("--level", noise_level, "Relative noise level")->capture_default_str();
  noise_cmd->add_option("--seed", noise_seed, "RNG seed")->capture_default_str();
  noise_cmd->add_option("--output", noise_output, "Instance JSON (default stdout)");

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "Check both algorithms against the oracles");
  verify_cmd->add_option("--count", verify_args.count, "Instances")->capture_default_str();
  verify_cmd->add_option("--m", verify_args.m, "Candidates")->capture_default_str();
  verify_cmd->add_option("--n", verify_args.n, "Slots")->capture_default_str();
  verify_cmd->add_option("--seed", verify_args.seed, "RNG seed")->capture_default_str();
  verify_cmd->add_option("--alpha", verify_args.alpha, "Score/diversity covariance")->capture_default_str();

  bench::BenchConfig bench_cfg;
  std::string bench_csv;
  auto* bench_cmd = app.add_subcommand("bench", "Time alg1 (no screening) vs alg2 (screening)");
  bench_cmd->add_option("--m-list", bench_cfg.m_list, "Candidate counts")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--n-list", bench_cfg.n_list, "Slot counts")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--reps", bench_cfg.reps, "Repetitions per cell")->capture_default_str();
  bench_cmd->add_option("--seed", bench_cfg.seed, "RNG seed")->capture_default_str();
  bench_cmd->add_option("--alpha", bench_cfg.alpha, "Score/diversity covariance")->capture_default_str();
  bench_cmd->add_option("--csv", bench_csv, "CSV output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalid;
  }

  if (*solve_cmd) return cmd_solve(solve_args);
  if (*gen_cmd) return cmd_gen(gen_cfg, gen_output);
  if (*noise_cmd) return cmd_noise(noise_input, noise_level, noise_seed, noise_output);
  if (*verify_cmd) {
    if (verify_args.m > 2000) {
      print_errors({"verify: m exceeds the oracle size cap (2000)"});
      return kExitInvalid;
    }
    return cmd_verify(verify_args);
  }
  if (*bench_cmd) return cmd_bench(bench_cfg, bench_csv);
  return kExitInvalid;
}
