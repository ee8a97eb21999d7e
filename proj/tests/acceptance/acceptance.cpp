// Acceptance gate: one PASS/FAIL line per criterion on stdout.
//
//   bufins_acceptance [--known-failure N]...
//
// Exits 0 when the failed criteria are exactly the listed known failures,
// 1 otherwise (including a known failure that now passes).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "bufins/bench.hpp"
#include "bufins/candidate.hpp"
#include "bufins/error.hpp"
#include "bufins/oracle.hpp"
#include "bufins/solver.hpp"
#include "random_instance.hpp"

namespace {

using namespace bufins;
using Clock = std::chrono::steady_clock;

constexpr double kRelTol = 1e-9;  // oracle comparisons
constexpr std::uint64_t kSeed = 20040607;

constexpr int kOptimalityInstances = 1000;
constexpr double kOptimalitySeconds = 60.0;
constexpr std::uint32_t kOptimalityMaxSinks = 6;
constexpr std::uint32_t kOptimalityMaxPositions = 10;
constexpr std::uint32_t kOptimalityMaxBuffers = 3;

constexpr int kEquivalenceInstances = 10000;
constexpr std::uint32_t kEquivalenceMaxSinks = 100;
constexpr std::uint32_t kEquivalenceMaxPositions = 500;
constexpr std::uint32_t kEquivalenceMaxBuffers = 64;
constexpr int kEquivalenceCornerEvery = 100;  // every 100th instance at n = 500, b = 64

constexpr int kHullLists = 100000;
constexpr std::uint32_t kHullMaxList = 200;
constexpr double kRMin = 180.0;
constexpr double kRMax = 7000.0;

constexpr std::uint32_t kTrendSinks = 500;
constexpr std::uint32_t kTrendPositions = 8000;
constexpr std::uint32_t kTrendReps = 11;
constexpr std::uint64_t kTrendSeed = 1;
constexpr double kTrendFactor = 2.0;

bool close(double a, double b) {
  return a == b || std::abs(a - b) <= kRelTol * std::max(std::abs(a), std::abs(b));
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::uint32_t log_uniform(std::mt19937_64& rng, std::uint32_t lo, std::uint32_t hi) {
  const double x = testing::uniform_real(rng, std::log(lo), std::log(hi + 1.0));
  return std::clamp(static_cast<std::uint32_t>(std::exp(x)), lo, hi);
}

std::set<int> failed;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("%s %d %-26s %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!pass) failed.insert(id);
}

// Fast-kernel runs of criteria 1-2, all with invariant checks on.
struct Audit {
  KernelStats stats;
  std::uint64_t solves = 0;
  std::uint64_t invariant_errors = 0;
  std::string first_error;
};

std::optional<SolveResult> checked_solve(const Problem& p, Audit& audit) {
  ++audit.solves;
  try {
    auto r = solve(p, {.kernel = Kernel::kFast, .check_invariants = true});
    audit.stats += r.stats;
    return r;
  } catch (const InvariantError& e) {
    if (audit.invariant_errors++ == 0) audit.first_error = e.what();
    return std::nullopt;
  }
}

void optimality(Audit& audit) {
  const auto t0 = Clock::now();
  int mismatches = 0;
  int exact = 0;
  std::uint64_t enumerated = 0;
  std::string first;
  for (int i = 0; i < kOptimalityInstances; ++i) {
    std::mt19937_64 rng(kSeed + i);
    const testing::InstanceShape shape{testing::uniform_int(rng, 1, kOptimalityMaxSinks),
                                       testing::uniform_int(rng, 0, kOptimalityMaxPositions),
                                       testing::uniform_int(rng, 1, kOptimalityMaxBuffers)};
    const auto inst = testing::random_instance(rng, shape);
    const auto fast = checked_solve(Problem(inst.tree, inst.lib), audit);
    const auto brute = brute_force(inst.tree, inst.lib);
    enumerated += brute.evaluated;
    if (!fast || !close(fast->slack, brute.slack)) {
      if (mismatches++ == 0) {
        first = fmt::format(" first=instance {}: fast {:.17g} brute {:.17g}", i,
                            fast ? fast->slack : std::nan(""), brute.slack);
      }
    } else if (fast->slack == brute.slack) {
      ++exact;
    }
  }
  const double t = seconds_since(t0);
  report(1, "optimality-vs-brute-force", mismatches == 0 && t < kOptimalitySeconds,
         fmt::format("instances={} mismatches={} bit_exact={} assignments={} seconds={:.1f} "
                     "limit={:.0f} rel_tol={:g}{}",
                     kOptimalityInstances, mismatches, exact, enumerated, t, kOptimalitySeconds,
                     kRelTol, first));
}

struct ModeResult {
  int mismatches = 0;
  double worst_gap = 0.0;
  std::string first;
};

ModeResult equivalence(Audit& audit) {
  const auto t0 = Clock::now();
  int kernel_mismatch = 0;
  int reeval_mismatch = 0;
  std::string first;
  ModeResult mode;
  for (int i = 0; i < kEquivalenceInstances; ++i) {
    std::mt19937_64 rng(kSeed * 31 + i);
    testing::InstanceShape shape;
    if (i % kEquivalenceCornerEvery == 0) {
      shape = {testing::uniform_int(rng, 1, kEquivalenceMaxSinks), kEquivalenceMaxPositions,
               kEquivalenceMaxBuffers};
    } else {
      shape = {log_uniform(rng, 1, kEquivalenceMaxSinks),
               log_uniform(rng, 1, kEquivalenceMaxPositions),
               log_uniform(rng, 1, kEquivalenceMaxBuffers)};
    }
    const auto inst = testing::random_instance(rng, shape);
    const Problem problem(inst.tree, inst.lib);
    const auto fast = checked_solve(problem, audit);
    const auto base = solve(problem, {.kernel = Kernel::kBaseline});
    const auto destructive = solve(problem, {.mode = PruneMode::kDestructive});
    audit.stats.size_bound_violations +=
        base.stats.size_bound_violations + destructive.stats.size_bound_violations;
    audit.stats.hull_calls += destructive.stats.hull_calls;
    audit.stats.scan_bound_violations += destructive.stats.scan_bound_violations;
    if (!fast || fast->slack != base.slack) {
      if (kernel_mismatch++ == 0) {
        first = fmt::format(" first=instance {}: fast {:.17g} baseline {:.17g}", i,
                            fast ? fast->slack : std::nan(""), base.slack);
      }
      continue;
    }
    const double ef = evaluate(inst.tree, inst.lib, fast->assignment).slack;
    const double eb = evaluate(inst.tree, inst.lib, base.assignment).slack;
    if (!close(ef, fast->slack) || !close(eb, base.slack)) ++reeval_mismatch;
    if (destructive.slack != fast->slack) {
      mode.worst_gap = std::max(mode.worst_gap, std::abs(fast->slack - destructive.slack));
      if (mode.mismatches++ == 0) {
        mode.first = fmt::format(" first=instance {} (m={} n={} b={}): copy {:.17g} "
                                 "destructive {:.17g}",
                                 i, shape.sinks, shape.positions, shape.buffers, fast->slack,
                                 destructive.slack);
      }
    }
  }
  report(2, "kernel-equivalence", kernel_mismatch == 0 && reeval_mismatch == 0,
         fmt::format("instances={} slack_mismatches={} reevaluation_mismatches={} "
                     "seconds={:.1f}{}",
                     kEquivalenceInstances, kernel_mismatch, reeval_mismatch,
                     seconds_since(t0), first));
  return mode;
}

void hull_safety(Audit& audit) {
  std::mt19937_64 rng(kSeed * 97);
  int failures_seen = 0;
  std::uint64_t removed = 0;
  for (int i = 0; i < kHullLists; ++i) {
    const auto list = testing::random_si_list(rng, testing::uniform_int(rng, 1, kHullMaxList));
    const double r = testing::uniform_real(rng, kRMin, kRMax);
    CandidateList pruned = list;
    const auto stats = convex_prune(pruned);
    ++audit.stats.hull_calls;
    if (!stats.within_bound()) ++audit.stats.scan_bound_violations;
    removed += list.size() - pruned.size();
    const auto best = [r](const CandidateList& l) {
      double m = -std::numeric_limits<double>::infinity();
      for (const auto& a : l) m = std::max(m, a.q - r * a.c);
      return m;
    };
    if (best(pruned) != best(list)) ++failures_seen;
  }
  report(3, "convex-pruning-safety", failures_seen == 0,
         fmt::format("lists={} failures={} candidates_removed={} r=[{:g},{:g}] ohm tol=0",
                     kHullLists, failures_seen, removed, kRMin, kRMax));
}

void trend(double& ratio8, double& ratio64, std::string& csv) {
  BenchConfig config;
  config.sinks = {kTrendSinks};
  config.positions = {kTrendPositions};
  config.buffers = {8, 16, 32, 64};
  config.repetitions = kTrendReps;
  config.seed = kTrendSeed;
  const auto rows = run_bench(config);
  csv = bench_csv(rows);
  const auto ratio = [&rows](std::uint32_t b) {
    double fast = 0;
    double base = 0;
    for (const auto& r : rows) {
      if (r.b != b) continue;
      (r.kernel == Kernel::kFast ? fast : base) = r.median_seconds;
    }
    return base / fast;
  };
  ratio8 = ratio(8);
  ratio64 = ratio(64);
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--known-failure" && i + 1 < argc) {
      known.insert(std::stoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--known-failure N]...\n", argv[0]);
      return 64;
    }
  }
  const auto t0 = Clock::now();
  Audit audit;
  optimality(audit);
  const ModeResult mode = equivalence(audit);
  hull_safety(audit);

  report(4, "graham-scan-bound", audit.stats.scan_bound_violations == 0,
         fmt::format("scans={} violations={} (moves <= 2k)", audit.stats.hull_calls,
                     audit.stats.scan_bound_violations));
  report(5, "candidate-bound", audit.stats.size_bound_violations == 0,
         fmt::format("peak_list={} violations={} (length <= b*n + m)", audit.stats.peak_list,
                     audit.stats.size_bound_violations));
  report(6, "monotone-pointer",
         audit.invariant_errors == 0 && audit.stats.pointer_checks == audit.stats.buffer_steps,
         fmt::format("checked_solves={} audited_buffer_steps={} of {} invariant_errors={}{}",
                     audit.solves, audit.stats.pointer_checks, audit.stats.buffer_steps,
                     audit.invariant_errors,
                     audit.first_error.empty() ? "" : " first=" + audit.first_error));

  double ratio8 = 0;
  double ratio64 = 0;
  std::string csv;
  const auto tb = Clock::now();
  trend(ratio8, ratio64, csv);
  std::fputs(csv.c_str(), stderr);
  report(7, "scaling-trend", ratio64 >= kTrendFactor * ratio8,
         fmt::format("m={} n={} baseline/fast ratio b=8 {:.2f} b=64 {:.2f} gain={:.2f} "
                     "required={:.1f} seconds={:.0f}",
                     kTrendSinks, kTrendPositions, ratio8, ratio64, ratio64 / ratio8,
                     kTrendFactor, seconds_since(tb)));

  report(8, "destructive-equals-copy", mode.mismatches == 0,
         fmt::format("instances={} slack_mismatches={} worst_gap={:.3e}{}",
                     kEquivalenceInstances, mode.mismatches, mode.worst_gap, mode.first));

  std::string known_list;
  for (const int id : known) known_list += (known_list.empty() ? "" : ",") + std::to_string(id);
  std::printf("%zu of 8 criteria failed, known failures [%s], %.0f s total\n", failed.size(),
              known_list.c_str(), seconds_since(t0));
  return failed == known ? 0 : 1;
}
