#pragma once

// Scaling benchmark over seeded synthetic nets.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bufins/dp.hpp"
#include "bufins/error.hpp"

namespace bufins {

enum class SweepAxis : std::uint8_t { kAuto, kBuffers, kPositions };

struct BenchConfig {
  std::vector<std::uint32_t> sinks{100};
  std::vector<std::uint32_t> positions{1000};
  std::vector<std::uint32_t> buffers{8, 16, 32, 64};
  std::uint32_t repetitions = 5;
  std::uint64_t seed = 1;
  std::vector<Kernel> kernels{Kernel::kFast, Kernel::kBaseline};
  PruneMode mode = PruneMode::kCopy;
  SweepAxis sweep = SweepAxis::kAuto;
  std::uint32_t jobs = 1;
  std::string output;  // CSV path; empty means stdout

  /// Throws ValidationError if a list is empty or a count is zero.
  void validate() const;
  /// kAuto resolved: buffers when several library sizes are given, else
  /// positions when several position counts are given, else buffers.
  SweepAxis resolved_sweep() const;
};

struct BenchRow {
  std::uint32_t m = 0;
  std::uint32_t n = 0;
  std::uint32_t b = 0;
  Kernel kernel = Kernel::kFast;
  double median_seconds = 0.0;
  // median_seconds over the same kernel's row with the smallest b (b-sweep)
  // or smallest n (n-sweep), all other axes equal.
  double normalized = 1.0;
  std::uint64_t candidates_peak = 0;
  double slack = 0.0;
};

/// Two kernels disagreed on an instance. reproducer() is a JSON document
/// with the seed and the single-instance config that triggers it.
class BenchMismatch : public Error {
 public:
  BenchMismatch(const std::string& what, std::string reproducer)
      : Error(what), reproducer_(std::move(reproducer)) {}
  const std::string& reproducer() const { return reproducer_; }

 private:
  std::string reproducer_;
};

/// Runs every (m, n, b) instance of the config with every kernel, timing
/// `repetitions` solves each (monotonic clock, solve only) and keeping the
/// median. Rows come back in configuration order: m, then n, then b, then
/// kernel. Instances may run on `jobs` worker threads. Throws BenchMismatch
/// if kernels report different slacks for one instance.
std::vector<BenchRow> run_bench(const BenchConfig& config, std::ostream* progress = nullptr);

inline constexpr std::string_view kBenchCsvHeader =
    "m,n,b,kernel,median_seconds,normalized,candidates_peak";

std::string bench_csv(std::span<const BenchRow> rows);

/// JSON mirror of BenchConfig: {"sinks": [..], "positions": [..],
/// "buffers": [..], "repetitions", "seed", "kernels": ["fast", "baseline"],
/// "mode": "copy"|"destructive", "sweep": "auto"|"b"|"n", "jobs", "output"}.
/// Every key is optional.
BenchConfig parse_bench_config(std::string_view text);
std::string dump_bench_config(const BenchConfig& config);

std::string_view kernel_name(Kernel k);
Kernel parse_kernel(std::string_view name);
std::string_view mode_name(PruneMode m);
PruneMode parse_mode(std::string_view name);

}  // namespace bufins
