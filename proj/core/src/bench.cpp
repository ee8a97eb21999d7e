#include "bufins/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>
#include <tuple>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "bufins/generator.hpp"
#include "bufins/solver.hpp"

namespace bufins {

std::string_view kernel_name(Kernel k) { return k == Kernel::kFast ? "fast" : "baseline"; }

Kernel parse_kernel(std::string_view name) {
  if (name == "fast") return Kernel::kFast;
  if (name == "baseline") return Kernel::kBaseline;
  throw ParseError("unknown kernel '" + std::string(name) + "'");
}

std::string_view mode_name(PruneMode m) {
  return m == PruneMode::kCopy ? "copy" : "destructive";
}

PruneMode parse_mode(std::string_view name) {
  if (name == "copy") return PruneMode::kCopy;
  if (name == "destructive") return PruneMode::kDestructive;
  throw ParseError("unknown prune mode '" + std::string(name) + "'");
}

void BenchConfig::validate() const {
  if (sinks.empty() || positions.empty() || buffers.empty()) {
    throw ValidationError("bench needs at least one sink count, position count and library size");
  }
  for (const auto m : sinks) {
    if (m == 0) throw ValidationError("bench sink counts must be >= 1");
  }
  for (const auto b : buffers) {
    if (b == 0) throw ValidationError("bench library sizes must be >= 1");
  }
  if (repetitions == 0) throw ValidationError("bench repetitions must be >= 1");
  if (kernels.empty()) throw ValidationError("bench needs at least one kernel");
  if (jobs == 0) throw ValidationError("bench jobs must be >= 1");
}

SweepAxis BenchConfig::resolved_sweep() const {
  if (sweep != SweepAxis::kAuto) return sweep;
  if (buffers.size() > 1) return SweepAxis::kBuffers;
  if (positions.size() > 1) return SweepAxis::kPositions;
  return SweepAxis::kBuffers;
}

namespace {

struct Instance {
  std::uint32_t m;
  std::uint32_t n;
  std::uint32_t b;
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

std::string reproducer_json(const BenchConfig& config, const Instance& inst) {
  BenchConfig one = config;
  one.sinks = {inst.m};
  one.positions = {inst.n};
  one.buffers = {inst.b};
  one.jobs = 1;
  one.output.clear();
  return dump_bench_config(one);
}

std::vector<BenchRow> run_instance(const BenchConfig& config, const Instance& inst) {
  const GeneratedNet net = generate_net(inst.m, inst.n, inst.b, config.seed);
  const Problem problem(net.tree, net.library);
  std::vector<BenchRow> rows;
  for (const Kernel kernel : config.kernels) {
    SolveOptions options{.kernel = kernel, .mode = config.mode};
    std::vector<double> times;
    SolveResult last;
    for (std::uint32_t rep = 0; rep < config.repetitions; ++rep) {
      const auto start = std::chrono::steady_clock::now();
      last = solve(problem, options);
      const auto stop = std::chrono::steady_clock::now();
      times.push_back(std::chrono::duration<double>(stop - start).count());
    }
    BenchRow row{.m = inst.m, .n = inst.n, .b = inst.b, .kernel = kernel};
    row.median_seconds = median(std::move(times));
    row.candidates_peak = last.stats.peak_list;
    row.slack = last.slack;
    rows.push_back(row);
  }
  for (const auto& row : rows) {
    if (row.slack != rows.front().slack) {
      throw BenchMismatch(
          fmt::format("kernels disagree on m={} n={} b={} seed={}: {} slack {:.17g} vs {} "
                      "slack {:.17g}",
                      inst.m, inst.n, inst.b, config.seed, kernel_name(rows.front().kernel),
                      rows.front().slack, kernel_name(row.kernel), row.slack),
          reproducer_json(config, inst));
    }
  }
  return rows;
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchConfig& config, std::ostream* progress) {
  config.validate();
  std::vector<Instance> instances;
  for (auto m : config.sinks) {
    for (auto n : config.positions) {
      for (auto b : config.buffers) instances.push_back({m, n, b});
    }
  }

  std::vector<std::vector<BenchRow>> results(instances.size());
  std::vector<std::exception_ptr> errors(instances.size());
  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;
  const auto worker = [&] {
    for (std::size_t i = next++; i < instances.size(); i = next++) {
      try {
        results[i] = run_instance(config, instances[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
      if (progress) {
        const std::lock_guard lock(progress_mutex);
        *progress << fmt::format("bench: m={} n={} b={} done\n", instances[i].m,
                                 instances[i].n, instances[i].b);
      }
    }
  };
  const auto jobs = std::min<std::size_t>(config.jobs, instances.size());
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<BenchRow> rows;
  for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());

  const bool by_b = config.resolved_sweep() == SweepAxis::kBuffers;
  // Reference row per (kernel, m, fixed axis): the one with the smallest
  // swept value.
  std::map<std::tuple<Kernel, std::uint32_t, std::uint32_t>, const BenchRow*> reference;
  for (const auto& row : rows) {
    const auto key = std::make_tuple(row.kernel, row.m, by_b ? row.n : row.b);
    const auto swept = by_b ? row.b : row.n;
    auto& ref = reference[key];
    if (!ref || swept < (by_b ? ref->b : ref->n)) ref = &row;
  }
  std::vector<double> norms;
  for (const auto& row : rows) {
    const auto* ref = reference[std::make_tuple(row.kernel, row.m, by_b ? row.n : row.b)];
    norms.push_back(ref->median_seconds > 0 ? row.median_seconds / ref->median_seconds : 1.0);
  }
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].normalized = norms[i];
  return rows;
}

std::string bench_csv(std::span<const BenchRow> rows) {
  std::string out(kBenchCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{:.6e},{:.6f},{}\n", r.m, r.n, r.b, kernel_name(r.kernel),
                       r.median_seconds, r.normalized, r.candidates_peak);
  }
  return out;
}

BenchConfig parse_bench_config(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed bench config: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("bench config must be a JSON object");
  BenchConfig config;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "sinks") {
        config.sinks = value.get<std::vector<std::uint32_t>>();
      } else if (key == "positions") {
        config.positions = value.get<std::vector<std::uint32_t>>();
      } else if (key == "buffers") {
        config.buffers = value.get<std::vector<std::uint32_t>>();
      } else if (key == "repetitions") {
        config.repetitions = value.get<std::uint32_t>();
      } else if (key == "seed") {
        config.seed = value.get<std::uint64_t>();
      } else if (key == "kernels") {
        config.kernels.clear();
        for (const auto& k : value) config.kernels.push_back(parse_kernel(k.get<std::string>()));
      } else if (key == "mode") {
        config.mode = parse_mode(value.get<std::string>());
      } else if (key == "sweep") {
        const auto s = value.get<std::string>();
        if (s == "auto") {
          config.sweep = SweepAxis::kAuto;
        } else if (s == "b") {
          config.sweep = SweepAxis::kBuffers;
        } else if (s == "n") {
          config.sweep = SweepAxis::kPositions;
        } else {
          throw ParseError("unknown sweep axis '" + s + "'");
        }
      } else if (key == "jobs") {
        config.jobs = value.get<std::uint32_t>();
      } else if (key == "output") {
        config.output = value.get<std::string>();
      } else {
        throw ParseError("unknown key '" + key + "' in bench config");
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad bench config field: ") + e.what());
  }
  config.validate();
  return config;
}

std::string dump_bench_config(const BenchConfig& config) {
  nlohmann::json doc;
  doc["sinks"] = config.sinks;
  doc["positions"] = config.positions;
  doc["buffers"] = config.buffers;
  doc["repetitions"] = config.repetitions;
  doc["seed"] = config.seed;
  doc["kernels"] = nlohmann::json::array();
  for (auto k : config.kernels) doc["kernels"].push_back(std::string(kernel_name(k)));
  doc["mode"] = std::string(mode_name(config.mode));
  doc["sweep"] = config.sweep == SweepAxis::kAuto      ? "auto"
                 : config.sweep == SweepAxis::kBuffers ? "b"
                                                       : "n";
  doc["jobs"] = config.jobs;
  if (!config.output.empty()) doc["output"] = config.output;
  return doc.dump(1) + "\n";
}

}  // namespace bufins
