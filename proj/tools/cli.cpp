#include "cli.hpp"

#include <chrono>
#include <filesystem>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "bufins/bench.hpp"
#include "bufins/error.hpp"
#include "bufins/generator.hpp"
#include "bufins/io.hpp"
#include "bufins/oracle.hpp"
#include "bufins/solver.hpp"

namespace bufins::cli {

namespace {

using nlohmann::json;

enum class Format { kJson, kCsv };

struct SolveArgs {
  std::string net;
  std::string lib;
  std::string kernel = "fast";
  std::string mode = "copy";
  bool csv = false;
  bool json_flag = false;
  bool check = false;
  std::uint64_t cap = kDefaultBruteForceCap;
  std::string out;
};

struct VerifyArgs {
  std::string net;
  std::string lib;
  std::string assignment;
  bool csv = false;
  bool json_flag = false;
  std::string out;
};

struct GenArgs {
  std::uint32_t sinks = 1;
  std::uint32_t positions = 0;
  std::uint32_t buffers = 8;
  std::uint64_t seed = 1;
  std::string net_out;
  std::string lib_out;
};

struct BenchArgs {
  std::string config;
  std::vector<std::uint32_t> sinks;
  std::vector<std::uint32_t> positions;
  std::vector<std::uint32_t> buffers;
  std::optional<std::uint32_t> reps;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> kernels;
  std::string mode;
  std::string sweep;
  std::optional<std::uint32_t> jobs;
  std::string out;
  bool quiet = false;
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

std::string fmt_seconds(double s) { return fmt::format("{:.17e}", s); }

// Loads a net/library pair and checks that they belong together.
std::pair<RoutingTree, BufferLibrary> load_inputs(const std::string& net_path,
                                                  const std::string& lib_path) {
  BufferLibrary lib = load_library(lib_path);
  RoutingTree tree = load_net(net_path);
  if (tree.spec().library_ref != lib.name()) {
    throw ValidationError("net '" + net_path + "' references library '" +
                          tree.spec().library_ref + "' but '" + lib_path + "' is '" +
                          lib.name() + "'");
  }
  check_library_refs(tree, lib);
  return {std::move(tree), std::move(lib)};
}

json stats_json(const KernelStats& s) {
  return {{"buffer_steps", s.buffer_steps},
          {"betas_generated", s.betas_generated},
          {"hull_calls", s.hull_calls},
          {"hull_removed", s.hull_removed},
          {"scan_forward", s.scan_forward},
          {"scan_backward", s.scan_backward},
          {"scan_bound_violations", s.scan_bound_violations},
          {"pointer_checks", s.pointer_checks},
          {"wire_pruned", s.wire_pruned},
          {"merges", s.merges},
          {"size_bound_violations", s.size_bound_violations},
          {"peak_list", s.peak_list}};
}

std::string csv_report(const json& report) {
  std::string out = "section,key,value\n";
  for (const auto& [key, value] : report.items()) {
    if (value.is_object()) {
      for (const auto& [k, v] : value.items()) {
        out += fmt::format("{},{},{}\n", key, k, v.is_string() ? v.get<std::string>() : v.dump());
      }
    } else if (key == "slack" || key == "wall_seconds" || key == "root_c") {
      out += fmt::format("summary,{},{}\n", key, fmt_seconds(value.get<double>()));
    } else {
      out += fmt::format("summary,{},{}\n", key,
                         value.is_string() ? value.get<std::string>() : value.dump());
    }
  }
  return out;
}

std::string render(const json& report, bool csv) {
  return csv ? csv_report(report) : report.dump(2) + "\n";
}

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  auto [tree, lib] = load_inputs(a.net, a.lib);
  json report;
  report["kernel"] = a.kernel;
  const auto start = std::chrono::steady_clock::now();
  if (a.kernel == "brute") {
    const auto r = brute_force(tree, lib, a.cap);
    const auto stop = std::chrono::steady_clock::now();
    report["slack"] = r.slack;
    report["assignment"] = r.argmax.placements;
    report["stats"] = {{"evaluated", r.evaluated}};
    report["wall_seconds"] = std::chrono::duration<double>(stop - start).count();
  } else {
    const Problem problem(tree, lib);
    const SolveOptions options{.kernel = parse_kernel(a.kernel),
                               .mode = parse_mode(a.mode),
                               .check_invariants = a.check};
    const auto t0 = std::chrono::steady_clock::now();
    const SolveResult r = solve(problem, options);
    const auto stop = std::chrono::steady_clock::now();
    report["mode"] = a.mode;
    report["slack"] = r.slack;
    report["root_c"] = r.root_c;
    report["assignment"] = r.assignment.placements;
    json counts = json::object();
    for (std::size_t v = 0; v < tree.vertex_count(); ++v) {
      counts[tree.vertex(v).id] = r.candidate_counts[v];
    }
    report["candidate_counts"] = std::move(counts);
    report["stats"] = stats_json(r.stats);
    report["wall_seconds"] = std::chrono::duration<double>(stop - t0).count();
  }
  emit(render(report, a.csv), a.out, out);
  return kExitOk;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  auto [tree, lib] = load_inputs(a.net, a.lib);
  const Assignment assignment = load_assignment(a.assignment);
  const EvalReport r = evaluate(tree, lib, assignment);
  json report;
  report["slack"] = r.slack;
  json delay = json::object();
  json slack = json::object();
  for (const auto& [id, t] : r.per_sink) {
    delay[id] = t.delay;
    slack[id] = t.slack;
  }
  report["sink_delay"] = std::move(delay);
  report["sink_slack"] = std::move(slack);
  report["downstream_cap"] = r.downstream_cap;
  emit(render(report, a.csv), a.out, out);
  return kExitOk;
}

int cmd_gen(const GenArgs& a, std::ostream& out) {
  const GeneratedNet net = generate_net(a.sinks, a.positions, a.buffers, a.seed);
  if (a.lib_out.empty()) {
    out << dump_library(net.library);
  } else {
    save_library(net.library, a.lib_out);
  }
  if (a.net_out.empty()) {
    out << dump_net(net.tree);
  } else {
    save_net(net.tree, a.net_out);
  }
  return kExitOk;
}

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  BenchConfig config = a.config.empty() ? BenchConfig{}
                                        : parse_bench_config(read_text_file(a.config));
  if (!a.sinks.empty()) config.sinks = a.sinks;
  if (!a.positions.empty()) config.positions = a.positions;
  if (!a.buffers.empty()) config.buffers = a.buffers;
  if (a.reps) config.repetitions = *a.reps;
  if (a.seed) config.seed = *a.seed;
  if (!a.kernels.empty()) {
    config.kernels.clear();
    for (const auto& k : a.kernels) config.kernels.push_back(parse_kernel(k));
  }
  if (!a.mode.empty()) config.mode = parse_mode(a.mode);
  if (!a.sweep.empty()) {
    if (a.sweep == "b") {
      config.sweep = SweepAxis::kBuffers;
    } else if (a.sweep == "n") {
      config.sweep = SweepAxis::kPositions;
    } else if (a.sweep == "auto") {
      config.sweep = SweepAxis::kAuto;
    } else {
      throw ParseError("unknown sweep axis '" + a.sweep + "'");
    }
  }
  if (a.jobs) config.jobs = *a.jobs;
  if (!a.out.empty()) config.output = a.out;
  config.validate();

  try {
    const auto rows = run_bench(config, a.quiet ? nullptr : &err);
    emit(bench_csv(rows), config.output, out);
  } catch (const BenchMismatch& e) {
    const std::filesystem::path dir =
        config.output.empty() ? std::filesystem::path(".")
                              : std::filesystem::path(config.output).parent_path();
    const auto path = (dir.empty() ? std::filesystem::path(".") : dir) /
                      fmt::format("bench-mismatch-seed{}.json", config.seed);
    write_text_file(path, e.reproducer());
    err << "bufins: " << e.what() << "\nreproducer written to " << path.string() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal buffer insertion on RC routing trees"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Maximize source slack over buffer assignments");
  solve_cmd->add_option("--net", solve_args.net, "Net file (JSON)")->required();
  solve_cmd->add_option("--lib", solve_args.lib, "Buffer library file (JSON)")->required();
  solve_cmd->add_option("--kernel", solve_args.kernel, "fast | baseline | brute")
      ->check(CLI::IsMember({"fast", "baseline", "brute"}));
  solve_cmd->add_option("--mode", solve_args.mode, "Convex pruning mode: copy | destructive")
      ->check(CLI::IsMember({"copy", "destructive"}));
  auto* solve_json = solve_cmd->add_flag("--json", solve_args.json_flag, "JSON report (default)");
  solve_cmd->add_flag("--csv", solve_args.csv, "CSV report")->excludes(solve_json);
  solve_cmd->add_flag("--check", solve_args.check, "Audit kernel invariants while solving");
  solve_cmd->add_option("--cap", solve_args.cap, "Brute-force enumeration cap");
  solve_cmd->add_option("--out", solve_args.out, "Report path (default stdout)");

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "Evaluate an assignment with Elmore delay");
  verify_cmd->add_option("--net", verify_args.net, "Net file (JSON)")->required();
  verify_cmd->add_option("--lib", verify_args.lib, "Buffer library file (JSON)")->required();
  verify_cmd->add_option("--assignment", verify_args.assignment,
                         "JSON file with an \"assignment\" object")
      ->required();
  auto* verify_json = verify_cmd->add_flag("--json", verify_args.json_flag, "JSON report");
  verify_cmd->add_flag("--csv", verify_args.csv, "CSV report")->excludes(verify_json);
  verify_cmd->add_option("--out", verify_args.out, "Report path (default stdout)");

  GenArgs gen_args;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a seeded random net and library");
  gen_cmd->add_option("--sinks,-m", gen_args.sinks, "Number of sinks")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--positions,-n", gen_args.positions, "Number of buffer positions");
  gen_cmd->add_option("--buffers,-b", gen_args.buffers, "Library size")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen_args.seed, "RNG seed");
  gen_cmd->add_option("--net-out", gen_args.net_out, "Net file to write");
  gen_cmd->add_option("--lib-out", gen_args.lib_out, "Library file to write");

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "Time both kernels over seeded nets");
  bench_cmd->add_option("--config", bench_args.config, "Bench config (JSON)");
  bench_cmd->add_option("--sinks,-m", bench_args.sinks, "Sink counts")->delimiter(',');
  bench_cmd->add_option("--positions,-n", bench_args.positions, "Position counts")->delimiter(',');
  bench_cmd->add_option("--buffers,-b", bench_args.buffers, "Library sizes")->delimiter(',');
  bench_cmd->add_option("--reps", bench_args.reps, "Repetitions per point (median taken)");
  bench_cmd->add_option("--seed", bench_args.seed, "RNG seed");
  bench_cmd->add_option("--kernels", bench_args.kernels, "fast,baseline")->delimiter(',');
  bench_cmd->add_option("--mode", bench_args.mode, "copy | destructive");
  bench_cmd->add_option("--sweep", bench_args.sweep, "Normalization axis: auto | b | n");
  bench_cmd->add_option("--jobs", bench_args.jobs, "Worker threads");
  bench_cmd->add_option("--out", bench_args.out, "CSV path (default stdout)");
  bench_cmd->add_flag("--quiet", bench_args.quiet, "No progress on stderr");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(solve_args, out);
    if (verify_cmd->parsed()) return cmd_verify(verify_args, out);
    if (gen_cmd->parsed()) return cmd_gen(gen_args, out);
    return cmd_bench(bench_args, out, err);
  } catch (const CapExceeded& e) {
    err << "bufins: " << e.what() << "\n";
    return kExitCap;
  } catch (const IoError& e) {
    err << "bufins: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "bufins: " << e.what() << "\n";
    return kExitValidation;
  } catch (const InvariantError& e) {
    err << "bufins: invariant violated: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace bufins::cli
