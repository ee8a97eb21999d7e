#include "bufins/solver.hpp"

#include <string>

#include "bufins/error.hpp"

namespace bufins {

Problem::Problem(const RoutingTree& tree, const BufferLibrary& lib)
    : tree_(tree),
      lib_(lib),
      masks_(tree.vertex_count()),
      sinks_below_(tree.vertex_count(), 0),
      positions_below_(tree.vertex_count(), 0) {
  for (std::size_t v = 0; v < tree.vertex_count(); ++v) {
    const auto& ids = tree.allowed(v);
    if (ids.empty()) continue;
    masks_[v].assign(lib.size(), 0);
    for (const auto& id : ids) {
      const auto b = lib.find(id);
      if (!b) {
        throw ValidationError("vertex '" + tree.vertex(v).id + "' allows buffer '" + id +
                              "' missing from library '" + lib.name() + "'");
      }
      masks_[v][*b] = 1;
    }
  }
  for (const std::uint32_t v : tree.post_order()) {
    const auto& vert = tree.vertex(v);
    if (vert.kind == VertexKind::kSink) sinks_below_[v] = 1;
    if (!masks_[v].empty()) ++positions_below_[v];
    for (const auto e : vert.child_edges) {
      const auto child = tree.edge_head(e);
      sinks_below_[v] += sinks_below_[child];
      positions_below_[v] += positions_below_[child];
    }
  }
}

SolveResult solve(const Problem& problem, const SolveOptions& options) {
  const RoutingTree& tree = problem.tree();
  const BufferLibrary& lib = problem.library();
  DpEngine engine(lib, options.mode, options.check_invariants);
  KernelStats& stats = engine.stats();

  SolveResult result;
  result.candidate_counts.assign(tree.vertex_count(), 0);
  std::vector<CandidateList> lists(tree.vertex_count());

  const auto check_size = [&](std::uint32_t v, const CandidateList& list) {
    stats.peak_list = std::max<std::uint64_t>(stats.peak_list, list.size());
    const std::uint64_t bound =
        std::uint64_t{lib.size()} * problem.positions_below(v) + problem.sinks_below(v);
    if (list.size() > bound) {
      ++stats.size_bound_violations;
      if (options.check_invariants) {
        throw InvariantError("candidate list at '" + tree.vertex(v).id + "' has " +
                             std::to_string(list.size()) + " members, bound " +
                             std::to_string(bound));
      }
    }
  };

  for (const std::uint32_t v : tree.post_order()) {
    const auto& vert = tree.vertex(v);
    CandidateList list;
    if (vert.kind == VertexKind::kSink) {
      list = engine.leaf(v, vert.sink_c, vert.rat);
    } else {
      bool first = true;
      for (const auto e : vert.child_edges) {
        const auto child = tree.edge_head(e);
        CandidateList branch = std::move(lists[child]);
        lists[child] = CandidateList{};
        engine.add_wire(branch, tree.edge(e).r, tree.edge(e).c);
        if (first) {
          list = std::move(branch);
          first = false;
        } else {
          list = engine.merge_branches(list, branch);
        }
      }
      if (const auto allowed = problem.allowed(v); !allowed.empty()) {
        check_size(v, list);
        engine.add_buffer(options.kernel, list, allowed, v);
      }
    }
    check_size(v, list);
    result.candidate_counts[v] = static_cast<std::uint32_t>(list.size());
    lists[v] = std::move(list);
  }

  const CandidateList& root = lists[0];
  const auto& driver = tree.driver();
  std::size_t best = 0;
  double best_val = 0.0;
  for (std::size_t i = 0; i < root.size(); ++i) {
    const Candidate& a = root[i];
    const double val = driver ? a.q - driver->r * a.c - driver->k : a.q;
    // Strict comparison: the list is in increasing C, so ties keep the
    // smaller load.
    if (i == 0 || val > best_val) {
      best_val = val;
      best = i;
    }
  }
  result.slack = best_val;
  result.root_c = root[best].c;
  for (const auto& [vertex, buffer] : engine.traces().placements(root[best].trace)) {
    result.assignment.placements[tree.vertex(vertex).id] = lib[buffer].id;
  }
  result.stats = stats;
  return result;
}

SolveResult solve(const RoutingTree& tree, const BufferLibrary& lib,
                  const SolveOptions& options) {
  return solve(Problem(tree, lib), options);
}

}  // namespace bufins
