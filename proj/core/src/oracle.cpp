#include "bufins/oracle.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include "bufins/error.hpp"

namespace bufins {

namespace {

constexpr std::int32_t kUnbuffered = -1;

/// Flat copy of the tree for repeated evaluation with different buffer
/// choices. Recomputes everything from scratch on each call.
class Evaluator {
 public:
  Evaluator(const RoutingTree& tree, const BufferLibrary& lib)
      : tree_(tree), lib_(lib), buffer_(tree.vertex_count(), kUnbuffered),
        down_(tree.vertex_count()), in_(tree.vertex_count()),
        arrival_(tree.vertex_count()) {}

  void place(std::size_t v, std::int32_t buffer) { buffer_[v] = buffer; }

  /// Fills loads and arrival times; returns the worst sink slack.
  double run() {
    const auto order = tree_.post_order();
    for (const std::uint32_t v : order) {
      const auto& vert = tree_.vertex(v);
      double load = 0.0;
      if (vert.kind == VertexKind::kSink) {
        load = vert.sink_c;
      } else {
        bool first = true;
        for (const auto e : vert.child_edges) {
          const double branch = in_[tree_.edge_head(e)] + tree_.edge(e).c;
          load = first ? branch : load + branch;
          first = false;
        }
      }
      down_[v] = load;
      in_[v] = buffer_[v] == kUnbuffered ? load : lib_[buffer_[v]].c;
    }

    double worst = std::numeric_limits<double>::infinity();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const std::uint32_t v = *it;
      const auto& vert = tree_.vertex(v);
      if (vert.kind == VertexKind::kSource) {
        const auto& driver = tree_.driver();
        arrival_[v] = driver ? driver->r * down_[v] + driver->k : 0.0;
      }
      if (vert.kind == VertexKind::kSink) {
        worst = std::min(worst, vert.rat - arrival_[v]);
        continue;
      }
      double gate = 0.0;
      if (buffer_[v] != kUnbuffered) {
        const BufferType& b = lib_[buffer_[v]];
        gate = b.r * down_[v] + b.k;
      }
      for (const auto e : vert.child_edges) {
        const auto child = tree_.edge_head(e);
        const EdgeSpec& edge = tree_.edge(e);
        const double wire = edge.r * (edge.c / 2 + in_[child]);
        arrival_[child] = arrival_[v] + (gate + wire);
      }
    }
    return worst;
  }

  double down(std::size_t v) const { return down_[v]; }
  double arrival(std::size_t v) const { return arrival_[v]; }

 private:
  const RoutingTree& tree_;
  const BufferLibrary& lib_;
  std::vector<std::int32_t> buffer_;
  std::vector<double> down_;
  std::vector<double> in_;
  std::vector<double> arrival_;
};

}  // namespace

EvalReport evaluate(const RoutingTree& tree, const BufferLibrary& lib,
                    const Assignment& assignment) {
  check_assignment(tree, lib, assignment);
  Evaluator eval(tree, lib);
  for (const auto& [vertex, buffer] : assignment.placements) {
    eval.place(*tree.find(vertex), static_cast<std::int32_t>(*lib.find(buffer)));
  }
  EvalReport report;
  report.slack = eval.run();
  for (std::size_t v = 0; v < tree.vertex_count(); ++v) {
    const auto& vert = tree.vertex(v);
    report.downstream_cap[vert.id] = eval.down(v);
    if (vert.kind == VertexKind::kSink) {
      report.per_sink[vert.id] = {eval.arrival(v), vert.rat - eval.arrival(v)};
    }
  }
  return report;
}

std::uint64_t assignment_count(const RoutingTree& tree) {
  std::uint64_t count = 1;
  for (std::size_t v = 0; v < tree.vertex_count(); ++v) {
    const std::uint64_t choices = tree.allowed(v).size() + 1;
    if (choices == 1) continue;
    if (count > std::numeric_limits<std::uint64_t>::max() / choices) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    count *= choices;
  }
  return count;
}

BruteForceResult brute_force(const RoutingTree& tree, const BufferLibrary& lib,
                             std::uint64_t cap) {
  const std::uint64_t count = assignment_count(tree);
  if (count > cap) throw CapExceeded(count, cap);
  check_library_refs(tree, lib);

  struct Position {
    std::uint32_t vertex;
    std::vector<std::int32_t> options;  // library indices, allowed-list order
  };
  std::vector<Position> positions;
  for (std::uint32_t v = 0; v < tree.vertex_count(); ++v) {
    const auto& ids = tree.allowed(v);
    if (ids.empty()) continue;
    Position p{v, {}};
    for (const auto& id : ids) p.options.push_back(static_cast<std::int32_t>(*lib.find(id)));
    positions.push_back(std::move(p));
  }

  Evaluator eval(tree, lib);
  // digit[i] == 0 means no buffer, otherwise options[digit - 1]. The last
  // position changes fastest, so assignments come out in lexicographic order.
  std::vector<std::size_t> digit(positions.size(), 0);
  std::vector<std::size_t> best_digit = digit;
  double best = -std::numeric_limits<double>::infinity();
  BruteForceResult result;
  while (true) {
    for (std::size_t i = 0; i < positions.size(); ++i) {
      eval.place(positions[i].vertex,
                 digit[i] == 0 ? kUnbuffered : positions[i].options[digit[i] - 1]);
    }
    const double slack = eval.run();
    ++result.evaluated;
    if (result.evaluated == 1 || slack > best) {
      best = slack;
      best_digit = digit;
    }
    std::size_t i = positions.size();
    for (; i > 0; --i) {
      if (++digit[i - 1] <= positions[i - 1].options.size()) break;
      digit[i - 1] = 0;
    }
    if (i == 0) break;
  }

  result.slack = best;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (best_digit[i] == 0) continue;
    result.argmax.placements[tree.vertex(positions[i].vertex).id] =
        lib[positions[i].options[best_digit[i] - 1]].id;
  }
  return result;
}

}  // namespace bufins
