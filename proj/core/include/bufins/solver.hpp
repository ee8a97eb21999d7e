#pragma once

#include <cstdint>
#include <vector>

#include "bufins/dp.hpp"
#include "bufins/net.hpp"

namespace bufins {

struct SolveOptions {
  Kernel kernel = Kernel::kFast;
  PruneMode mode = PruneMode::kCopy;
  // Audit every buffer step and the per-subtree list-size bound; violations
  // throw InvariantError.
  bool check_invariants = false;
};

struct SolveResult {
  // Best source slack; with a driver, Q - R_d * C - K_d of the chosen candidate.
  double slack = 0.0;
  double root_c = 0.0;  // downstream capacitance of the chosen candidate
  Assignment assignment;
  // List size at each vertex after it was processed, indexed like the tree.
  std::vector<std::uint32_t> candidate_counts;
  KernelStats stats;
};

/// A tree bound to a library: allowed sets resolved to per-vertex masks and
/// per-subtree sink/position counts. Building it validates library refs.
class Problem {
 public:
  Problem(const RoutingTree& tree, const BufferLibrary& lib);

  const RoutingTree& tree() const { return tree_; }
  const BufferLibrary& library() const { return lib_; }

  /// Empty for vertices that are not buffer positions.
  std::span<const std::uint8_t> allowed(std::size_t v) const { return masks_[v]; }
  std::uint32_t sinks_below(std::size_t v) const { return sinks_below_[v]; }
  std::uint32_t positions_below(std::size_t v) const { return positions_below_[v]; }

 private:
  const RoutingTree& tree_;
  const BufferLibrary& lib_;
  std::vector<std::vector<std::uint8_t>> masks_;
  std::vector<std::uint32_t> sinks_below_;
  std::vector<std::uint32_t> positions_below_;
};

/// Maximizes the source slack over all buffer assignments.
///
/// Vertices are processed children-first. Each child list is pushed through
/// its edge as a lumped wire, sibling lists are merged left to right in
/// child-id order, and a buffer position applies its buffer step to the
/// merged list. At the source the candidate with the best (driver-adjusted)
/// slack wins; ties go to the smaller load.
SolveResult solve(const Problem& problem, const SolveOptions& options = {});
SolveResult solve(const RoutingTree& tree, const BufferLibrary& lib,
                  const SolveOptions& options = {});

}  // namespace bufins
