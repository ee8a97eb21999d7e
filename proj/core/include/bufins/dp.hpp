#pragma once

// Dynamic-programming kernels over candidate lists: sink base case, wire,
// branch merge and the two buffer-insertion kernels.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bufins/candidate.hpp"
#include "bufins/net.hpp"

namespace bufins {

enum class Kernel : std::uint8_t {
  kFast,      // convex pruning + monotone pointer walk, O(k + b) per position
  kBaseline,  // full scan per buffer type, O(b * k) per position
};

/// What the fast kernel does to the unbuffered candidates it prunes.
enum class PruneMode : std::uint8_t {
  kDestructive,  // prune the list itself in place
  kCopy,         // prune a hull view; unbuffered candidates stay untouched
};

/// Provenance record; candidates point at one through their TraceId.
struct TraceNode {
  enum class Kind : std::uint8_t { kSink, kBuffer, kMerge };

  Kind kind = Kind::kSink;
  std::uint32_t vertex = 0;  // sink or buffer position
  std::uint32_t buffer = 0;  // library index, kBuffer only
  TraceId left = kNoTrace;   // child candidate (kBuffer) or left branch (kMerge)
  TraceId right = kNoTrace;  // right branch (kMerge)
};

/// Append-only store of trace nodes. Nodes are never mutated once added, so
/// candidates can be copied and pruned freely.
class TraceArena {
 public:
  TraceId add(const TraceNode& node) {
    nodes_.push_back(node);
    return static_cast<TraceId>(nodes_.size() - 1);
  }
  const TraceNode& operator[](TraceId id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }

  /// (vertex, buffer) for every buffer reachable from `root`, sorted by vertex.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> placements(TraceId root) const;

 private:
  std::vector<TraceNode> nodes_;
};

struct KernelStats {
  std::uint64_t buffer_steps = 0;
  std::uint64_t betas_generated = 0;
  std::uint64_t hull_calls = 0;
  std::uint64_t hull_removed = 0;
  std::uint64_t scan_forward = 0;
  std::uint64_t scan_backward = 0;
  std::uint64_t scan_bound_violations = 0;  // calls with moves > 2k
  std::uint64_t pointer_checks = 0;         // buffer steps audited in check mode
  std::uint64_t wire_pruned = 0;
  std::uint64_t merges = 0;
  std::uint64_t size_bound_violations = 0;  // list longer than b*n + m
  std::uint64_t peak_list = 0;

  KernelStats& operator+=(const KernelStats& o);
};

/// Per-solve kernel state: the library, the trace arena, counters and
/// reusable scratch storage.
///
/// With `check` set, every buffer step is audited against an exhaustive scan
/// of the unpruned list: the values found by the pointer walk must be global
/// maxima, the best candidates of consecutive buffer types must not move to
/// smaller C, and each Graham scan must stay within 2k moves. A failed audit
/// throws InvariantError.
class DpEngine {
 public:
  explicit DpEngine(const BufferLibrary& lib, PruneMode mode = PruneMode::kCopy,
                    bool check = false);

  const BufferLibrary& library() const { return lib_; }
  const TraceArena& traces() const { return traces_; }
  const KernelStats& stats() const { return stats_; }
  KernelStats& stats() { return stats_; }

  CandidateList leaf(std::uint32_t vertex, double sink_c, double rat);

  /// Q' = Q - R * (C_wire / 2 + C), C' = C + C_wire, then drop what became
  /// dominated.
  void add_wire(CandidateList& list, double r, double c);

  /// Nonredundant set of (min(Q_l, Q_r), C_l + C_r) by a two-pointer walk.
  CandidateList merge_branches(const CandidateList& left, const CandidateList& right);

  /// `allowed[i] != 0` enables library buffer i. Both kernels keep the
  /// unbuffered candidates and add one candidate per allowed buffer type.
  void add_buffer_fast(CandidateList& list, std::span<const std::uint8_t> allowed,
                       std::uint32_t vertex);
  void add_buffer_baseline(CandidateList& list, std::span<const std::uint8_t> allowed,
                           std::uint32_t vertex);

  void add_buffer(Kernel kernel, CandidateList& list,
                  std::span<const std::uint8_t> allowed, std::uint32_t vertex) {
    if (kernel == Kernel::kFast) {
      add_buffer_fast(list, allowed, vertex);
    } else {
      add_buffer_baseline(list, allowed, vertex);
    }
  }

  /// Positions (in the unpruned input list) of the best candidate chosen for
  /// each allowed buffer in the last fast step, in non-increasing-R order.
  std::span<const std::uint32_t> last_choices() const { return choices_; }

 private:
  double buffered_slack(const BufferType& b, const Candidate& a) const {
    return a.q - b.r * a.c - b.k;
  }
  void audit_fast_step(std::span<const Candidate> before,
                       std::span<const std::uint8_t> allowed);

  const BufferLibrary& lib_;
  PruneMode mode_;
  bool check_;
  TraceArena traces_;
  KernelStats stats_;

  std::vector<std::uint32_t> hull_;
  std::vector<Candidate> slot_;  // one beta per library index
  std::vector<std::uint8_t> has_slot_;
  CandidateList betas_;
  CandidateList scratch_;
  CandidateList before_;
  std::vector<std::uint32_t> choices_;
};

/// Mask enabling every buffer of a library of size b.
inline std::vector<std::uint8_t> allow_all(std::size_t b) {
  return std::vector<std::uint8_t>(b, 1);
}

}  // namespace bufins
