#include "bufins/dp.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "bufins/error.hpp"

namespace bufins {

KernelStats& KernelStats::operator+=(const KernelStats& o) {
  buffer_steps += o.buffer_steps;
  betas_generated += o.betas_generated;
  hull_calls += o.hull_calls;
  hull_removed += o.hull_removed;
  scan_forward += o.scan_forward;
  scan_backward += o.scan_backward;
  scan_bound_violations += o.scan_bound_violations;
  pointer_checks += o.pointer_checks;
  wire_pruned += o.wire_pruned;
  merges += o.merges;
  size_bound_violations += o.size_bound_violations;
  peak_list = std::max(peak_list, o.peak_list);
  return *this;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> TraceArena::placements(
    TraceId root) const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  std::vector<TraceId> stack{root};
  while (!stack.empty()) {
    const TraceId id = stack.back();
    stack.pop_back();
    const TraceNode& node = nodes_[id];
    switch (node.kind) {
      case TraceNode::Kind::kSink:
        break;
      case TraceNode::Kind::kBuffer:
        out.emplace_back(node.vertex, node.buffer);
        stack.push_back(node.left);
        break;
      case TraceNode::Kind::kMerge:
        stack.push_back(node.left);
        stack.push_back(node.right);
        break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

DpEngine::DpEngine(const BufferLibrary& lib, PruneMode mode, bool check)
    : lib_(lib), mode_(mode), check_(check), slot_(lib.size()), has_slot_(lib.size(), 0) {}

CandidateList DpEngine::leaf(std::uint32_t vertex, double sink_c, double rat) {
  const TraceId t = traces_.add({.kind = TraceNode::Kind::kSink, .vertex = vertex});
  return CandidateList{Candidate{rat, sink_c, t}};
}

void DpEngine::add_wire(CandidateList& list, double r, double c) {
  if (r == 0.0 && c == 0.0) return;
  for (Candidate& a : list) {
    a.q = a.q - r * (c / 2 + a.c);
    a.c = a.c + c;
  }
  stats_.wire_pruned += prune_dominated(list);
}

CandidateList DpEngine::merge_branches(const CandidateList& left,
                                       const CandidateList& right) {
  ++stats_.merges;
  CandidateList out;
  out.reserve(left.size() + right.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < left.size() && j < right.size()) {
    const Candidate& l = left[i];
    const Candidate& r = right[j];
    const double c = l.c + r.c;
    const double q = std::min(l.q, r.q);
    // Rounding in C_l + C_r can tie consecutive loads; keep the better slack.
    if (out.empty() || q > out.back().q) {
      if (!out.empty() && out.back().c == c) out.pop_back();
      const TraceId t = traces_.add(
          {.kind = TraceNode::Kind::kMerge, .left = l.trace, .right = r.trace});
      out.push_back({q, c, t});
    }
    if (l.q < r.q) {
      ++i;
    } else if (r.q < l.q) {
      ++j;
    } else {
      ++i;
      ++j;
    }
  }
  return out;
}

void DpEngine::add_buffer_fast(CandidateList& list, std::span<const std::uint8_t> allowed,
                               std::uint32_t vertex) {
  ++stats_.buffer_steps;
  choices_.clear();
  if (list.empty()) return;

  const ScanStats scan = convex_hull(list, hull_);
  ++stats_.hull_calls;
  stats_.scan_forward += scan.forward;
  stats_.scan_backward += scan.backward;
  stats_.hull_removed += list.size() - hull_.size();
  if (!scan.within_bound()) {
    ++stats_.scan_bound_violations;
    if (check_) {
      throw InvariantError("convex pruning made " + std::to_string(scan.moves()) +
                           " moves on " + std::to_string(scan.input_size) + " candidates");
    }
  }

  // One pointer shared by all buffer types: with R non-increasing the best
  // candidate never moves towards smaller C, and on the hull a local maximum
  // of the buffered slack is the global one.
  std::size_t pos = 0;
  const std::size_t h = hull_.size();
  for (const std::uint32_t b : lib_.order_by_r()) {
    if (!allowed[b]) continue;
    const BufferType& type = lib_[b];
    while (pos + 1 < h &&
           buffered_slack(type, list[hull_[pos]]) < buffered_slack(type, list[hull_[pos + 1]])) {
      ++pos;
    }
    const Candidate& best = list[hull_[pos]];
    const TraceId t = traces_.add({.kind = TraceNode::Kind::kBuffer,
                                   .vertex = vertex,
                                   .buffer = b,
                                   .left = best.trace});
    slot_[b] = {buffered_slack(type, best), type.c, t};
    has_slot_[b] = 1;
    choices_.push_back(hull_[pos]);
  }

  if (check_) audit_fast_step(list, allowed);

  if (mode_ == PruneMode::kDestructive) {
    for (std::size_t i = 0; i < h; ++i) list[i] = list[hull_[i]];
    list.resize(h);
  }

  // The library's C order sorts the betas in O(b) without comparisons.
  betas_.clear();
  for (const std::uint32_t b : lib_.order_by_c()) {
    if (has_slot_[b]) {
      betas_.push_back(slot_[b]);
      has_slot_[b] = 0;
    }
  }
  stats_.betas_generated += betas_.size();
  merge_sorted(list, betas_, scratch_);
}

void DpEngine::audit_fast_step(std::span<const Candidate> before,
                               std::span<const std::uint8_t> allowed) {
  ++stats_.pointer_checks;
  std::size_t k = 0;
  std::size_t prev_best = 0;
  for (const std::uint32_t b : lib_.order_by_r()) {
    if (!allowed[b]) continue;
    const BufferType& type = lib_[b];
    double best_val = -std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    for (std::size_t j = 0; j < before.size(); ++j) {
      const double v = buffered_slack(type, before[j]);
      if (v > best_val) {
        best_val = v;
        best_idx = j;
      }
    }
    if (slot_[b].q != best_val) {
      throw InvariantError("pointer walk missed the best candidate for buffer '" +
                           type.id + "'");
    }
    if (best_idx < prev_best) {
      throw InvariantError("best candidate moved to smaller C for buffer '" + type.id + "'");
    }
    if (k > 0 && choices_[k] < choices_[k - 1]) {
      throw InvariantError("pointer retreated for buffer '" + type.id + "'");
    }
    prev_best = best_idx;
    ++k;
  }
}

void DpEngine::add_buffer_baseline(CandidateList& list,
                                   std::span<const std::uint8_t> allowed,
                                   std::uint32_t vertex) {
  ++stats_.buffer_steps;
  if (list.empty()) return;
  betas_.clear();
  for (const std::uint32_t b : lib_.order_by_r()) {
    if (!allowed[b]) continue;
    const BufferType& type = lib_[b];
    std::size_t best = 0;
    double best_val = buffered_slack(type, list[0]);
    for (std::size_t j = 1; j < list.size(); ++j) {
      const double v = buffered_slack(type, list[j]);
      if (v > best_val) {
        best_val = v;
        best = j;
      }
    }
    const TraceId t = traces_.add({.kind = TraceNode::Kind::kBuffer,
                                   .vertex = vertex,
                                   .buffer = b,
                                   .left = list[best].trace});
    betas_.push_back({best_val, type.c, t});
  }
  stats_.betas_generated += betas_.size();
  for (const Candidate& beta : betas_) insert_pruned(list, beta);
}

}  // namespace bufins
