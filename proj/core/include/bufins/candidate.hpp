#pragma once

// (Q, C) candidate lists and the kernels that keep them nonredundant.
//
// A CandidateList is kept sorted so that both slack Q and downstream
// capacitance C strictly increase along it; no member then dominates
// another. Comparisons are exact IEEE comparisons with no epsilon.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bufins {

/// Opaque provenance handle. The candidate kernels copy it around but never
/// look inside.
using TraceId = std::uint32_t;
inline constexpr TraceId kNoTrace = UINT32_MAX;

struct Candidate {
  double q = 0.0;  // slack
  double c = 0.0;  // downstream capacitance
  TraceId trace = kNoTrace;
};

using CandidateList = std::vector<Candidate>;

/// a dominates b: at least the slack and at most the load of b.
inline bool dominates(const Candidate& a, const Candidate& b) {
  return a.q >= b.q && a.c <= b.c;
}

/// True when the list is strictly increasing in both Q and C.
bool is_nonredundant(std::span<const Candidate> list);

/// Inserts c unless an existing member dominates it (an exact duplicate keeps
/// the incumbent), then drops every member c dominates.
void insert_pruned(CandidateList& list, const Candidate& c);

/// Restores nonredundancy for a list sorted by non-decreasing C whose Q order
/// may have been broken: one left-to-right pass keeps a candidate only if its
/// Q beats everything kept so far, and at equal C the larger Q wins.
/// Returns the number of candidates removed.
std::size_t prune_dominated(CandidateList& list);

/// Merges betas (sorted by non-decreasing C) into list in one linear pass.
/// The result is the nonredundant subset of the union; on exact (Q, C)
/// duplicates the list member survives. `scratch` is reused storage.
void merge_sorted(CandidateList& list, std::span<const Candidate> betas,
                  CandidateList& scratch);

/// Hull test on the (C, Q) plane for C(a1) < C(a2) < C(a3): true when the
/// slope a1->a2 is not greater than the slope a2->a3, i.e. a2 lies on or
/// below the chord a1->a3. Collinear middles count as a left turn.
bool left_turn(const Candidate& a1, const Candidate& a2, const Candidate& a3);

/// Move counters of one Graham scan.
struct ScanStats {
  std::size_t input_size = 0;
  std::size_t forward = 0;
  std::size_t backward = 0;

  std::size_t moves() const { return forward + backward; }
  /// The linear-time bound: at most 2k moves for k candidates.
  bool within_bound() const { return moves() <= 2 * input_size; }
};

/// Indices (ascending) of the members of `list` that survive convex pruning:
/// the upper-left hull on which no three consecutive points make a left turn.
/// The input list is not touched. `hull` is overwritten.
ScanStats convex_hull(std::span<const Candidate> list, std::vector<std::uint32_t>& hull);

/// In-place convex pruning. Lists of size <= 2 are left unchanged.
ScanStats convex_prune(CandidateList& list);

}  // namespace bufins
