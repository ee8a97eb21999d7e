#include "bufins/candidate.hpp"

#include <algorithm>
#include <cassert>

namespace bufins {

namespace {

// Appends x to a list being built in non-decreasing C order, keeping it
// strictly increasing in Q and C. The back is the kept member with the
// largest Q and the largest C not exceeding C(x).
inline void push_staircase(CandidateList& out, const Candidate& x) {
  if (!out.empty()) {
    const Candidate& back = out.back();
    if (x.q <= back.q) return;
    if (x.c == back.c) out.pop_back();
  }
  out.push_back(x);
}

}  // namespace

bool is_nonredundant(std::span<const Candidate> list) {
  for (std::size_t i = 1; i < list.size(); ++i) {
    if (!(list[i - 1].q < list[i].q) || !(list[i - 1].c < list[i].c)) return false;
  }
  return true;
}

void insert_pruned(CandidateList& list, const Candidate& c) {
  auto pos = std::lower_bound(list.begin(), list.end(), c.c,
                              [](const Candidate& a, double v) { return a.c < v; });
  // The member with the largest C <= C(c) carries the best slack among all
  // members that could dominate c.
  if (pos != list.end() && pos->c == c.c) {
    if (pos->q >= c.q) return;
  } else if (pos != list.begin() && std::prev(pos)->q >= c.q) {
    return;
  }
  auto last = pos;
  while (last != list.end() && last->q <= c.q) ++last;
  if (last == pos) {
    list.insert(pos, c);
  } else {
    *pos = c;
    list.erase(std::next(pos), last);
  }
}

std::size_t prune_dominated(CandidateList& list) {
  std::size_t kept = 0;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const Candidate x = list[i];
    if (kept > 0) {
      const Candidate& back = list[kept - 1];
      if (x.q <= back.q) continue;
      if (x.c == back.c) --kept;
    }
    list[kept++] = x;
  }
  const std::size_t removed = list.size() - kept;
  list.resize(kept);
  return removed;
}

void merge_sorted(CandidateList& list, std::span<const Candidate> betas,
                  CandidateList& scratch) {
  scratch.clear();
  scratch.reserve(list.size() + betas.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < list.size() || j < betas.size()) {
    // On equal C the incumbent goes first so exact duplicates keep it.
    if (j == betas.size() || (i < list.size() && list[i].c <= betas[j].c)) {
      push_staircase(scratch, list[i++]);
    } else {
      push_staircase(scratch, betas[j++]);
    }
  }
  list.swap(scratch);
}

bool left_turn(const Candidate& a1, const Candidate& a2, const Candidate& a3) {
  assert(a1.c < a2.c && a2.c < a3.c);
  return (a2.q - a1.q) * (a3.c - a2.c) <= (a3.q - a2.q) * (a2.c - a1.c);
}

ScanStats convex_hull(std::span<const Candidate> list, std::vector<std::uint32_t>& hull) {
  ScanStats stats;
  stats.input_size = list.size();
  hull.clear();
  if (list.empty()) return stats;
  hull.reserve(list.size());
  // hull[0] plays the role of the dummy header's successor: the header
  // (-inf, C(first)) makes every turn through the first member a right turn,
  // so the scan never pops below one element.
  hull.push_back(0);
  for (std::uint32_t i = 1; i < list.size(); ++i) {
    while (hull.size() >= 2 &&
           left_turn(list[hull[hull.size() - 2]], list[hull.back()], list[i])) {
      hull.pop_back();
      ++stats.backward;
    }
    hull.push_back(i);
    ++stats.forward;
  }
  return stats;
}

ScanStats convex_prune(CandidateList& list) {
  ScanStats stats;
  stats.input_size = list.size();
  if (list.empty()) return stats;
  // Same scan as convex_hull, using the front of the list itself as the stack.
  std::size_t top = 0;
  for (std::size_t i = 1; i < list.size(); ++i) {
    const Candidate x = list[i];
    while (top >= 1 && left_turn(list[top - 1], list[top], x)) {
      --top;
      ++stats.backward;
    }
    list[++top] = x;
    ++stats.forward;
  }
  list.resize(top + 1);
  return stats;
}

}  // namespace bufins
