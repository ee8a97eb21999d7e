#pragma once

// Reference evaluation of a fixed buffer assignment and exhaustive search.
// Deliberately shares no delay arithmetic with the DP kernels.

#include <cstdint>
#include <map>
#include <string>

#include "bufins/net.hpp"

namespace bufins {

struct SinkTiming {
  double delay = 0.0;  // source to sink, including the driver if present
  double slack = 0.0;  // RAT - delay
};

struct EvalReport {
  double slack = 0.0;  // minimum per-sink slack
  std::map<std::string, SinkTiming> per_sink;
  // Load below each vertex: the capacitance a buffer placed there drives.
  std::map<std::string, double> downstream_cap;
};

/// Elmore delay of the buffered tree. A bottom-up pass computes loads, a
/// top-down pass accumulates wire delay R_e * (C_e / 2 + C_down) and buffer
/// delay R_b * C_down + K_b along each source-to-sink path.
/// Throws ValidationError for an illegal placement.
EvalReport evaluate(const RoutingTree& tree, const BufferLibrary& lib,
                    const Assignment& assignment);

inline constexpr std::uint64_t kDefaultBruteForceCap = std::uint64_t{1} << 22;

struct BruteForceResult {
  double slack = 0.0;
  Assignment argmax;
  std::uint64_t evaluated = 0;
};

/// Number of legal assignments: the product of (|allowed| + 1) over buffer
/// positions, saturating at UINT64_MAX.
std::uint64_t assignment_count(const RoutingTree& tree);

/// Evaluates every legal assignment and returns the best slack. Ties keep
/// the lexicographically smallest assignment, comparing positions in vertex
/// order with "no buffer" first and buffers in allowed-list order.
/// Throws CapExceeded when assignment_count(tree) > cap.
BruteForceResult brute_force(const RoutingTree& tree, const BufferLibrary& lib,
                             std::uint64_t cap = kDefaultBruteForceCap);

}  // namespace bufins
