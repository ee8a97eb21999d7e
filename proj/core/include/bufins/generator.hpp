#pragma once

#include <cstdint>

#include "bufins/net.hpp"

namespace bufins {

/// 180 nm-class technology numbers used by the synthetic net generator.
struct Technology {
  double wire_r_per_um = 0.076;      // ohm / um
  double wire_c_per_um = 0.118e-15;  // F / um
  double buffer_r_min = 180.0;
  double buffer_r_max = 7000.0;
  double buffer_c_min = 0.7e-15;
  double buffer_c_max = 23e-15;
  double buffer_k_min = 29e-12;
  double buffer_k_max = 36.4e-12;
  double sink_c_min = 2e-15;
  double sink_c_max = 41e-15;
  double rat_min = 0.5e-9;
  double rat_max = 2e-9;
  double edge_len_min = 10.0;  // um
  double edge_len_max = 2000.0;
};

struct GeneratedNet {
  RoutingTree tree;
  BufferLibrary library;
};

/// Synthetic buffer library of `buffers` types. A single size parameter,
/// uniform in [0, 1], places R and C log-uniformly in their ranges with
/// larger buffers having lower R and higher C; K is uniform.
BufferLibrary generate_library(std::uint32_t buffers, std::uint64_t seed,
                               const Technology& tech = {});

/// Random net with `sinks` sinks and `positions` buffer positions, every
/// position allowing every buffer of generate_library(buffers, seed).
///
/// The topology is a random binary tree built by repeatedly joining two
/// random subtrees under a new Steiner vertex; edge lengths are uniform in
/// [edge_len_min, edge_len_max]. Positions go, one at a time, to the edge
/// whose current segments are longest, and each edge is then split into
/// equal segments. The tree does not depend on `buffers`, only on `seed`.
GeneratedNet generate_net(std::uint32_t sinks, std::uint32_t positions,
                          std::uint32_t buffers, std::uint64_t seed,
                          const Technology& tech = {});

}  // namespace bufins
