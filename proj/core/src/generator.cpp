#include "bufins/generator.hpp"

#include <cmath>
#include <queue>
#include <random>
#include <string>

#include <fmt/format.h>

#include "bufins/error.hpp"

namespace bufins {

namespace {

// Bit-exact across standard libraries, unlike std::uniform_real_distribution.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>(uniform01(rng) * static_cast<double>(n)) % n;
}

std::string make_id(char prefix, std::uint64_t i, std::uint64_t count) {
  int width = 1;
  for (std::uint64_t x = count; x >= 10; x /= 10) ++width;
  return fmt::format("{}{:0{}}", prefix, i, width);
}

constexpr std::uint64_t kLibrarySalt = 0x9e3779b97f4a7c15ULL;

}  // namespace

BufferLibrary generate_library(std::uint32_t buffers, std::uint64_t seed,
                               const Technology& tech) {
  if (buffers == 0) throw ValidationError("library size must be at least 1");
  std::mt19937_64 rng(seed ^ kLibrarySalt);
  std::vector<BufferType> types;
  types.reserve(buffers);
  for (std::uint32_t i = 0; i < buffers; ++i) {
    const double size = uniform01(rng);
    BufferType t;
    t.id = make_id('b', i, buffers);
    t.r = tech.buffer_r_max * std::pow(tech.buffer_r_min / tech.buffer_r_max, size);
    t.c = tech.buffer_c_min * std::pow(tech.buffer_c_max / tech.buffer_c_min, size);
    t.k = uniform(rng, tech.buffer_k_min, tech.buffer_k_max);
    types.push_back(std::move(t));
  }
  return BufferLibrary("gen-b" + std::to_string(buffers) + "-s" + std::to_string(seed),
                       std::move(types));
}

GeneratedNet generate_net(std::uint32_t sinks, std::uint32_t positions,
                          std::uint32_t buffers, std::uint64_t seed,
                          const Technology& tech) {
  if (sinks == 0) throw ValidationError("a net needs at least one sink");
  BufferLibrary lib = generate_library(buffers, seed, tech);
  std::vector<std::string> all_ids;
  for (const auto& b : lib.buffers()) all_ids.push_back(b.id);

  std::mt19937_64 rng(seed);
  NetSpec spec;
  spec.source = "src";
  spec.library_ref = lib.name();

  struct RawEdge {
    std::string from;
    std::string to;
    double length;
  };
  std::vector<RawEdge> raw;

  std::vector<std::string> roots;
  for (std::uint32_t i = 0; i < sinks; ++i) {
    const auto id = make_id('s', i, sinks);
    spec.sinks[id] = {uniform(rng, tech.sink_c_min, tech.sink_c_max),
                      uniform(rng, tech.rat_min, tech.rat_max)};
    roots.push_back(id);
  }
  for (std::uint32_t t = 0; roots.size() > 1; ++t) {
    const auto i = below(rng, roots.size());
    auto j = below(rng, roots.size() - 1);
    if (j >= i) ++j;
    const auto id = make_id('t', t, sinks);
    spec.internal[id] = {};
    raw.push_back({id, roots[i], uniform(rng, tech.edge_len_min, tech.edge_len_max)});
    raw.push_back({id, roots[j], uniform(rng, tech.edge_len_min, tech.edge_len_max)});
    roots[std::min(i, j)] = id;
    roots.erase(roots.begin() + static_cast<std::ptrdiff_t>(std::max(i, j)));
  }
  raw.push_back({spec.source, roots.front(),
                 uniform(rng, tech.edge_len_min, tech.edge_len_max)});

  // Give each position to the edge with the longest current segment.
  std::vector<std::uint32_t> cuts(raw.size(), 0);
  {
    using Entry = std::pair<double, std::uint32_t>;
    auto cmp = [](const Entry& a, const Entry& b) {
      return a.first != b.first ? a.first < b.first : a.second > b.second;
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);
    for (std::uint32_t e = 0; e < raw.size(); ++e) heap.emplace(raw[e].length, e);
    for (std::uint32_t p = 0; p < positions; ++p) {
      const auto [_, e] = heap.top();
      heap.pop();
      ++cuts[e];
      heap.emplace(raw[e].length / (cuts[e] + 1), e);
    }
  }

  std::uint32_t next_position = 0;
  for (std::uint32_t e = 0; e < raw.size(); ++e) {
    const double seg = raw[e].length / (cuts[e] + 1);
    const double r = tech.wire_r_per_um * seg;
    const double c = tech.wire_c_per_um * seg;
    std::string tail = raw[e].from;
    for (std::uint32_t k = 0; k < cuts[e]; ++k) {
      const auto id = make_id('p', next_position++, positions);
      spec.internal[id] = {all_ids};
      spec.edges.push_back({tail, id, r, c});
      tail = id;
    }
    spec.edges.push_back({tail, raw[e].to, r, c});
  }

  return {RoutingTree(std::move(spec)), std::move(lib)};
}

}  // namespace bufins
