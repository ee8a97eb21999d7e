#include "bufins/net.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "bufins/error.hpp"

namespace bufins {

namespace {

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

}  // namespace

BufferLibrary::BufferLibrary(std::string name, std::vector<BufferType> buffers)
    : name_(std::move(name)), buffers_(std::move(buffers)) {
  if (buffers_.empty()) {
    throw ValidationError("library '" + name_ + "' has no buffers");
  }
  std::set<std::string_view> seen;
  for (const auto& b : buffers_) {
    if (!seen.insert(b.id).second) {
      throw ValidationError("duplicate buffer id '" + b.id + "'");
    }
    if (!finite_nonneg(b.r) || !finite_nonneg(b.c) || !finite_nonneg(b.k)) {
      throw ValidationError("buffer '" + b.id +
                            "' needs finite R >= 0, C >= 0, K >= 0");
    }
  }

  order_by_r_.resize(buffers_.size());
  std::iota(order_by_r_.begin(), order_by_r_.end(), 0u);
  std::sort(order_by_r_.begin(), order_by_r_.end(), [&](auto a, auto b) {
    const auto& x = buffers_[a];
    const auto& y = buffers_[b];
    if (x.r != y.r) return x.r > y.r;
    if (x.c != y.c) return x.c < y.c;
    return x.id < y.id;
  });

  std::vector<std::uint32_t> rank(buffers_.size());
  for (std::uint32_t i = 0; i < order_by_r_.size(); ++i) rank[order_by_r_[i]] = i;
  order_by_c_.resize(buffers_.size());
  std::iota(order_by_c_.begin(), order_by_c_.end(), 0u);
  std::sort(order_by_c_.begin(), order_by_c_.end(), [&](auto a, auto b) {
    if (buffers_[a].c != buffers_[b].c) return buffers_[a].c < buffers_[b].c;
    return rank[a] < rank[b];
  });
}

std::optional<std::uint32_t> BufferLibrary::find(std::string_view id) const {
  for (std::uint32_t i = 0; i < buffers_.size(); ++i) {
    if (buffers_[i].id == id) return i;
  }
  return std::nullopt;
}

RoutingTree::RoutingTree(NetSpec spec) : spec_(std::move(spec)) {
  const auto& s = spec_;
  if (s.source.empty()) throw ValidationError("net has no source vertex");
  if (s.sinks.empty()) throw ValidationError("net has no sinks");

  Vertex root;
  root.id = s.source;
  root.kind = VertexKind::kSource;
  vertices_.push_back(std::move(root));
  index_.emplace(s.source, 0u);

  // Collect the remaining ids in ascending order so numbering is canonical.
  std::map<std::string_view, VertexKind> others;
  for (const auto& [id, _] : s.sinks) others.emplace(id, VertexKind::kSink);
  for (const auto& [id, _] : s.internal) {
    if (!others.emplace(id, VertexKind::kInternal).second) {
      throw ValidationError("vertex '" + id + "' is both a sink and internal");
    }
  }
  for (const auto& [id, kind] : others) {
    if (id == s.source) {
      throw ValidationError("vertex '" + std::string(id) +
                            "' is declared as the source and as a sink or internal");
    }
    Vertex v;
    v.id = std::string(id);
    v.kind = kind;
    if (kind == VertexKind::kSink) {
      const auto& sink = s.sinks.find(v.id)->second;
      if (!finite_nonneg(sink.c)) {
        throw ValidationError("sink '" + v.id + "' has invalid capacitance");
      }
      if (!std::isfinite(sink.rat)) {
        throw ValidationError("sink '" + v.id + "' has non-finite RAT");
      }
      v.sink_c = sink.c;
      v.rat = sink.rat;
    } else {
      const auto& allowed = s.internal.find(v.id)->second.buffers;
      std::set<std::string_view> uniq(allowed.begin(), allowed.end());
      if (uniq.size() != allowed.size()) {
        throw ValidationError("vertex '" + v.id + "' lists a buffer id twice");
      }
      if (!allowed.empty()) ++positions_;
    }
    index_.emplace(v.id, static_cast<std::uint32_t>(vertices_.size()));
    vertices_.push_back(std::move(v));
  }

  edge_from_.reserve(s.edges.size());
  edge_to_.reserve(s.edges.size());
  for (std::uint32_t e = 0; e < s.edges.size(); ++e) {
    const auto& edge = s.edges[e];
    const auto from = find(edge.from);
    const auto to = find(edge.to);
    if (!from) throw ValidationError("edge references unknown vertex '" + edge.from + "'");
    if (!to) throw ValidationError("edge references unknown vertex '" + edge.to + "'");
    const std::string name = "edge " + edge.from + "->" + edge.to;
    if (*from == *to) throw ValidationError(name + " is a self loop");
    if (!finite_nonneg(edge.r) || !finite_nonneg(edge.c)) {
      throw ValidationError(name + " needs finite R >= 0 and C >= 0");
    }
    auto& head = vertices_[*to];
    if (head.kind == VertexKind::kSource) {
      throw ValidationError(name + " enters the source '" + head.id + "'");
    }
    if (head.parent_edge != kNoEdge) {
      throw ValidationError("vertex '" + head.id + "' has more than one parent");
    }
    if (vertices_[*from].kind == VertexKind::kSink) {
      throw ValidationError("sink '" + edge.from + "' has an outgoing edge");
    }
    head.parent_edge = e;
    vertices_[*from].child_edges.push_back(e);
    edge_from_.push_back(*from);
    edge_to_.push_back(*to);
  }

  for (auto& v : vertices_) {
    // Vertex numbering follows id order, so sorting by head index sorts by id.
    std::sort(v.child_edges.begin(), v.child_edges.end(),
              [&](auto a, auto b) { return edge_to_[a] < edge_to_[b]; });
    if (v.kind != VertexKind::kSink && v.child_edges.empty()) {
      throw ValidationError("vertex '" + v.id + "' is a leaf but not a sink");
    }
  }

  // Iterative DFS from the source; anything unreached is disconnected or
  // sits on a cycle.
  post_order_.reserve(vertices_.size());
  std::vector<std::pair<std::uint32_t, std::size_t>> stack{{0u, 0u}};
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    const auto& kids = vertices_[v].child_edges;
    if (next < kids.size()) {
      const auto child = edge_to_[kids[next++]];
      stack.emplace_back(child, 0u);
    } else {
      post_order_.push_back(v);
      stack.pop_back();
    }
  }
  if (post_order_.size() != vertices_.size()) {
    for (const auto& v : vertices_) {
      if (v.kind != VertexKind::kSource && v.parent_edge == kNoEdge) {
        throw ValidationError("vertex '" + v.id + "' has no parent edge");
      }
    }
    throw ValidationError("net contains a cycle unreachable from source '" +
                          s.source + "'");
  }
}

std::optional<std::uint32_t> RoutingTree::find(std::string_view id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::vector<std::string>& RoutingTree::allowed(std::size_t v) const {
  static const std::vector<std::string> kNone;
  const auto& vert = vertices_[v];
  if (vert.kind != VertexKind::kInternal) return kNone;
  return spec_.internal.find(vert.id)->second.buffers;
}

void check_library_refs(const RoutingTree& tree, const BufferLibrary& lib) {
  for (const auto& [id, internal] : tree.spec().internal) {
    for (const auto& b : internal.buffers) {
      if (!lib.find(b)) {
        throw ValidationError("vertex '" + id + "' allows buffer '" + b +
                              "' missing from library '" + lib.name() + "'");
      }
    }
  }
}

void check_assignment(const RoutingTree& tree, const BufferLibrary& lib,
                      const Assignment& assignment) {
  for (const auto& [vertex, buffer] : assignment.placements) {
    const auto v = tree.find(vertex);
    if (!v) throw ValidationError("assignment names unknown vertex '" + vertex + "'");
    const auto& allowed = tree.allowed(*v);
    if (std::find(allowed.begin(), allowed.end(), buffer) == allowed.end()) {
      throw ValidationError("buffer '" + buffer + "' is not allowed at vertex '" +
                            vertex + "'");
    }
    if (!lib.find(buffer)) {
      throw ValidationError("assignment uses buffer '" + buffer +
                            "' missing from library '" + lib.name() + "'");
    }
  }
}

}  // namespace bufins
