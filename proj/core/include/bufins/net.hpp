#pragma once

// Net model: buffer library, routing tree and buffer assignment.
//
// All quantities are SI: ohms, farads, seconds (1 ohm * 1 F = 1 s).

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bufins {

struct BufferType {
  std::string id;
  double r = 0.0;  // driving resistance
  double c = 0.0;  // input capacitance
  double k = 0.0;  // intrinsic delay

  bool operator==(const BufferType&) const = default;
};

/// An immutable buffer library with precomputed orderings.
///
/// order_by_r() lists buffer indices by non-increasing R, ties by ascending C,
/// then by id. order_by_c() lists them by non-decreasing C, ties by their
/// position in order_by_r().
class BufferLibrary {
 public:
  /// Throws ValidationError on an empty library, duplicate ids, negative or
  /// non-finite values. R == 0 (an ideal driver) is accepted here; the file
  /// loader is stricter.
  BufferLibrary(std::string name, std::vector<BufferType> buffers);

  const std::string& name() const { return name_; }
  std::size_t size() const { return buffers_.size(); }
  std::span<const BufferType> buffers() const { return buffers_; }
  const BufferType& operator[](std::size_t i) const { return buffers_[i]; }

  std::span<const std::uint32_t> order_by_r() const { return order_by_r_; }
  std::span<const std::uint32_t> order_by_c() const { return order_by_c_; }

  std::optional<std::uint32_t> find(std::string_view id) const;

  bool operator==(const BufferLibrary& other) const {
    return name_ == other.name_ && buffers_ == other.buffers_;
  }

 private:
  std::string name_;
  std::vector<BufferType> buffers_;
  std::vector<std::uint32_t> order_by_r_;
  std::vector<std::uint32_t> order_by_c_;
};

struct SinkSpec {
  double c = 0.0;
  double rat = 0.0;

  bool operator==(const SinkSpec&) const = default;
};

struct InternalSpec {
  // Library ids allowed at this vertex; empty means "not a buffer position".
  std::vector<std::string> buffers;

  bool operator==(const InternalSpec&) const = default;
};

struct EdgeSpec {
  std::string from;
  std::string to;
  double r = 0.0;
  double c = 0.0;

  bool operator==(const EdgeSpec&) const = default;
};

struct DriverSpec {
  double r = 0.0;
  double k = 0.0;

  bool operator==(const DriverSpec&) const = default;
};

/// The raw, unvalidated content of a net file.
struct NetSpec {
  std::string source;
  std::optional<DriverSpec> driver;
  std::map<std::string, SinkSpec> sinks;
  std::map<std::string, InternalSpec> internal;
  std::vector<EdgeSpec> edges;
  std::string library_ref;

  bool operator==(const NetSpec&) const = default;
};

enum class VertexKind : std::uint8_t { kSource, kSink, kInternal };

inline constexpr std::uint32_t kNoEdge = UINT32_MAX;

/// A validated routing tree rooted at the source.
///
/// Vertex 0 is the source; the remaining vertices are numbered in ascending
/// id order. Children of a vertex are listed in ascending child-id order.
class RoutingTree {
 public:
  struct Vertex {
    std::string id;
    VertexKind kind = VertexKind::kInternal;
    double sink_c = 0.0;
    double rat = 0.0;
    std::uint32_t parent_edge = kNoEdge;
    std::vector<std::uint32_t> child_edges;
  };

  /// Throws ValidationError naming the offending vertex or edge.
  explicit RoutingTree(NetSpec spec);

  const NetSpec& spec() const { return spec_; }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return spec_.edges.size(); }
  std::size_t sink_count() const { return spec_.sinks.size(); }
  /// Internal vertices with a non-empty allowed set.
  std::size_t position_count() const { return positions_; }

  const Vertex& vertex(std::size_t v) const { return vertices_[v]; }
  std::optional<std::uint32_t> find(std::string_view id) const;

  const EdgeSpec& edge(std::size_t e) const { return spec_.edges[e]; }
  std::uint32_t edge_head(std::size_t e) const { return edge_to_[e]; }
  std::uint32_t edge_tail(std::size_t e) const { return edge_from_[e]; }

  /// Allowed buffer ids at v (empty for the source, sinks and plain vertices).
  const std::vector<std::string>& allowed(std::size_t v) const;

  /// Children before parents; the source is last.
  std::span<const std::uint32_t> post_order() const { return post_order_; }

  const std::optional<DriverSpec>& driver() const { return spec_.driver; }

  bool operator==(const RoutingTree& other) const { return spec_ == other.spec_; }

 private:
  NetSpec spec_;
  std::vector<Vertex> vertices_;
  std::map<std::string, std::uint32_t, std::less<>> index_;
  std::vector<std::uint32_t> edge_from_;
  std::vector<std::uint32_t> edge_to_;
  std::vector<std::uint32_t> post_order_;
  std::size_t positions_ = 0;
};

/// Throws ValidationError if an allowed set names a buffer missing from lib.
void check_library_refs(const RoutingTree& tree, const BufferLibrary& lib);

/// Placement of buffers at internal vertices: vertex id -> buffer id.
struct Assignment {
  std::map<std::string, std::string> placements;

  bool operator==(const Assignment&) const = default;
};

/// Throws ValidationError unless every placement is at a buffer position and
/// uses a type from that position's allowed set.
void check_assignment(const RoutingTree& tree, const BufferLibrary& lib,
                      const Assignment& assignment);

}  // namespace bufins
