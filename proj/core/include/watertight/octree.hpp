// Copyright 2026 The Watertight Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "watertight/geometry.hpp"
#include "watertight/mesh.hpp"

namespace watertight {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = 0xffffffffu;

/// Integer lattice coordinate (x, y, z) of a cell at some depth.
using CellCoord = std::array<std::int32_t, 3>;

enum class NodeStatus : std::uint8_t { kEmpty, kOccupied };

/// One of the six face directions. Values are 2 * axis + (positive ? 1 : 0).
enum class Direction : std::uint8_t { kNegX, kPosX, kNegY, kPosY, kNegZ, kPosZ };

inline constexpr std::array<Direction, 6> kAllDirections{
    Direction::kNegX, Direction::kPosX, Direction::kNegY,
    Direction::kPosY, Direction::kNegZ, Direction::kPosZ};

constexpr int axis_of(Direction d) { return static_cast<int>(d) / 2; }
constexpr bool is_positive(Direction d) { return (static_cast<int>(d) & 1) != 0; }
constexpr int index_of(Direction d) { return static_cast<int>(d); }
constexpr Direction make_direction(int axis, bool positive) {
  return static_cast<Direction>(2 * axis + (positive ? 1 : 0));
}
constexpr Direction opposite(Direction d) { return make_direction(axis_of(d), !is_positive(d)); }
std::string_view direction_name(Direction d);

inline CellCoord step(CellCoord c, Direction d) {
  c[axis_of(d)] += is_positive(d) ? 1 : -1;
  return c;
}

struct OctreeConfig {
  double root_half_extent = 1.1;
  double target_leaf_size = 0.01;
  /// When unset, the depth is the smallest one whose leaves are no larger
  /// than target_leaf_size: ceil(log2(2 * root_half_extent / target_leaf_size)).
  std::optional<int> max_depth;

  int resolved_depth() const;
  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

/// Children are ordered by octant bits: bit 0 = +x half, bit 1 = +y, bit 2 = +z.
struct OctreeNode {
  CellCoord coord{};
  std::uint8_t depth = 0;
  NodeStatus status = NodeStatus::kEmpty;
  NodeId first_child = kNoNode;
  std::uint32_t tri_begin = 0;
  std::uint32_t tri_end = 0;

  bool occupied() const { return status == NodeStatus::kOccupied; }
  bool has_children() const { return first_child != kNoNode; }
};

/// Adaptive octree over a normalized mesh. Occupied nodes (non-empty triangle
/// set) are subdivided down to max_depth; empty nodes are never subdivided.
/// Every node keeps its triangle index list.
class Octree {
 public:
  const TriangleMesh& mesh() const { return mesh_; }
  int max_depth() const { return max_depth_; }
  double root_half_extent() const { return half_extent_; }
  double leaf_size() const { return leaf_size_; }
  /// Number of leaf cells along one axis at max depth.
  std::int32_t resolution() const { return std::int32_t{1} << max_depth_; }

  std::size_t node_count() const { return nodes_.size(); }
  const OctreeNode& node(NodeId id) const { return nodes_[id]; }
  NodeId root() const { return 0; }
  NodeId child(NodeId id, int octant) const { return nodes_[id].first_child + octant; }
  std::span<const std::uint32_t> triangles(NodeId id) const;

  /// World coordinate of a lattice plane at max-depth resolution.
  double lattice_to_world(std::int64_t index) const;
  AABB cell_box(int depth, const CellCoord& coord) const;
  AABB bbox(NodeId id) const { return cell_box(nodes_[id].depth, nodes_[id].coord); }

  /// Occupied leaves in ascending node id order.
  const std::vector<NodeId>& occupied_leaves() const { return occupied_leaves_; }
  /// Position of `id` within occupied_leaves(), or -1.
  std::int32_t leaf_ordinal(NodeId id) const { return leaf_ordinal_[id]; }
  /// Occupied leaf at the given max-depth cell, or kNoNode.
  NodeId find_occupied_leaf(const CellCoord& fine) const;

  /// Deepest node covering cell `coord` at `depth`, never deeper than `depth`.
  /// Coordinates must lie inside the root.
  NodeId locate(int depth, const CellCoord& coord) const;

  /// Max-depth cell containing `p`, clamped into the root.
  CellCoord fine_cell_of(const Vec3& p) const;

  bool in_bounds(int depth, const CellCoord& coord) const;

 private:
  friend Octree build_octree(const TriangleMesh& mesh, const OctreeConfig& cfg);

  TriangleMesh mesh_;
  int max_depth_ = 0;
  double half_extent_ = 0.0;
  double leaf_size_ = 0.0;
  std::vector<OctreeNode> nodes_;
  std::vector<std::uint32_t> tri_pool_;
  std::vector<NodeId> occupied_leaves_;
  std::vector<std::int32_t> leaf_ordinal_;
  std::unordered_map<std::uint64_t, NodeId> leaf_lookup_;
};

/// Builds the octree. The mesh must lie inside the root box (normalized
/// meshes do). Throws EmptyMeshError for a mesh without triangles.
Octree build_octree(const TriangleMesh& mesh, const OctreeConfig& cfg);

std::uint64_t pack_coord(const CellCoord& c);

/// A face adjacency stored outgoing from an occupied leaf. `to` may be an
/// empty node of any depth or another occupied leaf.
struct Connection {
  NodeId from = kNoNode;
  NodeId to = kNoNode;
  Direction direction = Direction::kPosX;

  auto operator<=>(const Connection&) const = default;
};

class ConnectionGraph {
 public:
  /// All connections in emission order. Occupied-occupied pairs appear once,
  /// from the lower node id.
  const std::vector<Connection>& edges() const { return edges_; }

  /// Node across face `d` of the occupied leaf with the given ordinal (see
  /// Octree::leaf_ordinal). kNoNode when the face lies on the root boundary.
  NodeId neighbor(std::int32_t leaf_ordinal, Direction d) const {
    return slots_[static_cast<std::size_t>(leaf_ordinal)][index_of(d)];
  }

 private:
  friend ConnectionGraph build_connections(const Octree& tree);

  std::vector<Connection> edges_;
  std::vector<std::array<NodeId, 6>> slots_;
};

ConnectionGraph build_connections(const Octree& tree);

/// Connects two face-adjacent nodes, `left` on the negative side of `axis`
/// and `right` on the positive side, appending the resulting leaf-level
/// connections to `out`.
void connect_nodes(const Octree& tree, NodeId left, NodeId right, int axis,
                   std::vector<Connection>& out);

/// Plain-text dump: one `d i j k` line per occupied leaf, then one
/// `i j k dir node_id` line per connection (from the occupied side), sorted.
void dump_octree(std::ostream& out, const Octree& tree, const ConnectionGraph& graph);

}  // namespace watertight
