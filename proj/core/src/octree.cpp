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

#include "watertight/octree.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "watertight/errors.hpp"

namespace watertight {

namespace {

constexpr int kMaxSupportedDepth = 20;

class OctreeBuilder {
 public:
  OctreeBuilder(Octree& tree, std::vector<OctreeNode>& nodes, std::vector<std::uint32_t>& pool,
                const std::vector<Triangle>& tris)
      : tree_(tree), nodes_(nodes), pool_(pool), tris_(tris) {}

  void subdivide(NodeId id) {
    const OctreeNode parent = nodes_[id];
    if (!parent.occupied() || parent.depth == tree_.max_depth()) return;

    // The pool grows while children are filled, so work from a copy.
    const std::vector<std::uint32_t> candidates(pool_.begin() + parent.tri_begin,
                                                pool_.begin() + parent.tri_end);
    const NodeId first = static_cast<NodeId>(nodes_.size());
    nodes_[id].first_child = first;
    for (int octant = 0; octant < 8; ++octant) {
      OctreeNode child;
      child.depth = static_cast<std::uint8_t>(parent.depth + 1);
      for (int axis = 0; axis < 3; ++axis) {
        child.coord[axis] = 2 * parent.coord[axis] + ((octant >> axis) & 1);
      }
      const AABB box = tree_.cell_box(child.depth, child.coord);
      child.tri_begin = static_cast<std::uint32_t>(pool_.size());
      for (std::uint32_t t : candidates) {
        if (triangle_box_intersects(tris_[t], box)) pool_.push_back(t);
      }
      child.tri_end = static_cast<std::uint32_t>(pool_.size());
      child.status = child.tri_end > child.tri_begin ? NodeStatus::kOccupied : NodeStatus::kEmpty;
      nodes_.push_back(child);
    }
    for (int octant = 0; octant < 8; ++octant) subdivide(first + octant);
  }

 private:
  Octree& tree_;
  std::vector<OctreeNode>& nodes_;
  std::vector<std::uint32_t>& pool_;
  const std::vector<Triangle>& tris_;
};

void connect_within(const Octree& tree, NodeId id, std::vector<Connection>& out) {
  const OctreeNode& n = tree.node(id);
  if (!n.occupied() || !n.has_children()) return;
  for (int octant = 0; octant < 8; ++octant) connect_within(tree, tree.child(id, octant), out);
  // The 12 face-adjacent sibling pairs: children differing only in one axis bit.
  for (int axis = 0; axis < 3; ++axis) {
    for (int octant = 0; octant < 8; ++octant) {
      if ((octant >> axis) & 1) continue;
      connect_nodes(tree, tree.child(id, octant), tree.child(id, octant | (1 << axis)), axis, out);
    }
  }
}

}  // namespace

std::string_view direction_name(Direction d) {
  static constexpr std::array<std::string_view, 6> kNames{"-x", "+x", "-y", "+y", "-z", "+z"};
  return kNames[index_of(d)];
}

int OctreeConfig::resolved_depth() const {
  if (max_depth) return *max_depth;
  const double cells = 2.0 * root_half_extent / target_leaf_size;
  return std::max(0, static_cast<int>(std::ceil(std::log2(cells) - 1e-12)));
}

void OctreeConfig::validate() const {
  if (!(root_half_extent > 1.0)) {
    throw std::invalid_argument("root_half_extent must exceed 1 to cover a normalized mesh");
  }
  if (!(target_leaf_size > 0.0)) throw std::invalid_argument("target_leaf_size must be positive");
  const int depth = resolved_depth();
  if (depth < 1 || depth > kMaxSupportedDepth) {
    throw std::invalid_argument("octree depth must be in [1, " +
                                std::to_string(kMaxSupportedDepth) + "]");
  }
}

std::uint64_t pack_coord(const CellCoord& c) {
  // 21 bits per axis; lattice coordinates may be -1 or 2^depth at the border.
  auto part = [](std::int32_t v) { return static_cast<std::uint64_t>(v + 1) & 0x1fffffu; };
  return part(c[0]) | (part(c[1]) << 21) | (part(c[2]) << 42);
}

std::span<const std::uint32_t> Octree::triangles(NodeId id) const {
  const auto& n = nodes_[id];
  return {tri_pool_.data() + n.tri_begin, tri_pool_.data() + n.tri_end};
}

double Octree::lattice_to_world(std::int64_t index) const {
  return -half_extent_ + static_cast<double>(index) * leaf_size_;
}

AABB Octree::cell_box(int depth, const CellCoord& coord) const {
  const std::int64_t span = std::int64_t{1} << (max_depth_ - depth);
  AABB box;
  for (int axis = 0; axis < 3; ++axis) {
    box.min[axis] = lattice_to_world(coord[axis] * span);
    box.max[axis] = lattice_to_world((coord[axis] + 1) * span);
  }
  return box;
}

bool Octree::in_bounds(int depth, const CellCoord& coord) const {
  const std::int32_t n = std::int32_t{1} << depth;
  return std::all_of(coord.begin(), coord.end(), [n](std::int32_t v) { return v >= 0 && v < n; });
}

NodeId Octree::find_occupied_leaf(const CellCoord& fine) const {
  const auto it = leaf_lookup_.find(pack_coord(fine));
  return it == leaf_lookup_.end() ? kNoNode : it->second;
}

NodeId Octree::locate(int depth, const CellCoord& coord) const {
  NodeId id = root();
  while (true) {
    const OctreeNode& n = nodes_[id];
    if (n.depth >= depth || !n.has_children()) return id;
    const int shift = depth - n.depth - 1;
    int octant = 0;
    for (int axis = 0; axis < 3; ++axis) octant |= ((coord[axis] >> shift) & 1) << axis;
    id = n.first_child + static_cast<NodeId>(octant);
  }
}

CellCoord Octree::fine_cell_of(const Vec3& p) const {
  CellCoord c{};
  const std::int32_t last = resolution() - 1;
  for (int axis = 0; axis < 3; ++axis) {
    const double f = std::floor((p[axis] + half_extent_) / leaf_size_);
    c[axis] = static_cast<std::int32_t>(std::clamp(f, 0.0, static_cast<double>(last)));
  }
  return c;
}

Octree build_octree(const TriangleMesh& mesh, const OctreeConfig& cfg) {
  cfg.validate();
  if (mesh.triangles.empty()) throw EmptyMeshError();

  Octree tree;
  tree.mesh_ = mesh;
  tree.max_depth_ = cfg.resolved_depth();
  tree.half_extent_ = cfg.root_half_extent;
  tree.leaf_size_ = std::ldexp(2.0 * cfg.root_half_extent, -tree.max_depth_);

  std::vector<Triangle> tris(mesh.triangles.size());
  for (std::size_t t = 0; t < tris.size(); ++t) tris[t] = mesh.triangle(t);

  OctreeNode root;
  const AABB root_box = tree.cell_box(0, root.coord);
  for (std::uint32_t t = 0; t < tris.size(); ++t) {
    if (triangle_box_intersects(tris[t], root_box)) tree.tri_pool_.push_back(t);
  }
  root.tri_end = static_cast<std::uint32_t>(tree.tri_pool_.size());
  root.status = root.tri_end > 0 ? NodeStatus::kOccupied : NodeStatus::kEmpty;
  if (!root.occupied()) throw EmptyMeshError();
  tree.nodes_.push_back(root);

  OctreeBuilder(tree, tree.nodes_, tree.tri_pool_, tris).subdivide(tree.root());

  tree.leaf_ordinal_.assign(tree.nodes_.size(), -1);
  for (NodeId id = 0; id < tree.nodes_.size(); ++id) {
    const OctreeNode& n = tree.nodes_[id];
    if (n.occupied() && !n.has_children()) {
      tree.leaf_ordinal_[id] = static_cast<std::int32_t>(tree.occupied_leaves_.size());
      tree.occupied_leaves_.push_back(id);
      tree.leaf_lookup_.emplace(pack_coord(n.coord), id);
    }
  }
  return tree;
}

void connect_nodes(const Octree& tree, NodeId left, NodeId right, int axis,
                   std::vector<Connection>& out) {
  const OctreeNode& l = tree.node(left);
  const OctreeNode& r = tree.node(right);
  if (!l.occupied() && !r.occupied()) return;

  // Occupied nodes paired here always share a depth, so either both or
  // neither are subdivided; empty nodes are never subdivided.
  const bool split_l = l.occupied() && l.has_children();
  const bool split_r = r.occupied() && r.has_children();
  if (!split_l && !split_r) {
    if (l.occupied() && r.occupied()) {
      const bool forward = left < right;
      out.push_back({std::min(left, right), std::max(left, right), make_direction(axis, forward)});
    } else if (l.occupied()) {
      out.push_back({left, right, make_direction(axis, true)});
    } else {
      out.push_back({right, left, make_direction(axis, false)});
    }
    return;
  }

  const int u = (axis + 1) % 3;
  const int v = (axis + 2) % 3;
  for (int k = 0; k < 4; ++k) {
    const int face_octant = ((k & 1) << u) | (((k >> 1) & 1) << v);
    const NodeId sub_l = split_l ? tree.child(left, face_octant | (1 << axis)) : left;
    const NodeId sub_r = split_r ? tree.child(right, face_octant) : right;
    connect_nodes(tree, sub_l, sub_r, axis, out);
  }
}

ConnectionGraph build_connections(const Octree& tree) {
  ConnectionGraph graph;
  connect_within(tree, tree.root(), graph.edges_);

  std::array<NodeId, 6> none;
  none.fill(kNoNode);
  graph.slots_.assign(tree.occupied_leaves().size(), none);
  for (const Connection& c : graph.edges_) {
    graph.slots_[static_cast<std::size_t>(tree.leaf_ordinal(c.from))][index_of(c.direction)] = c.to;
    const std::int32_t back = tree.leaf_ordinal(c.to);
    if (back >= 0) {
      graph.slots_[static_cast<std::size_t>(back)][index_of(opposite(c.direction))] = c.from;
    }
  }
  return graph;
}

void dump_octree(std::ostream& out, const Octree& tree, const ConnectionGraph& graph) {
  std::vector<CellCoord> leaves;
  leaves.reserve(tree.occupied_leaves().size());
  for (NodeId id : tree.occupied_leaves()) leaves.push_back(tree.node(id).coord);
  std::sort(leaves.begin(), leaves.end());
  for (const auto& c : leaves) {
    out << tree.max_depth() << ' ' << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  }

  std::vector<std::tuple<CellCoord, int, NodeId>> rows;
  rows.reserve(graph.edges().size());
  for (const Connection& c : graph.edges()) {
    rows.emplace_back(tree.node(c.from).coord, index_of(c.direction), c.to);
  }
  std::sort(rows.begin(), rows.end());
  for (const auto& [c, dir, to] : rows) {
    out << c[0] << ' ' << c[1] << ' ' << c[2] << ' ' << direction_name(static_cast<Direction>(dir))
        << ' ' << to << '\n';
  }
}

}  // namespace watertight
