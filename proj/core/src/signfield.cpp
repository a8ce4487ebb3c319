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

#include "watertight/signfield.hpp"

#include <algorithm>
#include <deque>
#include <ostream>
#include <tuple>

namespace watertight {

namespace {

// Empty descendants of `id` whose faces lie on its `side` face.
void collect_facing_empty(const Octree& tree, NodeId id, Direction side,
                          std::vector<NodeId>& out) {
  const OctreeNode& n = tree.node(id);
  if (!n.occupied()) {
    out.push_back(id);
    return;
  }
  if (!n.has_children()) return;
  const int axis = axis_of(side);
  const int want = is_positive(side) ? 1 : 0;
  for (int octant = 0; octant < 8; ++octant) {
    if (((octant >> axis) & 1) == want) collect_facing_empty(tree, tree.child(id, octant), side, out);
  }
}

bool touches_root_boundary(const OctreeNode& n) {
  const std::int32_t last = (std::int32_t{1} << n.depth) - 1;
  return std::any_of(n.coord.begin(), n.coord.end(),
                     [last](std::int32_t v) { return v == 0 || v == last; });
}

}  // namespace

std::size_t SignField::count(CellSign s) const {
  return static_cast<std::size_t>(std::count(signs_.begin(), signs_.end(), s));
}

std::vector<NodeId> empty_adjacency(const Octree& tree, NodeId id) {
  const OctreeNode& n = tree.node(id);
  std::vector<NodeId> out;
  for (Direction d : kAllDirections) {
    const CellCoord across = step(n.coord, d);
    if (!tree.in_bounds(n.depth, across)) continue;
    const NodeId hit = tree.locate(n.depth, across);
    if (tree.node(hit).depth < n.depth) {
      // A coarser leaf covers the whole face; only empty leaves stop early.
      if (!tree.node(hit).occupied()) out.push_back(hit);
    } else {
      collect_facing_empty(tree, hit, opposite(d), out);
    }
  }
  // No duplicates: a coarse leaf adjacent across two faces would have to
  // contain `id` itself.
  return out;
}

SignField classify_cells(const Octree& tree, const ConnectionGraph& /*graph*/) {
  // The connection graph only holds edges leaving occupied leaves; the fill
  // runs over empty-empty adjacency, which comes from lattice lookups.
  SignField field;
  field.signs_.assign(tree.node_count(), CellSign::kUnclassified);

  std::deque<NodeId> queue;
  for (NodeId id = 0; id < tree.node_count(); ++id) {
    const OctreeNode& n = tree.node(id);
    if (n.occupied()) {
      if (!n.has_children()) field.signs_[id] = CellSign::kOccupied;
      continue;
    }
    field.signs_[id] = CellSign::kNegative;
    if (touches_root_boundary(n)) {
      field.signs_[id] = CellSign::kPositive;
      queue.push_back(id);
    }
  }

  while (!queue.empty()) {
    const NodeId id = queue.front();
    queue.pop_front();
    for (NodeId next : empty_adjacency(tree, id)) {
      if (field.signs_[next] == CellSign::kNegative) {
        field.signs_[next] = CellSign::kPositive;
        queue.push_back(next);
      }
    }
  }
  return field;
}

void dump_signs(std::ostream& out, const Octree& tree, const SignField& signs) {
  std::vector<std::tuple<int, CellCoord, char>> rows;
  for (NodeId id = 0; id < tree.node_count(); ++id) {
    const CellSign s = signs.sign(id);
    if (s == CellSign::kUnclassified) continue;
    const char c = s == CellSign::kOccupied ? 'O' : (s == CellSign::kPositive ? 'P' : 'N');
    rows.emplace_back(tree.node(id).depth, tree.node(id).coord, c);
  }
  std::sort(rows.begin(), rows.end());
  for (const auto& [d, c, s] : rows) {
    out << d << ' ' << c[0] << ' ' << c[1] << ' ' << c[2] << ' ' << s << '\n';
  }
}

}  // namespace watertight
