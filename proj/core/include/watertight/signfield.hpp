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

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "watertight/octree.hpp"

namespace watertight {

enum class CellSign : std::uint8_t {
  kUnclassified,  // internal (subdivided) nodes
  kOccupied,
  kPositive,  // empty, reachable from the root boundary: outside
  kNegative,  // empty, enclosed: inside
};

/// Sign of every leaf of the octree (occupied leaves and empty nodes of any
/// depth), indexed by node id.
class SignField {
 public:
  CellSign sign(NodeId id) const { return signs_[id]; }
  std::size_t size() const { return signs_.size(); }
  std::size_t count(CellSign s) const;

 private:
  friend SignField classify_cells(const Octree& tree, const ConnectionGraph& graph);
  std::vector<CellSign> signs_;
};

/// Flood fill: empty nodes touching the root boundary seed a breadth-first
/// expansion through face-adjacent empty nodes; whatever the fill reaches is
/// Positive, the remaining empty nodes are Negative.
SignField classify_cells(const Octree& tree, const ConnectionGraph& graph);

/// Face-adjacent empty nodes of the empty node `id`, each listed once, in
/// direction order. Neighbors may be coarser or finer than `id`.
std::vector<NodeId> empty_adjacency(const Octree& tree, NodeId id);

/// `d i j k sign` per classified node (sign is O, P or N), sorted.
void dump_signs(std::ostream& out, const Octree& tree, const SignField& signs);

}  // namespace watertight
