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
#include <cstddef>
#include <vector>

#include "watertight/mesh.hpp"
#include "watertight/octree.hpp"
#include "watertight/signfield.hpp"

namespace watertight {

/// Which occupied leaf emitted a quad, and through which face.
struct QuadOrigin {
  NodeId cell = kNoNode;
  CellCoord cell_coord{};
  Direction direction = Direction::kPosX;

  /// The max-depth cell on the outer side of the quad. May lie outside the
  /// root when the quad sits on the root boundary.
  CellCoord positive_cell() const { return step(cell_coord, direction); }
};

using Quad = std::array<VertexId, 4>;

/// Unit lattice squares at max-depth resolution separating occupied cells
/// from outside space. Quads wind counter-clockwise seen from outside.
/// Several vertices may share one lattice corner after non-manifold splits.
struct QuadSurface {
  std::vector<CellCoord> vertex_lattice;
  std::vector<Quad> quads;
  std::vector<QuadOrigin> origins;
  double root_half_extent = 1.1;
  double leaf_size = 0.0;

  Vec3 position(VertexId v) const {
    const auto& c = vertex_lattice[v];
    return {-root_half_extent + c[0] * leaf_size, -root_half_extent + c[1] * leaf_size,
            -root_half_extent + c[2] * leaf_size};
  }
};

struct SplitReport {
  /// Lattice edges that carried four quads and were separated into two.
  std::size_t edge_splits = 0;
  /// Vertices whose quad fans formed several cycles and were replicated.
  std::size_t vertex_splits = 0;
};

struct SplitResult {
  QuadSurface surface;
  SplitReport report;
};

/// One quad per (occupied leaf, face) whose neighbor is Positive, or lies
/// outside the root. Vertices are shared by integer lattice key.
QuadSurface extract_boundary_faces(const Octree& tree, const SignField& signs,
                                   const ConnectionGraph& graph);

/// Separates every lattice edge shared by four quads (two occupied cells
/// touching along an edge) into two edges with two quads each.
///
/// The four quads are re-paired by the positive cell they border, keeping
/// the occupied volume connected across the edge. Where that pairing would
/// route both pairs through one vertex cycle at both endpoints (so no vertex
/// split could pull them apart), the edge is re-paired by occupied cell
/// instead. The endpoints are then replicated once per quad fan.
///
/// Throws MalformedSurfaceError for an edge with an odd or >4 quad count.
SplitResult split_nonmanifold_edges(QuadSurface surface);

/// Replicates each vertex whose incident quads form k > 1 edge-connected
/// fans into k vertices, one per fan. Requires every edge to carry exactly
/// two quads and throws MalformedSurfaceError otherwise.
SplitResult split_nonmanifold_vertices(QuadSurface surface);

/// Splits each quad along its (v0, v2) diagonal, preserving winding.
TriangleMesh triangulate(const QuadSurface& surface);

}  // namespace watertight
