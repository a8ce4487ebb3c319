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

#include <cstddef>
#include <cstdint>
#include <optional>

#include <nlohmann/json.hpp>

#include "watertight/mesh.hpp"
#include "watertight/octree.hpp"
#include "watertight/project.hpp"

namespace watertight {

struct ManifoldReport {
  /// No edge with more than two faces and no vertex with several fans.
  bool is_manifold = false;
  /// No boundary edges (every edge has at least two faces).
  bool is_closed = false;
  /// No directed edge is used twice, i.e. neighbors wind consistently.
  bool is_oriented = false;
  std::size_t bad_edges = 0;
  std::size_t bad_vertices = 0;
  std::int64_t euler_characteristic = 0;
  /// Set only for a single connected, closed, oriented manifold.
  std::optional<std::int64_t> genus_if_connected_closed;
  std::size_t flip_count = 0;
  double flip_rate = 0.0;

  bool watertight() const { return is_manifold && is_closed && is_oriented; }
};

/// Topological checks; never throws on bad input, it reports.
ManifoldReport check_manifold(const TriangleMesh& mesh);

struct FlipStats {
  std::size_t flip_count = 0;
  double flip_rate = 0.0;
};

/// A triangle is flipped when its normal points against the normal of the
/// input triangle nearest to its centroid. Zero-area triangles never count
/// as flipped but do count toward the total. `output` must be in the octree's
/// (normalized) frame.
FlipStats count_face_flips(const TriangleMesh& output, const Octree& tree);
FlipStats count_face_flips(const TriangleMesh& output, NearestTriangleQuery& query);

/// JSON object with exactly the report's fields, snake_case keys; the genus
/// is null when absent.
nlohmann::json to_json(const ManifoldReport& report);
ManifoldReport report_from_json(const nlohmann::json& j);

}  // namespace watertight
