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
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "watertight/mesh.hpp"
#include "watertight/octree.hpp"

namespace watertight {

struct ProjectionParams {
  /// Largest move along the vertex normal per iteration, in normalized units.
  double step_size = 0.005;
  int iterations = 20;
  /// Blend toward the 1-ring average after each step; 0 disables smoothing.
  double smoothing_weight = 0.5;
  /// Half-width, in leaf cells, of the first block searched for triangles.
  int search_radius_cells = 2;
  /// Stop once no vertex moved farther than this in one iteration.
  double convergence_tolerance = 1e-6;

  void validate() const;
};

struct NearestHit {
  std::uint32_t triangle = 0;
  Vec3 point = Vec3::Zero();
  double distance = 0.0;
};

/// Exact closest point on the octree's mesh, using the triangle lists of
/// occupied leaves around the query. The block of cells within
/// `search_radius_cells` is searched first; if something outside the block
/// could still be closer, a best-first descent of the octree settles it.
NearestHit nearest_triangle(const Vec3& point, const Octree& tree, int search_radius_cells = 2);

/// Same result as nearest_triangle. Each fine cell caches the triangles that
/// can be nearest to some point inside it, so repeated queries near the
/// surface scan short lists. Not thread-safe; use one instance per thread.
class NearestTriangleQuery {
 public:
  explicit NearestTriangleQuery(const Octree& tree);
  NearestHit operator()(const Vec3& point);
  const Octree& tree() const { return tree_; }

  /// Remembers the last two cells a caller queried, which skips the cache
  /// lookup while its queries stay in (or alternate between) them. Entries
  /// are never evicted, so a hint stays valid for the query's lifetime.
  struct Hint {
    struct Entry {
      std::uint64_t key = 0;
      std::uint32_t begin = 0;  // candidate range in the fine pool
      std::uint32_t end = 0;
    };
    std::array<Entry, 2> recent{};
    int size = 0;
  };
  NearestHit operator()(const Vec3& point, Hint& hint);

 private:
  struct CellFrame {
    CellCoord coord{};
    Vec3 center = Vec3::Zero();
    double size = 0.0;
  };
  // Cache cells are at least this fine whatever the octree depth, and each
  // coarse cell spans 2^kCoarseShift of them per axis.
  static constexpr int kMinCacheDepth = 8;
  static constexpr int kCoarseShift = 2;

  double lattice_origin() const;
  CellFrame frame(const CellCoord& fine, int shift) const;
  // False when p lies outside the cached lattice.
  bool cache_cell_of(const Vec3& p, CellCoord& cell) const;
  static double reach(const CellFrame& f, double center_distance);
  using Range = std::pair<std::uint32_t, std::uint32_t>;
  // Both append to a pool and return the appended range.
  Range collect_from_tree(const CellFrame& f);
  Range filter_candidates(const CellFrame& f, const CellFrame& parent, Range superset);

  const Octree& tree_;
  int fine_depth_;
  double inv_cell_size_;
  std::vector<Triangle> tris_;
  std::vector<AABB> boxes_;
  // Candidate lists of all cached cells, concatenated.
  std::vector<std::uint32_t> coarse_pool_;
  std::vector<double> coarse_distance_;  // from each coarse center, ascending per cell
  std::vector<std::uint32_t> fine_pool_;
  std::unordered_map<std::uint64_t, Range> coarse_;
  std::unordered_map<std::uint64_t, Range> fine_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<std::pair<double, std::uint32_t>> kept_;
};

/// Angle-weighted average of incident face normals, unit length. Falls back
/// to area weighting, then to +z, when the weighted sum vanishes.
std::vector<Vec3> vertex_normals(const TriangleMesh& mesh);

/// One uniform Laplacian pass: v <- (1 - weight) v + weight * mean(1-ring).
TriangleMesh laplacian_smooth(const TriangleMesh& mesh, double weight);

struct ProjectionStats {
  int iterations_run = 0;
  bool converged = false;
  double mean_distance_before = 0.0;
  double mean_distance_after = 0.0;
};

/// Iteratively moves vertices along their normals toward the nearest input
/// triangle by at most step_size, smoothing after every step. Only vertex
/// positions change.
TriangleMesh project_to_surface(const TriangleMesh& extracted, const Octree& tree,
                                const ProjectionParams& params, ProjectionStats* stats = nullptr);
/// Same, reusing a caller's query (and its cache) over the same octree.
TriangleMesh project_to_surface(const TriangleMesh& extracted, NearestTriangleQuery& query,
                                const ProjectionParams& params, ProjectionStats* stats = nullptr);

/// Mean distance from the mesh vertices to the octree's input surface.
double mean_distance_to_surface(const TriangleMesh& mesh, const Octree& tree);

}  // namespace watertight
