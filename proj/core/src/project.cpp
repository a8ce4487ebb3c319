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

#include "watertight/project.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <queue>
#include <span>
#include <stdexcept>

#include "watertight/errors.hpp"

namespace watertight {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Block {
  CellCoord lo{};
  CellCoord hi{};  // inclusive
};

Block block_around(const Octree& tree, const CellCoord& c, std::int64_t radius) {
  const std::int64_t last = tree.resolution() - 1;
  Block b;
  for (int a = 0; a < 3; ++a) {
    b.lo[a] = static_cast<std::int32_t>(std::clamp<std::int64_t>(c[a] - radius, 0, last));
    b.hi[a] = static_cast<std::int32_t>(std::clamp<std::int64_t>(c[a] + radius, 0, last));
  }
  return b;
}

bool covers_domain(const Octree& tree, const Block& b) {
  const std::int32_t last = tree.resolution() - 1;
  for (int a = 0; a < 3; ++a) {
    if (b.lo[a] > 0 || b.hi[a] < last) return false;
  }
  return true;
}

// Lower bound on the distance from p to any point of the root outside the
// block. Sides on the root boundary do not count: nothing lies beyond them.
double block_margin(const Octree& tree, const Block& b, const Vec3& p) {
  const std::int32_t last = tree.resolution() - 1;
  double margin = kInf;
  for (int a = 0; a < 3; ++a) {
    if (b.lo[a] > 0) margin = std::min(margin, p[a] - tree.lattice_to_world(b.lo[a]));
    if (b.hi[a] < last) margin = std::min(margin, tree.lattice_to_world(b.hi[a] + 1) - p[a]);
  }
  return margin;
}

template <typename Fn>
void for_each_leaf_in(const Octree& tree, const Block& b, Fn&& fn) {
  const std::int64_t volume = std::int64_t{b.hi[0] - b.lo[0] + 1} * (b.hi[1] - b.lo[1] + 1) *
                              (b.hi[2] - b.lo[2] + 1);
  if (volume > static_cast<std::int64_t>(tree.occupied_leaves().size())) {
    for (NodeId leaf : tree.occupied_leaves()) {
      const CellCoord& c = tree.node(leaf).coord;
      bool inside = true;
      for (int a = 0; a < 3; ++a) inside = inside && c[a] >= b.lo[a] && c[a] <= b.hi[a];
      if (inside) fn(leaf);
    }
    return;
  }
  for (std::int32_t z = b.lo[2]; z <= b.hi[2]; ++z) {
    for (std::int32_t y = b.lo[1]; y <= b.hi[1]; ++y) {
      for (std::int32_t x = b.lo[0]; x <= b.hi[0]; ++x) {
        const NodeId leaf = tree.find_occupied_leaf({x, y, z});
        if (leaf != kNoNode) fn(leaf);
      }
    }
  }
}

void consider(const Vec3& p, std::uint32_t t, const Triangle& tri, NearestHit& best,
              double& best_d2) {
  const Vec3 q = closest_point_on_triangle(p, tri);
  const double d2 = (q - p).squaredNorm();
  if (d2 < best_d2 || (d2 == best_d2 && t < best.triangle)) {
    best_d2 = d2;
    best.triangle = t;
    best.point = q;
  }
}

// Squared distance from p to the closed box.
double box_distance2(const AABB& box, const Vec3& p) {
  const Vec3 d = (box.min - p).cwiseMax(p - box.max).cwiseMax(0.0);
  return d.squaredNorm();
}

// Every node lists the triangles overlapping it. Searches test a node's
// triangles directly once the list is this short instead of opening its
// children.
constexpr std::size_t kDirectTestLimit = 32;

// Exact best-first descent: nodes are opened in order of their box distance
// and the search stops once no unopened box can hold a closer point.
NearestHit search_best_first(const Vec3& p, const Octree& tree,
                             const std::vector<Triangle>* cached_tris) {
  if (tree.occupied_leaves().empty()) throw NoTrianglesError();
  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  open.emplace(box_distance2(tree.bbox(tree.root()), p), tree.root());
  NearestHit best;
  double best_d2 = kInf;
  while (!open.empty()) {
    const auto [d2, id] = open.top();
    open.pop();
    if (d2 > best_d2) break;
    const OctreeNode& n = tree.node(id);
    const auto tris = tree.triangles(id);
    if (!n.has_children() || tris.size() <= kDirectTestLimit) {
      for (std::uint32_t t : tris) {
        consider(p, t, cached_tris ? (*cached_tris)[t] : tree.mesh().triangle(t), best, best_d2);
      }
      continue;
    }
    for (int octant = 0; octant < 8; ++octant) {
      const NodeId c = tree.child(id, octant);
      if (tree.node(c).occupied()) open.emplace(box_distance2(tree.bbox(c), p), c);
    }
  }
  best.distance = std::sqrt(best_d2);
  return best;
}

// atan2(cross_norm, dot) for cross_norm > 0, through the cheaper atan.
double corner_angle(double cross_norm, double dot) {
  if (dot == 0.0) return std::numbers::pi / 2;
  const double a = std::atan(cross_norm / dot);
  return dot > 0.0 ? a : a + std::numbers::pi;
}

// Vertex 1-rings as CSR, built from triangle edges.
struct Rings {
  std::vector<std::uint32_t> begin;
  std::vector<VertexId> neighbors;
};

Rings build_rings(const TriangleMesh& mesh) {
  std::vector<std::pair<VertexId, VertexId>> pairs;
  pairs.reserve(mesh.triangles.size() * 6);
  for (const auto& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      pairs.emplace_back(t[k], t[(k + 1) % 3]);
      pairs.emplace_back(t[(k + 1) % 3], t[k]);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  Rings r;
  r.begin.assign(mesh.vertices.size() + 1, 0);
  for (const auto& [a, b] : pairs) ++r.begin[a + 1];
  std::partial_sum(r.begin.begin(), r.begin.end(), r.begin.begin());
  r.neighbors.reserve(pairs.size());
  for (const auto& [a, b] : pairs) r.neighbors.push_back(b);
  return r;
}

void smooth_in_place(std::vector<Vec3>& positions, const Rings& rings, double weight) {
  if (weight == 0.0) return;
  const std::vector<Vec3> old = positions;
  for (std::size_t v = 0; v < old.size(); ++v) {
    const std::uint32_t b = rings.begin[v];
    const std::uint32_t e = rings.begin[v + 1];
    if (b == e) continue;
    Vec3 sum = Vec3::Zero();
    for (std::uint32_t i = b; i < e; ++i) sum += old[rings.neighbors[i]];
    positions[v] = (1.0 - weight) * old[v] + weight * (sum / static_cast<double>(e - b));
  }
}

}  // namespace

void ProjectionParams::validate() const {
  if (!(step_size > 0.0)) throw std::invalid_argument("step_size must be positive");
  if (iterations < 0) throw std::invalid_argument("iterations must be non-negative");
  if (!(smoothing_weight >= 0.0 && smoothing_weight <= 1.0)) {
    throw std::invalid_argument("smoothing_weight must be in [0, 1]");
  }
  if (search_radius_cells < 0) throw std::invalid_argument("search_radius_cells must be >= 0");
}

NearestHit nearest_triangle(const Vec3& point, const Octree& tree, int search_radius_cells) {
  if (tree.occupied_leaves().empty()) throw NoTrianglesError();
  const Block b = block_around(tree, tree.fine_cell_of(point), std::max(0, search_radius_cells));
  NearestHit best;
  double best_d2 = kInf;
  std::vector<std::uint32_t> seen;
  for_each_leaf_in(tree, b, [&](NodeId leaf) {
    for (std::uint32_t t : tree.triangles(leaf)) seen.push_back(t);
  });
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  for (std::uint32_t t : seen) consider(point, t, tree.mesh().triangle(t), best, best_d2);
  if (best_d2 < kInf) {
    best.distance = std::sqrt(best_d2);
    if (covers_domain(tree, b) || best.distance <= block_margin(tree, b, point)) return best;
  }
  return search_best_first(point, tree, nullptr);
}

NearestTriangleQuery::NearestTriangleQuery(const Octree& tree)
    : tree_(tree),
      fine_depth_(std::max(tree.max_depth(), std::min(tree.max_depth() + 3, kMinCacheDepth))),
      inv_cell_size_(std::ldexp(1.0, fine_depth_) / (2.0 * tree.root_half_extent())) {
  if (tree.occupied_leaves().empty()) throw NoTrianglesError();
  tris_.resize(tree.mesh().triangles.size());
  boxes_.resize(tris_.size());
  for (std::size_t t = 0; t < tris_.size(); ++t) {
    tris_[t] = tree.mesh().triangle(t);
    const Triangle& tri = tris_[t];
    boxes_[t] = {tri[0].cwiseMin(tri[1]).cwiseMin(tri[2]), tri[0].cwiseMax(tri[1]).cwiseMax(tri[2])};
  }
  stamp_.assign(tris_.size(), 0);
}

// The cache lattice is shifted by half a fine cell against the octree, so
// extracted vertices, which lie on octree lattice planes, start at fine cell
// centers instead of on cell boundaries. Fine cells run 0..2^fine_depth_.
double NearestTriangleQuery::lattice_origin() const {
  return -tree_.root_half_extent() - 0.5 / inv_cell_size_;
}

NearestTriangleQuery::CellFrame NearestTriangleQuery::frame(const CellCoord& fine, int shift) const {
  CellFrame f;
  f.size = std::ldexp(1.0 / inv_cell_size_, shift);
  const double origin = lattice_origin();
  for (int a = 0; a < 3; ++a) {
    f.coord[a] = fine[a] >> shift;
    f.center[a] = origin + (f.coord[a] + 0.5) * f.size;
  }
  return f;
}

bool NearestTriangleQuery::cache_cell_of(const Vec3& p, CellCoord& cell) const {
  const double origin = lattice_origin();
  const double last = static_cast<double>(std::int64_t{1} << fine_depth_);
  for (int a = 0; a < 3; ++a) {
    const double c = std::floor((p[a] - origin) * inv_cell_size_);
    if (!(c >= 0.0 && c <= last)) return false;
    cell[a] = static_cast<std::int32_t>(c);
  }
  return true;
}

NearestHit NearestTriangleQuery::operator()(const Vec3& point) {
  Hint hint;
  return (*this)(point, hint);
}

NearestHit NearestTriangleQuery::operator()(const Vec3& point, Hint& hint) {
  CellCoord cell;
  if (!cache_cell_of(point, cell)) return search_best_first(point, tree_, &tris_);
  const std::uint64_t key = pack_coord(cell);
  auto& recent = hint.recent;
  if (hint.size > 1 && recent[1].key == key) {
    std::swap(recent[0], recent[1]);
  } else if (hint.size == 0 || recent[0].key != key) {
    auto it = fine_.find(key);
    if (it == fine_.end()) {
      const CellFrame coarse = frame(cell, kCoarseShift);
      const std::uint64_t coarse_key = pack_coord(coarse.coord);
      auto cit = coarse_.find(coarse_key);
      if (cit == coarse_.end()) cit = coarse_.emplace(coarse_key, collect_from_tree(coarse)).first;
      it = fine_.emplace(key, filter_candidates(frame(cell, 0), coarse, cit->second)).first;
    }
    recent[1] = recent[0];
    recent[0] = {key, it->second.first, it->second.second};
    hint.size = std::min(hint.size + 1, 2);
  }

  NearestHit best;
  double best_d2 = kInf;
  for (std::uint32_t i = recent[0].begin; i < recent[0].end; ++i) {
    const std::uint32_t t = fine_pool_[i];
    if (box_distance2(boxes_[t], point) > best_d2) continue;
    consider(point, t, tris_[t], best, best_d2);
  }
  best.distance = std::sqrt(best_d2);
  return best;
}

// Any point of a cell is within half a diagonal of its center, so only
// triangles within a full diagonal of the center's nearest distance can be
// nearest to it. A sub-cell's candidates are a subset of its parent's.
double NearestTriangleQuery::reach(const CellFrame& f, double center_distance) {
  return center_distance + std::sqrt(3.0) * f.size * (1.0 + 1e-6);
}

// Best-first from the cell center, keeping every triangle within reach of
// the nearest distance found so far. The bound only shrinks, so nothing
// within reach of the final nearest distance is missed.
NearestTriangleQuery::Range NearestTriangleQuery::collect_from_tree(const CellFrame& f) {
  const double extra = reach(f, 0.0);
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
  auto& found = kept_;
  found.clear();
  double best = kInf;
  auto bound2 = [&] { return (best + extra) * (best + extra); };
  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  open.emplace(box_distance2(tree_.bbox(tree_.root()), f.center), tree_.root());
  while (!open.empty()) {
    const auto [d2, id] = open.top();
    open.pop();
    if (d2 > bound2()) break;
    const OctreeNode& n = tree_.node(id);
    const auto tris = tree_.triangles(id);
    if (n.has_children() && tris.size() > kDirectTestLimit) {
      for (int octant = 0; octant < 8; ++octant) {
        const NodeId c = tree_.child(id, octant);
        if (!tree_.node(c).occupied()) continue;
        const double c2 = box_distance2(tree_.bbox(c), f.center);
        if (c2 <= bound2()) open.emplace(c2, c);
      }
      continue;
    }
    for (std::uint32_t t : tris) {
      if (stamp_[t] == epoch_) continue;
      stamp_[t] = epoch_;
      if (box_distance2(boxes_[t], f.center) > bound2()) continue;
      const double d = (closest_point_on_triangle(f.center, tris_[t]) - f.center).norm();
      best = std::min(best, d);
      if (d <= best + extra) found.emplace_back(d, t);
    }
  }
  std::sort(found.begin(), found.end());
  const auto begin = static_cast<std::uint32_t>(coarse_pool_.size());
  for (const auto& [d, t] : found) {
    if (d > best + extra) break;
    coarse_pool_.push_back(t);
    coarse_distance_.push_back(d);
  }
  return {begin, static_cast<std::uint32_t>(coarse_pool_.size())};
}

// Coarse candidates are sorted by distance to the coarse center, and a
// triangle is at least that distance minus the center offset from the fine
// center, so both passes stop early.
NearestTriangleQuery::Range NearestTriangleQuery::filter_candidates(const CellFrame& f,
                                                                     const CellFrame& parent,
                                                                     Range superset) {
  const double offset = (f.center - parent.center).norm();
  auto distance2 = [&](std::uint32_t t) {
    return (closest_point_on_triangle(f.center, tris_[t]) - f.center).squaredNorm();
  };
  double best = kInf;
  for (std::uint32_t i = superset.first; i < superset.second; ++i) {
    const double lower = coarse_distance_[i] - offset;
    if (lower > 0.0 && lower * lower > best) break;
    const std::uint32_t t = coarse_pool_[i];
    if (box_distance2(boxes_[t], f.center) > best) continue;
    best = std::min(best, distance2(t));
  }
  const double r = reach(f, std::sqrt(best));
  auto& kept = kept_;
  kept.clear();
  for (std::uint32_t i = superset.first; i < superset.second; ++i) {
    if (coarse_distance_[i] - offset > r) break;
    const std::uint32_t t = coarse_pool_[i];
    if (box_distance2(boxes_[t], f.center) > r * r) continue;
    const double d2 = distance2(t);
    if (d2 <= r * r) kept.emplace_back(d2, t);
  }
  // Likely winners first, so the box test at query time rejects most of the rest.
  std::sort(kept.begin(), kept.end());
  const auto begin = static_cast<std::uint32_t>(fine_pool_.size());
  for (const auto& [d, t] : kept) fine_pool_.push_back(t);
  return {begin, static_cast<std::uint32_t>(fine_pool_.size())};
}

std::vector<Vec3> vertex_normals(const TriangleMesh& mesh) {
  std::vector<Vec3> angle_sum(mesh.vertices.size(), Vec3::Zero());
  for (const auto& f : mesh.triangles) {
    const Vec3& p0 = mesh.vertices[f[0]];
    const Vec3 e01 = mesh.vertices[f[1]] - p0;
    const Vec3 e02 = mesh.vertices[f[2]] - p0;
    const Vec3 cross = e01.cross(e02);
    const double len = cross.norm();
    if (len == 0.0) continue;
    const Vec3 unit = cross / len;
    // |e1 x e2| is the same at every corner; the third angle is what is left.
    const double a0 = corner_angle(len, e01.dot(e02));
    const double a1 = corner_angle(len, (e02 - e01).dot(-e01));
    angle_sum[f[0]] += a0 * unit;
    angle_sum[f[1]] += a1 * unit;
    angle_sum[f[2]] += std::max(0.0, std::numbers::pi - a0 - a1) * unit;
  }
  std::vector<Vec3> normals(mesh.vertices.size(), Vec3::UnitZ());
  std::vector<std::uint8_t> degenerate(mesh.vertices.size(), 0);
  bool any_degenerate = false;
  for (std::size_t v = 0; v < normals.size(); ++v) {
    const double n = angle_sum[v].norm();
    if (n > 1e-300) {
      normals[v] = angle_sum[v] / n;
    } else {
      degenerate[v] = 1;
      any_degenerate = true;
    }
  }
  if (!any_degenerate) return normals;
  // Area-weighted fallback where the angle-weighted sum cancels out.
  std::vector<Vec3> area_sum(mesh.vertices.size(), Vec3::Zero());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& f = mesh.triangles[t];
    if (!degenerate[f[0]] && !degenerate[f[1]] && !degenerate[f[2]]) continue;
    const Vec3 cross = triangle_cross(mesh.triangle(t));
    for (int k = 0; k < 3; ++k) area_sum[f[k]] += cross;
  }
  for (std::size_t v = 0; v < normals.size(); ++v) {
    if (degenerate[v] && area_sum[v].norm() > 1e-300) normals[v] = area_sum[v].normalized();
  }
  return normals;
}

TriangleMesh laplacian_smooth(const TriangleMesh& mesh, double weight) {
  TriangleMesh out = mesh;
  smooth_in_place(out.vertices, build_rings(mesh), weight);
  return out;
}

double mean_distance_to_surface(const TriangleMesh& mesh, const Octree& tree) {
  if (mesh.vertices.empty()) return 0.0;
  NearestTriangleQuery query(tree);
  double sum = 0.0;
  for (const Vec3& v : mesh.vertices) sum += query(v).distance;
  return sum / static_cast<double>(mesh.vertices.size());
}

TriangleMesh project_to_surface(const TriangleMesh& extracted, const Octree& tree,
                                const ProjectionParams& params, ProjectionStats* stats) {
  params.validate();
  if (params.iterations == 0 || extracted.vertices.empty()) {
    if (stats) *stats = {};
    return extracted;
  }
  NearestTriangleQuery query(tree);
  return project_to_surface(extracted, query, params, stats);
}

TriangleMesh project_to_surface(const TriangleMesh& extracted, NearestTriangleQuery& query,
                                const ProjectionParams& params, ProjectionStats* stats) {
  params.validate();
  TriangleMesh mesh = extracted;
  ProjectionStats local;
  if (params.iterations == 0 || mesh.vertices.empty()) {
    if (stats) *stats = local;
    return mesh;
  }

  const Rings rings = build_rings(mesh);
  const double n = static_cast<double>(mesh.vertices.size());
  std::vector<NearestTriangleQuery::Hint> hints(mesh.vertices.size());
  std::vector<Vec3> next(mesh.vertices.size());
  for (int it = 0; it < params.iterations; ++it) {
    const std::vector<Vec3> normals = vertex_normals(mesh);
    double distance_sum = 0.0;
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
      const Vec3& p = mesh.vertices[v];
      const NearestHit hit = query(p, hints[v]);
      if (it == 0) distance_sum += hit.distance;
      const double gap = (hit.point - p).dot(normals[v]);
      next[v] = p + std::clamp(gap, -params.step_size, params.step_size) * normals[v];
    }
    if (it == 0) local.mean_distance_before = distance_sum / n;
    smooth_in_place(next, rings, params.smoothing_weight);

    double max_move = 0.0;
    for (std::size_t v = 0; v < next.size(); ++v) {
      max_move = std::max(max_move, (next[v] - mesh.vertices[v]).norm());
    }
    mesh.vertices.swap(next);
    local.iterations_run = it + 1;
    if (max_move < params.convergence_tolerance) {
      local.converged = true;
      break;
    }
  }
  double distance_sum = 0.0;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    distance_sum += query(mesh.vertices[v], hints[v]).distance;
  }
  local.mean_distance_after = distance_sum / n;
  if (stats) *stats = local;
  return mesh;
}

}  // namespace watertight
