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

#include "watertight/verify.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "watertight/project.hpp"

namespace watertight {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

ManifoldReport check_manifold(const TriangleMesh& mesh) {
  ManifoldReport report;
  const std::size_t nf = mesh.triangles.size();
  std::size_t nv = 0;
  for (const auto& f : mesh.triangles) {
    for (VertexId v : f) nv = std::max<std::size_t>(nv, std::size_t{v} + 1);
  }

  // Triangle sides bucketed by their smaller vertex: (larger vertex, corner
  // of the side's first vertex, forward).
  struct Side {
    VertexId other;
    std::uint32_t corner;
    bool forward;
  };
  std::vector<std::uint32_t> begin(nv + 1, 0);
  for (const auto& f : mesh.triangles) {
    for (int k = 0; k < 3; ++k) ++begin[std::size_t{std::min(f[k], f[(k + 1) % 3])} + 1];
  }
  std::partial_sum(begin.begin(), begin.end(), begin.begin());
  std::vector<Side> sides(nf * 3);
  std::vector<std::uint32_t> fill(begin.begin(), begin.end() - 1);
  for (std::uint32_t t = 0; t < nf; ++t) {
    const auto& f = mesh.triangles[t];
    for (std::uint32_t k = 0; k < 3; ++k) {
      const VertexId a = f[k];
      const VertexId b = f[(k + 1) % 3];
      sides[fill[std::min(a, b)]++] = {std::max(a, b), 3 * t + k, a < b};
    }
  }

  // Corners (3t + k) at one vertex are joined when their triangles share a
  // two-face edge there; each remaining class is a fan. Triangles are joined
  // across every shared edge into components.
  DisjointSets corners(nf * 3);
  DisjointSets components(nf);
  auto corner_at = [&](std::uint32_t side_corner, bool first) {
    const std::uint32_t t = side_corner / 3;
    return first ? side_corner : 3 * t + (side_corner % 3 + 1) % 3;
  };
  bool closed = true;
  bool oriented = true;
  std::int64_t edge_count = 0;
  for (std::size_t v = 0; v < nv; ++v) {
    const auto first = sides.begin() + begin[v];
    const auto last = sides.begin() + begin[v + 1];
    std::sort(first, last, [](const Side& x, const Side& y) {
      return x.other != y.other ? x.other < y.other : x.corner < y.corner;
    });
    for (auto i = first; i != last;) {
      auto j = i;
      std::size_t forward = 0;
      while (j != last && j->other == i->other) forward += (j++)->forward ? 1 : 0;
      ++edge_count;
      const auto faces = static_cast<std::size_t>(j - i);
      if (forward > 1 || faces - forward > 1) oriented = false;
      for (auto k = i + 1; k != j; ++k) components.unite(i->corner / 3, k->corner / 3);
      if (faces == 1) {
        closed = false;
      } else if (faces == 2) {
        // The side's first vertex is the smaller one exactly when forward.
        const auto& s0 = *i;
        const auto& s1 = *(i + 1);
        corners.unite(corner_at(s0.corner, s0.forward), corner_at(s1.corner, s1.forward));
        corners.unite(corner_at(s0.corner, !s0.forward), corner_at(s1.corner, !s1.forward));
      } else {
        ++report.bad_edges;
      }
      i = j;
    }
  }

  std::vector<std::uint32_t> fans(nv, 0);
  for (std::uint32_t c = 0; c < nf * 3; ++c) {
    if (corners.find(c) == c) ++fans[mesh.triangles[c / 3][c % 3]];
  }
  std::int64_t vertex_count = 0;
  for (std::uint32_t n : fans) {
    vertex_count += n > 0 ? 1 : 0;
    report.bad_vertices += n > 1 ? 1 : 0;
  }

  std::size_t component_count = 0;
  for (std::size_t t = 0; t < nf; ++t) component_count += components.find(t) == t ? 1 : 0;

  report.is_closed = closed && nf > 0;
  report.is_oriented = oriented;
  report.is_manifold = report.bad_edges == 0 && report.bad_vertices == 0;
  report.euler_characteristic = vertex_count - edge_count + static_cast<std::int64_t>(nf);
  if (report.watertight() && component_count == 1) {
    report.genus_if_connected_closed = (2 - report.euler_characteristic) / 2;
  }
  return report;
}

FlipStats count_face_flips(const TriangleMesh& output, const Octree& tree) {
  if (output.triangles.empty()) return {};
  NearestTriangleQuery query(tree);
  return count_face_flips(output, query);
}

FlipStats count_face_flips(const TriangleMesh& output, NearestTriangleQuery& query) {
  FlipStats stats;
  if (output.triangles.empty()) return stats;
  NearestTriangleQuery::Hint hint;  // consecutive triangles tend to share a cell
  for (std::size_t t = 0; t < output.triangles.size(); ++t) {
    const Triangle tri = output.triangle(t);
    const Vec3 normal = triangle_cross(tri);
    if (normal.squaredNorm() == 0.0) continue;
    const Vec3 centroid = (tri[0] + tri[1] + tri[2]) / 3.0;
    const NearestHit hit = query(centroid, hint);
    const Vec3 reference = triangle_cross(query.tree().mesh().triangle(hit.triangle));
    if (normal.dot(reference) < 0.0) ++stats.flip_count;
  }
  stats.flip_rate =
      static_cast<double>(stats.flip_count) / static_cast<double>(output.triangles.size());
  return stats;
}

nlohmann::json to_json(const ManifoldReport& r) {
  nlohmann::json j;
  j["is_manifold"] = r.is_manifold;
  j["is_closed"] = r.is_closed;
  j["is_oriented"] = r.is_oriented;
  j["bad_edges"] = r.bad_edges;
  j["bad_vertices"] = r.bad_vertices;
  j["euler_characteristic"] = r.euler_characteristic;
  j["genus_if_connected_closed"] = r.genus_if_connected_closed
                                       ? nlohmann::json(*r.genus_if_connected_closed)
                                       : nlohmann::json(nullptr);
  j["flip_count"] = r.flip_count;
  j["flip_rate"] = r.flip_rate;
  return j;
}

ManifoldReport report_from_json(const nlohmann::json& j) {
  ManifoldReport r;
  r.is_manifold = j.at("is_manifold").get<bool>();
  r.is_closed = j.at("is_closed").get<bool>();
  r.is_oriented = j.at("is_oriented").get<bool>();
  r.bad_edges = j.at("bad_edges").get<std::size_t>();
  r.bad_vertices = j.at("bad_vertices").get<std::size_t>();
  r.euler_characteristic = j.at("euler_characteristic").get<std::int64_t>();
  if (!j.at("genus_if_connected_closed").is_null()) {
    r.genus_if_connected_closed = j.at("genus_if_connected_closed").get<std::int64_t>();
  }
  r.flip_count = j.at("flip_count").get<std::size_t>();
  r.flip_rate = j.at("flip_rate").get<double>();
  return r;
}

}  // namespace watertight
