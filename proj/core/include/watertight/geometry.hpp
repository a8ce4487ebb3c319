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

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>

namespace watertight {

using Vec3 = Eigen::Vector3d;

/// Closed axis-aligned box. min <= max componentwise.
struct AABB {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();

  Vec3 center() const { return 0.5 * (min + max); }
  Vec3 half_extent() const { return 0.5 * (max - min); }
  bool contains(const Vec3& p) const {
    return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
  }
};

using Triangle = std::array<Vec3, 3>;

/// Closed triangle / closed box overlap via the separating axis theorem
/// (3 box normals, the triangle normal, 9 edge cross products).
///
/// Touching counts as overlap. Separation must exceed a tiny relative margin
/// before an axis is accepted as separating, so that boundary contacts on
/// shared lattice planes are reported identically for a box and any box that
/// contains it. Degenerate triangles reduce to segment or point overlap
/// because the zero-length axes are skipped.
bool triangle_box_intersects(const Triangle& tri, const AABB& box);

/// Closest point on a closed triangle, handling face, edge and vertex regions.
Vec3 closest_point_on_triangle(const Vec3& p, const Triangle& tri);

/// Unnormalized face normal (b - a) x (c - a); its length is twice the area.
inline Vec3 triangle_cross(const Triangle& tri) {
  return (tri[1] - tri[0]).cross(tri[2] - tri[0]);
}

inline double triangle_area(const Triangle& tri) {
  return 0.5 * triangle_cross(tri).norm();
}

}  // namespace watertight
