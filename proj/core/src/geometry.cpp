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

#include "watertight/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace watertight {

namespace {

// Relative slack on separating-axis tests. Rounding in the box-centered
// frame is ~1e-16 of the coordinate scale; the slack sits well above it.
constexpr double kSatSlack = 1e-12;

// Axis separates iff the triangle's projected interval misses [-r, r].
bool separated_on(const Vec3& axis, const Vec3& v0, const Vec3& v1, const Vec3& v2,
                  const Vec3& half, double scale) {
  const double len = axis.norm();
  if (len <= 1e-300) return false;
  const double p0 = axis.dot(v0);
  const double p1 = axis.dot(v1);
  const double p2 = axis.dot(v2);
  const double r = half.x() * std::abs(axis.x()) + half.y() * std::abs(axis.y()) +
                   half.z() * std::abs(axis.z());
  const double lo = std::min({p0, p1, p2});
  const double hi = std::max({p0, p1, p2});
  const double slack = kSatSlack * len * scale;
  return lo > r + slack || hi < -r - slack;
}

}  // namespace

bool triangle_box_intersects(const Triangle& tri, const AABB& box) {
  const Vec3 c = box.center();
  const Vec3 half = box.half_extent();
  const Vec3 v0 = tri[0] - c;
  const Vec3 v1 = tri[1] - c;
  const Vec3 v2 = tri[2] - c;
  const double scale = std::max({1.0, half.maxCoeff(), v0.cwiseAbs().maxCoeff(),
                                 v1.cwiseAbs().maxCoeff(), v2.cwiseAbs().maxCoeff()});

  // Box face normals.
  for (int axis = 0; axis < 3; ++axis) {
    const double lo = std::min({v0[axis], v1[axis], v2[axis]});
    const double hi = std::max({v0[axis], v1[axis], v2[axis]});
    const double slack = kSatSlack * scale;
    if (lo > half[axis] + slack || hi < -half[axis] - slack) return false;
  }

  const Vec3 e0 = v1 - v0;
  const Vec3 e1 = v2 - v1;
  const Vec3 e2 = v0 - v2;

  if (separated_on(e0.cross(e1), v0, v1, v2, half, scale)) return false;

  const std::array<Vec3, 3> edges{e0, e1, e2};
  for (const Vec3& e : edges) {
    for (int axis = 0; axis < 3; ++axis) {
      if (separated_on(Vec3::Unit(axis).cross(e), v0, v1, v2, half, scale)) return false;
    }
  }
  return true;
}

Vec3 closest_point_on_triangle(const Vec3& p, const Triangle& tri) {
  // Voronoi-region walk (Ericson, Real-Time Collision Detection 5.1.5).
  const Vec3& a = tri[0];
  const Vec3& b = tri[1];
  const Vec3& c = tri[2];
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 ap = p - a;
  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double denom = d1 - d3;
    return denom > 0.0 ? Vec3(a + (d1 / denom) * ab) : a;
  }

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double denom = d2 - d6;
    return denom > 0.0 ? Vec3(a + (d2 / denom) * ac) : a;
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double denom = (d4 - d3) + (d5 - d6);
    return denom > 0.0 ? Vec3(b + ((d4 - d3) / denom) * (c - b)) : b;
  }

  const double sum = va + vb + vc;
  if (sum <= 0.0) {
    // Degenerate (collinear) triangle that slipped past the region tests:
    // fall back to the closest of the three edges.
    auto seg = [&](const Vec3& s, const Vec3& t) {
      const Vec3 d = t - s;
      const double l2 = d.squaredNorm();
      const double u = l2 > 0.0 ? std::clamp((p - s).dot(d) / l2, 0.0, 1.0) : 0.0;
      return Vec3(s + u * d);
    };
    const Vec3 q0 = seg(a, b);
    const Vec3 q1 = seg(b, c);
    const Vec3 q2 = seg(c, a);
    const double s0 = (q0 - p).squaredNorm();
    const double s1 = (q1 - p).squaredNorm();
    const double s2 = (q2 - p).squaredNorm();
    if (s0 <= s1 && s0 <= s2) return q0;
    return s1 <= s2 ? q1 : q2;
  }
  const double v = vb / sum;
  const double w = vc / sum;
  return a + ab * v + ac * w;
}

}  // namespace watertight
