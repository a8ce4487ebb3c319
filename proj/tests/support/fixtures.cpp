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

#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <utility>

namespace watertight::testing {

namespace {

void append(TriangleMesh& dst, const TriangleMesh& src) {
  const auto base = static_cast<VertexId>(dst.vertices.size());
  dst.vertices.insert(dst.vertices.end(), src.vertices.begin(), src.vertices.end());
  for (const auto& t : src.triangles) dst.triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
}

void add_quad(TriangleMesh& m, VertexId a, VertexId b, VertexId c, VertexId d) {
  m.triangles.push_back({a, b, c});
  m.triangles.push_back({a, c, d});
}

void add_tetra(TriangleMesh& m, VertexId p0, VertexId p1, VertexId p2, VertexId p3) {
  const Vec3& o = m.vertices[p0];
  if ((m.vertices[p1] - o).cross(m.vertices[p2] - o).dot(m.vertices[p3] - o) < 0) std::swap(p2, p3);
  m.triangles.push_back({p0, p2, p1});
  m.triangles.push_back({p0, p1, p3});
  m.triangles.push_back({p0, p3, p2});
  m.triangles.push_back({p1, p2, p3});
}

}  // namespace

TriangleMesh box_mesh(const Vec3& lo, const Vec3& hi) {
  TriangleMesh m;
  for (int i = 0; i < 8; ++i) {
    m.vertices.emplace_back((i & 1) ? hi.x() : lo.x(), (i & 2) ? hi.y() : lo.y(),
                            (i & 4) ? hi.z() : lo.z());
  }
  add_quad(m, 0, 4, 6, 2);
  add_quad(m, 1, 3, 7, 5);
  add_quad(m, 0, 1, 5, 4);
  add_quad(m, 2, 6, 7, 3);
  add_quad(m, 0, 2, 3, 1);
  add_quad(m, 4, 5, 7, 6);
  return m;
}

TriangleMesh icosphere(int level, double radius) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  TriangleMesh m;
  m.vertices = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
                {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  m.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                 {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                 {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                 {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (auto& v : m.vertices) v.normalize();
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<VertexId, VertexId>, VertexId> mid;
    auto midpoint = [&](VertexId a, VertexId b) {
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      m.vertices.push_back((m.vertices[a] + m.vertices[b]).normalized());
      const auto id = static_cast<VertexId>(m.vertices.size() - 1);
      mid.emplace(key, id);
      return id;
    };
    std::vector<TriangleIndices> next;
    next.reserve(m.triangles.size() * 4);
    for (const auto& f : m.triangles) {
      const VertexId a = midpoint(f[0], f[1]);
      const VertexId b = midpoint(f[1], f[2]);
      const VertexId c = midpoint(f[2], f[0]);
      next.push_back({f[0], a, c});
      next.push_back({f[1], b, a});
      next.push_back({f[2], c, b});
      next.push_back({a, b, c});
    }
    m.triangles = std::move(next);
  }
  for (auto& v : m.vertices) v *= radius;
  return m;
}

TriangleMesh torus(double major, double minor, int nu, int nv) {
  TriangleMesh m;
  const double two_pi = 2.0 * std::numbers::pi;
  for (int i = 0; i < nu; ++i) {
    const double u = two_pi * i / nu;
    for (int j = 0; j < nv; ++j) {
      const double v = two_pi * j / nv;
      const double ring = major + minor * std::cos(v);
      m.vertices.emplace_back(ring * std::cos(u), ring * std::sin(u), minor * std::sin(v));
    }
  }
  auto id = [&](int i, int j) { return static_cast<VertexId>((i % nu) * nv + (j % nv)); };
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) add_quad(m, id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
  }
  return m;
}

namespace {

TriangleMesh plane_grid(int n, bool with_hole) {
  TriangleMesh m;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) m.vertices.emplace_back(-1.0 + 2.0 * i / n, -1.0 + 2.0 * j / n, 0.0);
  }
  auto id = [&](int i, int j) { return static_cast<VertexId>(j * (n + 1) + i); };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const bool hole = with_hole && (i == n / 2 - 1 || i == n / 2) && (j == n / 2 - 1 || j == n / 2);
      if (!hole) add_quad(m, id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
    }
  }
  return m;
}

}  // namespace

TriangleMesh open_plane(int n) { return plane_grid(n, false); }

TriangleMesh plane_with_hole(int n) { return plane_grid(n, true); }

TriangleMesh intersecting_cubes() {
  TriangleMesh m = box_mesh({0, 0, 0}, {2, 2, 2});
  append(m, box_mesh({1, 1, 1}, {3, 3, 3}));
  return m;
}

TriangleMesh corner_cubes(double gap) {
  TriangleMesh m = box_mesh({-1, -1, -1}, Vec3::Constant(-gap / 2));
  append(m, box_mesh(Vec3::Constant(gap / 2), {1, 1, 1}));
  return m;
}

TriangleMesh edge_cubes(double gap) {
  TriangleMesh m = box_mesh({-1, -1, -1}, {-gap / 2, -gap / 2, 1});
  append(m, box_mesh({gap / 2, gap / 2, -1}, {1, 1, 1}));
  return m;
}

TriangleMesh thin_sheet() {
  TriangleMesh m;
  const int nu = 32;
  const int nv = 8;
  for (int j = 0; j <= nv; ++j) {
    for (int i = 0; i <= nu; ++i) {
      const double theta = std::numbers::pi * i / nu;
      m.vertices.emplace_back(std::cos(theta), -1.0 + 2.0 * j / nv, std::sin(theta));
    }
  }
  auto id = [&](int i, int j) { return static_cast<VertexId>(j * (nu + 1) + i); };
  for (int j = 0; j < nv; ++j) {
    for (int i = 0; i < nu; ++i) add_quad(m, id(i, j), id(i, j + 1), id(i + 1, j + 1), id(i + 1, j));
  }
  return m;
}

TriangleMesh bowtie_soup() {
  TriangleMesh m;
  m.vertices = {{0, 0, 0}, {-1, 0, 0}, {0, -1, 0}, {0, 0, -1}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  add_tetra(m, 0, 1, 2, 3);
  add_tetra(m, 0, 4, 5, 6);
  return m;
}

TriangleMesh non_oriented_soup() {
  TriangleMesh m = box_mesh({0, 0, 0}, {1, 1, 1});
  for (std::size_t t : {1, 4, 7}) std::swap(m.triangles[t][1], m.triangles[t][2]);
  m.triangles.push_back(m.triangles[0]);
  const auto base = static_cast<VertexId>(m.vertices.size());
  m.vertices.insert(m.vertices.end(), {{1.5, 1.5, 1.5}, {1.9, 1.5, 1.5}, {1.5, 1.9, 1.7}});
  m.triangles.push_back({base, base + 1, base + 2});
  return m;
}

TriangleMesh voxel_cubes(int depth, const std::vector<std::array<int, 3>>& cells, double margin) {
  const double h = 1.1;
  const double leaf = 2.0 * h / static_cast<double>(1 << depth);
  TriangleMesh m;
  for (const auto& c : cells) {
    Vec3 lo;
    Vec3 hi;
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::max(-1.0, -h + c[a] * leaf + margin);
      hi[a] = std::min(1.0, -h + (c[a] + 1) * leaf - margin);
    }
    append(m, box_mesh(lo, hi));
  }
  return m;
}

TriangleMesh random_voxel_soup(std::uint64_t seed, int depth) {
  std::mt19937_64 rng(seed);
  const int n = 1 << depth;
  const double density = std::uniform_real_distribution<double>(0.1, 0.5)(rng);
  std::bernoulli_distribution pick(density);
  std::vector<std::array<int, 3>> cells{{0, 0, 0}, {n - 1, n - 1, n - 1}};
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const bool anchor = (i == 0 && j == 0 && k == 0) || (i == n - 1 && j == n - 1 && k == n - 1);
        if (!anchor && pick(rng)) cells.push_back({i, j, k});
      }
    }
  }
  return voxel_cubes(depth, cells);
}

TriangleMesh voxel_tube() {
  std::vector<std::array<int, 3>> cells;
  for (int k = 0; k < 4; ++k) {
    for (int j = 0; j < 4; ++j) {
      for (int i = 0; i < 4; ++i) {
        if (i == 0 || i == 3 || j == 0 || j == 3) cells.push_back({i, j, k});
      }
    }
  }
  return voxel_cubes(2, cells, 0.001);
}

TriangleMesh reversed(TriangleMesh mesh) {
  for (auto& t : mesh.triangles) std::swap(t[1], t[2]);
  return mesh;
}

std::vector<NamedFixture> fixture_corpus() {
  return {
      {"cube", box_mesh({0, 0, 0}, {2, 2, 2})},
      {"icosphere", icosphere(4)},
      {"torus", torus(1.0, 0.35, 48, 24)},
      {"open_plane", open_plane(8)},
      {"plane_with_hole", plane_with_hole(8)},
      {"intersecting_cubes", intersecting_cubes()},
      {"corner_cubes", corner_cubes(0.004)},
      {"edge_cubes", edge_cubes(0.004)},
      {"thin_sheet", thin_sheet()},
      {"bowtie_soup", bowtie_soup()},
      {"non_oriented_soup", non_oriented_soup()},
      {"voxel_tube", voxel_tube()},
  };
}

}  // namespace watertight::testing
