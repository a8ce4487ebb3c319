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
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "watertight/geometry.hpp"

namespace watertight {

using VertexId = std::uint32_t;
using TriangleIndices = std::array<VertexId, 3>;

/// Indexed triangle soup. Triangles wind counter-clockwise when seen from the
/// outside.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<TriangleIndices> triangles;

  Triangle triangle(std::size_t t) const {
    const auto& f = triangles[t];
    return {vertices[f[0]], vertices[f[1]], vertices[f[2]]};
  }

  AABB bounding_box() const;

  bool operator==(const TriangleMesh&) const = default;
};

enum class MeshFormat { kObj, kOff };

std::optional<MeshFormat> format_from_name(std::string_view name);
std::optional<MeshFormat> format_from_path(std::string_view path);
std::string_view format_name(MeshFormat format);

struct LoadStats {
  std::size_t dropped_degenerate = 0;
};

/// Parses an ASCII OBJ or OFF stream. Polygons are fan-triangulated and
/// degenerate triangles (repeated index, or area below 1e-12) are dropped.
/// Throws ParseError on malformed records and EmptyMeshError when no triangle
/// survives.
TriangleMesh load_mesh(std::istream& in, MeshFormat format, LoadStats* stats = nullptr);
TriangleMesh load_mesh_file(const std::string& path, MeshFormat format,
                            LoadStats* stats = nullptr);

/// Writes coordinates in shortest round-trip form, so write/load/write is a
/// fixed point.
void write_mesh(std::ostream& out, const TriangleMesh& mesh, MeshFormat format);
void write_mesh_file(const std::string& path, const TriangleMesh& mesh, MeshFormat format);

/// normalized = (original + translation) * scale
struct NormalizationTransform {
  Vec3 translation = Vec3::Zero();
  double scale = 1.0;

  Vec3 apply(const Vec3& p) const { return (p + translation) * scale; }
  Vec3 invert(const Vec3& p) const { return p / scale - translation; }
};

/// Centers the bounding box at the origin and scales uniformly so the widest
/// axis spans exactly [-1, 1]. Throws ZeroExtentError for coincident vertices.
std::pair<TriangleMesh, NormalizationTransform> normalize(const TriangleMesh& mesh);

TriangleMesh denormalize(const TriangleMesh& mesh, const NormalizationTransform& t);

}  // namespace watertight
