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

#include "watertight/mesh.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "watertight/errors.hpp"

namespace watertight {

namespace {

constexpr double kDegenerateArea = 1e-12;

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::string_view strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

double parse_double(std::string_view tok, std::size_t line_no) {
  double value = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw ParseError(line_no, "invalid number '" + std::string(tok) + "'");
  }
  return value;
}

long long parse_int(std::string_view tok, std::size_t line_no) {
  long long value = 0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError(line_no, "invalid integer '" + std::string(tok) + "'");
  }
  return value;
}

struct PendingFace {
  std::vector<VertexId> corners;
  std::size_t line = 0;
};

// Fan-triangulates every face, validates indices and drops degenerates.
TriangleMesh assemble(std::vector<Vec3> vertices, const std::vector<PendingFace>& faces,
                      LoadStats* stats) {
  TriangleMesh mesh;
  mesh.vertices = std::move(vertices);
  std::size_t dropped = 0;
  for (const auto& face : faces) {
    for (VertexId c : face.corners) {
      if (c >= mesh.vertices.size()) {
        throw ParseError(face.line, "vertex index " + std::to_string(c + 1) + " out of range");
      }
    }
    for (std::size_t k = 1; k + 1 < face.corners.size(); ++k) {
      const TriangleIndices tri{face.corners[0], face.corners[k], face.corners[k + 1]};
      if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
        ++dropped;
        continue;
      }
      const Triangle geom{mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]};
      if (triangle_area(geom) < kDegenerateArea) {
        ++dropped;
        continue;
      }
      mesh.triangles.push_back(tri);
    }
  }
  if (stats) stats->dropped_degenerate = dropped;
  if (mesh.triangles.empty()) throw EmptyMeshError();
  return mesh;
}

TriangleMesh load_obj(std::istream& in, LoadStats* stats) {
  std::vector<Vec3> vertices;
  std::vector<PendingFace> faces;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto tokens = split_ws(strip_comment(raw));
    if (tokens.empty()) continue;
    const std::string_view tag = tokens[0];
    if (tag == "v") {
      if (tokens.size() < 4) throw ParseError(line_no, "vertex needs 3 coordinates");
      vertices.emplace_back(parse_double(tokens[1], line_no), parse_double(tokens[2], line_no),
                            parse_double(tokens[3], line_no));
    } else if (tag == "f") {
      if (tokens.size() < 4) throw ParseError(line_no, "face needs at least 3 vertices");
      PendingFace face;
      face.line = line_no;
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        // Only the position index matters: "i", "i/t", "i//n", "i/t/n".
        const std::string_view ref = tokens[i].substr(0, tokens[i].find('/'));
        const long long idx = parse_int(ref, line_no);
        long long zero_based = 0;
        if (idx > 0) {
          zero_based = idx - 1;
        } else if (idx < 0) {
          zero_based = static_cast<long long>(vertices.size()) + idx;
          if (zero_based < 0) throw ParseError(line_no, "relative index before first vertex");
        } else {
          throw ParseError(line_no, "vertex index 0 is invalid");
        }
        if (zero_based > std::numeric_limits<VertexId>::max()) {
          throw ParseError(line_no, "vertex index too large");
        }
        face.corners.push_back(static_cast<VertexId>(zero_based));
      }
      faces.push_back(std::move(face));
    }
    // vn, vt, o, g, s, usemtl, mtllib, l, ... are ignored.
  }
  return assemble(std::move(vertices), faces, stats);
}

TriangleMesh load_off(std::istream& in, LoadStats* stats) {
  std::string raw;
  std::size_t line_no = 0;
  // Yields the next non-empty, comment-stripped line's tokens.
  // Views point into `raw` and stay valid until the next call.
  auto next_tokens = [&]() -> std::vector<std::string_view> {
    while (std::getline(in, raw)) {
      ++line_no;
      auto tokens = split_ws(strip_comment(raw));
      if (!tokens.empty()) return tokens;
    }
    return {};
  };

  auto tokens = next_tokens();
  if (tokens.empty() || tokens[0] != "OFF") throw ParseError(line_no, "missing OFF header");
  tokens.erase(tokens.begin());
  if (tokens.empty()) tokens = next_tokens();
  if (tokens.size() < 2) throw ParseError(line_no, "expected vertex and face counts");
  const long long nv = parse_int(tokens[0], line_no);
  const long long nf = parse_int(tokens[1], line_no);
  if (nv < 0 || nf < 0) throw ParseError(line_no, "negative element count");

  std::vector<Vec3> vertices;
  vertices.reserve(static_cast<std::size_t>(nv));
  for (long long i = 0; i < nv; ++i) {
    tokens = next_tokens();
    if (tokens.size() < 3) throw ParseError(line_no, "vertex needs 3 coordinates");
    vertices.emplace_back(parse_double(tokens[0], line_no), parse_double(tokens[1], line_no),
                          parse_double(tokens[2], line_no));
  }
  std::vector<PendingFace> faces;
  faces.reserve(static_cast<std::size_t>(nf));
  for (long long i = 0; i < nf; ++i) {
    tokens = next_tokens();
    if (tokens.empty()) throw ParseError(line_no, "unexpected end of file in face block");
    const long long n = parse_int(tokens[0], line_no);
    if (n < 3 || static_cast<std::size_t>(n) + 1 > tokens.size()) {
      throw ParseError(line_no, "face record has wrong vertex count");
    }
    PendingFace face;
    face.line = line_no;
    for (long long k = 1; k <= n; ++k) {
      const long long idx = parse_int(tokens[static_cast<std::size_t>(k)], line_no);
      if (idx < 0 || idx > std::numeric_limits<VertexId>::max()) {
        throw ParseError(line_no, "vertex index out of range");
      }
      face.corners.push_back(static_cast<VertexId>(idx));
    }
    // Trailing tokens are per-face colors.
    faces.push_back(std::move(face));
  }
  return assemble(std::move(vertices), faces, stats);
}

void append_double(std::string& out, double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, ptr);
}

}  // namespace

AABB TriangleMesh::bounding_box() const {
  AABB box;
  if (vertices.empty()) return box;
  box.min = box.max = vertices.front();
  for (const auto& v : vertices) {
    box.min = box.min.cwiseMin(v);
    box.max = box.max.cwiseMax(v);
  }
  return box;
}

std::optional<MeshFormat> format_from_name(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "obj") return MeshFormat::kObj;
  if (lower == "off") return MeshFormat::kOff;
  return std::nullopt;
}

std::optional<MeshFormat> format_from_path(std::string_view path) {
  const auto dot = path.rfind('.');
  if (dot == std::string_view::npos) return std::nullopt;
  return format_from_name(path.substr(dot + 1));
}

std::string_view format_name(MeshFormat format) {
  return format == MeshFormat::kObj ? "obj" : "off";
}

TriangleMesh load_mesh(std::istream& in, MeshFormat format, LoadStats* stats) {
  return format == MeshFormat::kObj ? load_obj(in, stats) : load_off(in, stats);
}

TriangleMesh load_mesh_file(const std::string& path, MeshFormat format, LoadStats* stats) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return load_mesh(in, format, stats);
}

void write_mesh(std::ostream& out, const TriangleMesh& mesh, MeshFormat format) {
  std::string text;
  text.reserve(mesh.vertices.size() * 48 + mesh.triangles.size() * 24);
  if (format == MeshFormat::kOff) {
    text += "OFF\n";
    text += std::to_string(mesh.vertices.size()) + ' ' + std::to_string(mesh.triangles.size()) +
            " 0\n";
  }
  for (const auto& v : mesh.vertices) {
    if (format == MeshFormat::kObj) text += "v ";
    append_double(text, v.x());
    text += ' ';
    append_double(text, v.y());
    text += ' ';
    append_double(text, v.z());
    text += '\n';
  }
  for (const auto& t : mesh.triangles) {
    if (format == MeshFormat::kObj) {
      text += "f " + std::to_string(t[0] + 1) + ' ' + std::to_string(t[1] + 1) + ' ' +
              std::to_string(t[2] + 1) + '\n';
    } else {
      text += "3 " + std::to_string(t[0]) + ' ' + std::to_string(t[1]) + ' ' +
              std::to_string(t[2]) + '\n';
    }
  }
  out << text;
}

void write_mesh_file(const std::string& path, const TriangleMesh& mesh, MeshFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  write_mesh(out, mesh, format);
  if (!out) throw InputError("failed writing '" + path + "'");
}

std::pair<TriangleMesh, NormalizationTransform> normalize(const TriangleMesh& mesh) {
  if (mesh.vertices.empty() || mesh.triangles.empty()) throw EmptyMeshError();
  const AABB box = mesh.bounding_box();
  const double extent = (box.max - box.min).maxCoeff();
  if (!(extent > 0.0)) throw ZeroExtentError();

  NormalizationTransform t;
  t.translation = -box.center();
  t.scale = 2.0 / extent;

  TriangleMesh out = mesh;
  for (auto& v : out.vertices) v = t.apply(v);
  return {std::move(out), t};
}

TriangleMesh denormalize(const TriangleMesh& mesh, const NormalizationTransform& t) {
  TriangleMesh out = mesh;
  for (auto& v : out.vertices) v = t.invert(v);
  return out;
}

}  // namespace watertight
