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
#include <string>
#include <vector>

#include "watertight/mesh.hpp"

namespace watertight::testing {

/// Axis-aligned box with outward counter-clockwise faces.
TriangleMesh box_mesh(const Vec3& lo, const Vec3& hi);
/// Subdivided icosahedron projected to a sphere; level 0 has 20 faces.
TriangleMesh icosphere(int level, double radius = 1.0);
TriangleMesh torus(double major, double minor, int nu, int nv);
/// Square n x n grid in the z = 0 plane spanning [-1, 1]^2, normals +z.
TriangleMesh open_plane(int n);
/// open_plane with the central quads removed (n even, hole of 2 x 2 quads).
TriangleMesh plane_with_hole(int n);
/// Two overlapping boxes; surfaces cross each other.
TriangleMesh intersecting_cubes();
/// Two boxes diagonal to each other whose corners are `gap` apart in every
/// axis; with a gap below the cell size they meet at one lattice vertex.
TriangleMesh corner_cubes(double gap);
/// Two boxes sharing the z extent whose edges along z are `gap` apart in x
/// and y; with a gap below the cell size they meet along a lattice edge.
TriangleMesh edge_cubes(double gap);
/// Single-layer curved strip (half of a cylinder wall), open.
TriangleMesh thin_sheet();
/// Two tetrahedra sharing exactly one vertex index.
TriangleMesh bowtie_soup();
/// Box with some faces reversed, one face duplicated and a stray triangle.
TriangleMesh non_oriented_soup();

/// Shrunken cubes in chosen cells of a 2^depth lattice over the default
/// root [-1.1, 1.1]^3. Each cube is the cell box shrunk by `margin` and
/// clipped to [-1, 1]^3; the caller must include cells touching both ends of
/// every axis so that normalization is the identity.
TriangleMesh voxel_cubes(int depth, const std::vector<std::array<int, 3>>& cells,
                         double margin = 0.01);
/// voxel_cubes over a random cell set (density in [0.1, 0.5]) plus anchor
/// cells (0,0,0) and (n-1,n-1,n-1).
TriangleMesh random_voxel_soup(std::uint64_t seed, int depth = 4);
/// Square tube of voxels at depth 2: the boundary ring of the 4 x 4 xy grid,
/// all four z layers. Its outer surface is a torus. The 0.002 gaps between
/// neighboring voxels are below the leaf size up to depth 10.
TriangleMesh voxel_tube();

TriangleMesh reversed(TriangleMesh mesh);

struct NamedFixture {
  std::string name;
  TriangleMesh mesh;
};

/// Every named fixture shape (voxel soups excluded).
std::vector<NamedFixture> fixture_corpus();

}  // namespace watertight::testing
