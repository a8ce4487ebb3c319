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

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "dense_grid.hpp"
#include "fixtures.hpp"
#include "watertight/errors.hpp"
#include "watertight/octree.hpp"

namespace watertight {
namespace {

using testing::DenseGrid;

OctreeConfig at_depth(int depth) {
  OctreeConfig cfg;
  cfg.max_depth = depth;
  return cfg;
}

std::vector<std::array<int, 3>> leaf_coords(const Octree& tree) {
  std::vector<std::array<int, 3>> out;
  for (NodeId id : tree.occupied_leaves()) {
    const auto& c = tree.node(id).coord;
    out.push_back({c[0], c[1], c[2]});
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Checks every slot and every occupied pair against the uniform grid.
void expect_connections_match_grid(const Octree& tree, const ConnectionGraph& graph,
                                   const DenseGrid& grid) {
  const int depth = tree.max_depth();
  std::size_t expected_edges = 0;
  for (NodeId leaf : tree.occupied_leaves()) {
    const CellCoord c = tree.node(leaf).coord;
    for (Direction d : kAllDirections) {
      const CellCoord f = step(c, d);
      const NodeId got = graph.neighbor(tree.leaf_ordinal(leaf), d);
      if (!grid.in_range(f[0], f[1], f[2])) {
        EXPECT_EQ(got, kNoNode);
        continue;
      }
      ASSERT_NE(got, kNoNode);
      const OctreeNode& n = tree.node(got);
      const int shift = depth - n.depth;
      for (int a = 0; a < 3; ++a) EXPECT_EQ(f[a] >> shift, n.coord[a]);
      const bool occupied = grid.label(f[0], f[1], f[2]) == DenseGrid::kOccupied;
      EXPECT_EQ(n.occupied(), occupied);
      if (occupied) {
        EXPECT_EQ(n.depth, depth);
        EXPECT_FALSE(n.has_children());
        if (leaf < got) ++expected_edges;
      } else {
        ++expected_edges;
      }
    }
  }
  EXPECT_EQ(graph.edges().size(), expected_edges);

  // Occupied-occupied pairs, each once.
  std::vector<std::pair<std::array<int, 3>, std::array<int, 3>>> pairs;
  std::set<std::pair<NodeId, int>> seen;
  for (const Connection& e : graph.edges()) {
    EXPECT_TRUE(seen.insert({e.from, index_of(e.direction)}).second);
    EXPECT_TRUE(tree.node(e.from).occupied());
    if (!tree.node(e.to).occupied()) continue;
    EXPECT_LT(e.from, e.to);
    auto a = tree.node(e.from).coord;
    auto b = tree.node(e.to).coord;
    if (!is_positive(e.direction)) std::swap(a, b);
    pairs.push_back({{a[0], a[1], a[2]}, {b[0], b[1], b[2]}});
  }
  std::sort(pairs.begin(), pairs.end());
  EXPECT_EQ(pairs, grid.occupied_pairs());
}

TEST(OctreeConfig, DefaultDepthIsEight) {
  EXPECT_EQ(OctreeConfig{}.resolved_depth(), 8);
  OctreeConfig cfg;
  cfg.target_leaf_size = 2.2 / 16;
  EXPECT_EQ(cfg.resolved_depth(), 4);
  cfg.target_leaf_size = 2.2 / 16 - 1e-6;
  EXPECT_EQ(cfg.resolved_depth(), 5);
}

TEST(OctreeConfig, RejectsBadValues) {
  OctreeConfig cfg;
  cfg.root_half_extent = 1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = OctreeConfig{};
  cfg.target_leaf_size = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = OctreeConfig{};
  cfg.max_depth = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.max_depth = 21;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(BuildOctree, SingleTriangleMatchesDenseScan) {
  TriangleMesh m;
  m.vertices = {{-0.5, -0.5, 0}, {0.5, -0.5, 0}, {0, 0.5, 0}};
  m.triangles = {{0, 1, 2}};
  const Octree tree = build_octree(m, at_depth(4));
  EXPECT_EQ(leaf_coords(tree), DenseGrid(m, 4).occupied_cells());
  EXPECT_EQ(tree.leaf_size(), 2.2 / 16);
}

TEST(BuildOctree, TinyTriangleIsLocal) {
  TriangleMesh m;
  m.vertices = {{1e-4, 1e-4, 1e-4}, {2e-4, 1e-4, 1e-4}, {1e-4, 2e-4, 1e-4}};
  m.triangles = {{0, 1, 2}};
  const Octree tree = build_octree(m, OctreeConfig{});
  EXPECT_EQ(tree.occupied_leaves().size(), 1u);
  std::size_t occupied_internal = 0;
  for (NodeId id = 0; id < tree.node_count(); ++id) {
    occupied_internal += tree.node(id).occupied() && tree.node(id).has_children() ? 1 : 0;
  }
  EXPECT_EQ(occupied_internal, 8u);  // one per level above the leaves

  // A triangle through the lattice point at the origin touches all 8 cells.
  TriangleMesh corner;
  corner.vertices = {{0, 0, 0}, {1e-4, 0, 0}, {0, 1e-4, 0}};
  corner.triangles = {{0, 1, 2}};
  EXPECT_EQ(build_octree(corner, OctreeConfig{}).occupied_leaves().size(), 8u);
}

TEST(BuildOctree, TrianglesOfChildrenAreSubsetsOfParent) {
  const auto [sphere, t] = normalize(testing::icosphere(2));
  const Octree tree = build_octree(sphere, at_depth(5));
  for (NodeId id = 0; id < tree.node_count(); ++id) {
    const auto& n = tree.node(id);
    EXPECT_EQ(n.occupied(), !tree.triangles(id).empty());
    if (!n.has_children()) continue;
    const auto parent = tree.triangles(id);
    for (int o = 0; o < 8; ++o) {
      const NodeId c = tree.child(id, o);
      EXPECT_EQ(tree.node(c).depth, n.depth + 1);
      for (std::uint32_t tri : tree.triangles(c)) {
        EXPECT_TRUE(std::binary_search(parent.begin(), parent.end(), tri));
      }
    }
  }
}

TEST(BuildOctree, CorpusOccupancyMatchesDenseScan) {
  for (const auto& f : testing::fixture_corpus()) {
    const auto [m, t] = normalize(f.mesh);
    for (int depth : {3, 5}) {
      const Octree tree = build_octree(m, at_depth(depth));
      EXPECT_EQ(leaf_coords(tree), DenseGrid(m, depth).occupied_cells()) << f.name << " depth " << depth;
    }
  }
}

TEST(BuildOctree, CubeSurfaceScalesWithArea) {
  const auto [cube, t] = normalize(testing::box_mesh({0, 0, 0}, {1, 1, 1}));
  std::map<int, double> counts;
  for (int depth : {6, 7, 8}) {
    counts[depth] = static_cast<double>(build_octree(cube, at_depth(depth)).occupied_leaves().size());
  }
  for (int depth : {6, 7}) {
    const double ratio = counts[depth + 1] / counts[depth];
    EXPECT_GE(ratio, 3.0);
    EXPECT_LE(ratio, 5.0);
  }
}

TEST(BuildOctree, LocateAndLookup) {
  const auto [m, t] = normalize(testing::icosphere(2));
  const Octree tree = build_octree(m, at_depth(5));
  for (NodeId leaf : tree.occupied_leaves()) {
    const CellCoord c = tree.node(leaf).coord;
    EXPECT_EQ(tree.find_occupied_leaf(c), leaf);
    EXPECT_EQ(tree.locate(5, c), leaf);
    EXPECT_EQ(tree.fine_cell_of(tree.bbox(leaf).center()), c);
  }
  EXPECT_EQ(tree.find_occupied_leaf({16, 16, 16}), kNoNode);  // sphere center is empty
  const NodeId coarse = tree.locate(5, {16, 16, 16});
  EXPECT_FALSE(tree.node(coarse).occupied());
  EXPECT_LT(tree.node(coarse).depth, 5);
  EXPECT_THROW(build_octree(TriangleMesh{}, OctreeConfig{}), EmptyMeshError);
}

TEST(Connections, IsolatedLeafHasSixEmptyNeighbors) {
  // A small closed box inside cell (5, 6, 7) at depth 4.
  const double leaf = 2.2 / 16;
  const Vec3 lo(-1.1 + 5.3 * leaf, -1.1 + 6.3 * leaf, -1.1 + 7.3 * leaf);
  const Octree tree = build_octree(testing::box_mesh(lo, lo + Vec3::Constant(0.4 * leaf)), at_depth(4));
  ASSERT_EQ(tree.occupied_leaves().size(), 1u);
  const ConnectionGraph graph = build_connections(tree);
  EXPECT_EQ(graph.edges().size(), 6u);
  for (const Connection& c : graph.edges()) EXPECT_FALSE(tree.node(c.to).occupied());
}

TEST(Connections, AdjacentPairStoredOnce) {
  const double leaf = 2.2 / 16;
  const Vec3 lo(-1.1 + 5.3 * leaf, -1.1 + 6.3 * leaf, -1.1 + 7.3 * leaf);
  TriangleMesh m = testing::box_mesh(lo, lo + Vec3::Constant(0.4 * leaf));
  const TriangleMesh other = testing::box_mesh(lo + Vec3(leaf, 0, 0), lo + Vec3(1.4 * leaf, 0.4 * leaf, 0.4 * leaf));
  for (const auto& tri : other.triangles) m.triangles.push_back({tri[0] + 8, tri[1] + 8, tri[2] + 8});
  m.vertices.insert(m.vertices.end(), other.vertices.begin(), other.vertices.end());

  const Octree tree = build_octree(m, at_depth(4));
  ASSERT_EQ(tree.occupied_leaves().size(), 2u);
  const ConnectionGraph graph = build_connections(tree);
  EXPECT_EQ(graph.edges().size(), 11u);
  std::size_t occ_occ = 0;
  for (const Connection& c : graph.edges()) {
    if (!tree.node(c.to).occupied()) continue;
    ++occ_occ;
    EXPECT_EQ(axis_of(c.direction), 0);
  }
  EXPECT_EQ(occ_occ, 1u);
  const NodeId a = tree.occupied_leaves()[0];
  const NodeId b = tree.occupied_leaves()[1];
  const bool a_is_left = tree.node(a).coord[0] == 5;
  EXPECT_EQ(graph.neighbor(0, a_is_left ? Direction::kPosX : Direction::kNegX), b);
  EXPECT_EQ(graph.neighbor(1, a_is_left ? Direction::kNegX : Direction::kPosX), a);
}

TEST(Connections, RandomVoxelPatternsMatchDenseGrid) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto [m, t] = normalize(testing::random_voxel_soup(seed));
    const Octree tree = build_octree(m, at_depth(4));
    expect_connections_match_grid(tree, build_connections(tree), DenseGrid(m, 4));
  }
}

TEST(Connections, CorpusMatchesDenseGrid) {
  for (const auto& f : testing::fixture_corpus()) {
    SCOPED_TRACE(f.name);
    const auto [m, t] = normalize(f.mesh);
    for (int depth : {4, 5}) {
      const Octree tree = build_octree(m, at_depth(depth));
      expect_connections_match_grid(tree, build_connections(tree), DenseGrid(m, depth));
    }
  }
}

TEST(ConnectNodes, EmptyPairAddsNothing) {
  const auto [m, t] = normalize(testing::icosphere(1));
  const Octree tree = build_octree(m, at_depth(4));
  // Root child 0 is occupied; find two empty sibling nodes somewhere.
  for (NodeId id = 0; id < tree.node_count(); ++id) {
    if (!tree.node(id).has_children()) continue;
    for (int o = 0; o < 8; o += 2) {
      const NodeId l = tree.child(id, o);
      const NodeId r = tree.child(id, o + 1);
      if (tree.node(l).occupied() || tree.node(r).occupied()) continue;
      std::vector<Connection> out;
      connect_nodes(tree, l, r, 0, out);
      EXPECT_TRUE(out.empty());
      return;
    }
  }
  FAIL() << "no empty sibling pair";
}

TEST(ConnectNodes, SubdividedAgainstEmptyReplicatesCoarseNode) {
  // Occupied cell at depth 4 inside root octant 0; its depth-1 neighbor across
  // +x (octant 1) is empty and must receive every facing leaf.
  const double leaf = 2.2 / 16;
  const Vec3 lo(-1.1 + 7.3 * leaf, -1.1 + 3.3 * leaf, -1.1 + 2.3 * leaf);
  const Octree tree = build_octree(testing::box_mesh(lo, lo + Vec3::Constant(0.4 * leaf)), at_depth(4));
  const NodeId left = tree.child(tree.root(), 0);
  const NodeId right = tree.child(tree.root(), 1);
  ASSERT_TRUE(tree.node(left).occupied());
  ASSERT_FALSE(tree.node(right).occupied());
  std::vector<Connection> out;
  connect_nodes(tree, left, right, 0, out);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].from, tree.occupied_leaves()[0]);
  EXPECT_EQ(out[0].to, right);
  EXPECT_EQ(out[0].direction, Direction::kPosX);
}

TEST(DumpOctree, IsSortedAndComplete) {
  const auto [m, t] = normalize(testing::icosphere(1));
  const Octree tree = build_octree(m, at_depth(3));
  const ConnectionGraph graph = build_connections(tree);
  std::ostringstream out;
  dump_octree(out, tree, graph);
  std::size_t lines = 0;
  std::istringstream in(out.str());
  for (std::string line; std::getline(in, line);) ++lines;
  EXPECT_EQ(lines, tree.occupied_leaves().size() + graph.edges().size());
}

}  // namespace
}  // namespace watertight
