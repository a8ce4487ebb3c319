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

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "watertight/extract.hpp"
#include "watertight/pipeline.hpp"
#include "watertight/project.hpp"
#include "watertight/signfield.hpp"
#include "watertight/verify.hpp"

namespace wt = watertight;

namespace {

const wt::TriangleMesh& sphere() {
  static const wt::TriangleMesh m = wt::normalize(wt::testing::icosphere(4)).first;
  return m;
}

wt::OctreeConfig at_depth(int depth) {
  wt::OctreeConfig cfg;
  cfg.max_depth = depth;
  return cfg;
}

void BM_BuildOctree(benchmark::State& state) {
  const wt::OctreeConfig cfg = at_depth(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(wt::build_octree(sphere(), cfg));
}
BENCHMARK(BM_BuildOctree)->DenseRange(5, 8)->Unit(benchmark::kMillisecond);

void BM_SignsAndExtraction(benchmark::State& state) {
  const wt::Octree tree = wt::build_octree(sphere(), at_depth(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    const wt::ConnectionGraph graph = wt::build_connections(tree);
    const wt::SignField signs = wt::classify_cells(tree, graph);
    benchmark::DoNotOptimize(wt::triangulate(
        wt::split_nonmanifold_vertices(
            wt::split_nonmanifold_edges(wt::extract_boundary_faces(tree, signs, graph)).surface)
            .surface));
  }
}
BENCHMARK(BM_SignsAndExtraction)->DenseRange(5, 8)->Unit(benchmark::kMillisecond);

void BM_Pipeline(benchmark::State& state) {
  wt::PipelineConfig cfg;
  cfg.octree.max_depth = static_cast<int>(state.range(0));
  cfg.project_enabled = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(wt::run_pipeline(wt::testing::icosphere(4), cfg));
}
BENCHMARK(BM_Pipeline)
    ->ArgsProduct({{5, 6, 7, 8}, {0, 1}})
    ->ArgNames({"depth", "project"})
    ->Unit(benchmark::kMillisecond);

void BM_VoxelSoup(benchmark::State& state) {
  wt::PipelineConfig cfg;
  cfg.octree.max_depth = 4;
  const wt::TriangleMesh soup = wt::testing::random_voxel_soup(7);
  for (auto _ : state) benchmark::DoNotOptimize(wt::run_pipeline(soup, cfg));
}
BENCHMARK(BM_VoxelSoup)->Unit(benchmark::kMillisecond);

std::vector<wt::Vec3> near_surface_points(std::size_t n) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> shell(0.95, 1.05);
  std::vector<wt::Vec3> pts(n);
  for (auto& p : pts) p = wt::Vec3(gauss(rng), gauss(rng), gauss(rng)).normalized() * shell(rng);
  return pts;
}

void BM_NearestTriangle(benchmark::State& state) {
  const wt::Octree tree = wt::build_octree(sphere(), at_depth(8));
  const auto pts = near_surface_points(4096);
  for (auto _ : state) {
    for (const auto& p : pts) benchmark::DoNotOptimize(wt::nearest_triangle(p, tree));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(pts.size()));
}
BENCHMARK(BM_NearestTriangle);

void BM_NearestTriangleQuery(benchmark::State& state) {
  const wt::Octree tree = wt::build_octree(sphere(), at_depth(8));
  const auto pts = near_surface_points(4096);
  wt::NearestTriangleQuery query(tree);
  // Timed passes reuse the cell lists built here.
  for (const auto& p : pts) query(p);
  for (auto _ : state) {
    for (const auto& p : pts) benchmark::DoNotOptimize(query(p));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(pts.size()));
}
BENCHMARK(BM_NearestTriangleQuery);

void BM_CheckManifold(benchmark::State& state) {
  wt::PipelineConfig cfg;
  cfg.octree.max_depth = 8;
  cfg.project_enabled = false;
  const wt::TriangleMesh out = wt::run_pipeline(sphere(), cfg).mesh;
  for (auto _ : state) benchmark::DoNotOptimize(wt::check_manifold(out));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(out.triangles.size()));
}
BENCHMARK(BM_CheckManifold)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
