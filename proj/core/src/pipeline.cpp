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

#include "watertight/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <thread>

#include "watertight/errors.hpp"
#include "watertight/signfield.hpp"

namespace watertight {

PipelineResult run_pipeline(const TriangleMesh& input, const PipelineConfig& cfg) {
  try {
    cfg.octree.validate();
    if (cfg.project_enabled) cfg.projection.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  auto [normalized, transform] = normalize(input);

  const Octree tree = build_octree(normalized, cfg.octree);
  const ConnectionGraph graph = build_connections(tree);
  const SignField signs = classify_cells(tree, graph);

  PipelineResult result;
  result.diagnostics.depth = tree.max_depth();
  result.diagnostics.occupied_leaves = tree.occupied_leaves().size();

  QuadSurface quads = extract_boundary_faces(tree, signs, graph);
  result.diagnostics.quads = quads.quads.size();
  SplitResult edges = split_nonmanifold_edges(std::move(quads));
  SplitResult vertices = split_nonmanifold_vertices(std::move(edges.surface));
  result.diagnostics.splits.edge_splits = edges.report.edge_splits;
  result.diagnostics.splits.vertex_splits = vertices.report.vertex_splits;

  TriangleMesh surface = triangulate(vertices.surface);
  const ManifoldReport extracted = check_manifold(surface);
  if (!extracted.watertight()) {
    throw MalformedSurfaceError(
        "extracted surface is not a closed oriented manifold (bad edges: " +
        std::to_string(extracted.bad_edges) +
        ", bad vertices: " + std::to_string(extracted.bad_vertices) + ")");
  }

  NearestTriangleQuery query(tree);
  if (cfg.project_enabled) {
    surface = project_to_surface(surface, query, cfg.projection, &result.diagnostics.projection);
  }
  const FlipStats flips = count_face_flips(surface, query);

  result.mesh = denormalize(surface, transform);
  result.report = check_manifold(result.mesh);
  result.report.flip_count = flips.flip_count;
  result.report.flip_rate = flips.flip_rate;
  return result;
}

MeshFormat output_format(const std::string& path, MeshFormat fallback) {
  if (!std::filesystem::path(path).has_extension()) return fallback;
  const auto format = format_from_path(path);
  if (!format) throw InputError("unknown mesh format for '" + path + "' (expected .obj or .off)");
  return *format;
}

BatchManifest BatchManifest::from_json(const nlohmann::json& j) {
  BatchManifest m;
  try {
    for (const auto& e : j.at("entries")) {
      m.entries.push_back({e.at("input").get<std::string>(), e.at("output").get<std::string>()});
    }
    if (j.contains("on_error")) {
      const auto policy = j.at("on_error").get<std::string>();
      if (policy == "skip") {
        m.on_error = OnError::kSkip;
      } else if (policy == "abort") {
        m.on_error = OnError::kAbort;
      } else {
        throw InputError("on_error must be \"skip\" or \"abort\"");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed manifest: ") + e.what());
  }
  m.validate();
  return m;
}

void BatchManifest::validate() const {
  std::set<std::string> outputs;
  for (const auto& e : entries) {
    if (e.input.empty() || e.output.empty()) throw InputError("manifest paths must be non-empty");
    if (!outputs.insert(e.output).second) {
      throw InputError("duplicate manifest output '" + e.output + "'");
    }
  }
}

namespace {

nlohmann::json run_entry(const ManifestEntry& entry, const PipelineConfig& cfg) {
  nlohmann::json rec;
  rec["input"] = entry.input;
  rec["output"] = entry.output;
  try {
    const auto in_format = format_from_path(entry.input);
    if (!in_format) throw InputError("unknown mesh format for '" + entry.input + "'");
    const MeshFormat out_format = output_format(entry.output, cfg.output_format);
    LoadStats stats;
    const TriangleMesh mesh = load_mesh_file(entry.input, *in_format, &stats);
    const PipelineResult result = run_pipeline(mesh, cfg);
    write_mesh_file(entry.output, result.mesh, out_format);
    rec["status"] = "ok";
    rec["exit_code"] = kExitOk;
    rec["dropped_degenerate"] = stats.dropped_degenerate;
    rec["report"] = to_json(result.report);
  } catch (const InputError& e) {
    rec["status"] = "input_error";
    rec["exit_code"] = kExitInputError;
    rec["error"] = e.what();
  } catch (const std::exception& e) {
    rec["status"] = "internal_error";
    rec["exit_code"] = kExitInternalError;
    rec["error"] = e.what();
  }
  return rec;
}

}  // namespace

BatchOutcome run_batch(const BatchManifest& manifest, const PipelineConfig& cfg, int jobs) {
  manifest.validate();
  const std::size_t n = manifest.entries.size();
  std::vector<nlohmann::json> records(n);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> first_failure{n};

  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      if (manifest.on_error == OnError::kAbort && first_failure.load() < i) continue;
      records[i] = run_entry(manifest.entries[i], cfg);
      if (records[i]["exit_code"].get<int>() != kExitOk) {
        std::size_t seen = first_failure.load();
        while (i < seen && !first_failure.compare_exchange_weak(seen, i)) {
        }
      }
    }
  };
  const int threads = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(n, 1)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  BatchOutcome outcome;
  nlohmann::json entries = nlohmann::json::array();
  std::size_t succeeded = 0;
  std::size_t failed = 0;
  std::size_t manifold_pass = 0;
  std::size_t flip_total = 0;
  double flip_rate_sum = 0.0;
  double flip_rate_max = 0.0;
  const bool aborting = manifest.on_error == OnError::kAbort && first_failure.load() < n;
  for (std::size_t i = 0; i < n; ++i) {
    if (aborting && i > first_failure.load()) {
      entries.push_back({{"input", manifest.entries[i].input},
                         {"output", manifest.entries[i].output},
                         {"status", "aborted"}});
      continue;
    }
    const auto& rec = records[i];
    if (rec["status"] == "ok") {
      ++succeeded;
      const ManifoldReport r = report_from_json(rec["report"]);
      if (r.watertight()) ++manifold_pass;
      flip_total += r.flip_count;
      flip_rate_sum += r.flip_rate;
      flip_rate_max = std::max(flip_rate_max, r.flip_rate);
    } else {
      ++failed;
      outcome.exit_code = std::max(outcome.exit_code, rec["exit_code"].get<int>());
    }
    entries.push_back(rec);
  }
  if (manifest.on_error == OnError::kSkip) outcome.exit_code = kExitOk;

  auto& s = outcome.summary;
  s["total"] = n;
  s["succeeded"] = succeeded;
  s["failed"] = failed;
  s["aborted"] = aborting;
  s["manifold_pass"] = manifold_pass;
  s["flip_count_total"] = flip_total;
  s["mean_flip_rate"] = succeeded > 0 ? flip_rate_sum / static_cast<double>(succeeded) : 0.0;
  s["max_flip_rate"] = flip_rate_max;
  s["entries"] = std::move(entries);
  return outcome;
}

}  // namespace watertight
