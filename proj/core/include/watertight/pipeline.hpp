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

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "watertight/extract.hpp"
#include "watertight/mesh.hpp"
#include "watertight/octree.hpp"
#include "watertight/project.hpp"
#include "watertight/verify.hpp"

namespace watertight {

struct PipelineConfig {
  OctreeConfig octree;
  ProjectionParams projection;
  bool project_enabled = true;
  MeshFormat output_format = MeshFormat::kObj;
  bool emit_report = true;
};

struct PipelineDiagnostics {
  int depth = 0;
  std::size_t occupied_leaves = 0;
  std::size_t quads = 0;
  SplitReport splits;
  ProjectionStats projection;
};

struct PipelineResult {
  TriangleMesh mesh;  // in the input's coordinate frame
  ManifoldReport report;
  PipelineDiagnostics diagnostics;
};

/// normalize -> octree -> connections -> signs -> boundary quads -> edge and
/// vertex splits -> triangles -> (projection) -> denormalize -> verify.
///
/// Throws InputError for an invalid config or unusable mesh, and
/// MalformedSurfaceError if the extracted surface is not a closed oriented
/// manifold.
PipelineResult run_pipeline(const TriangleMesh& mesh, const PipelineConfig& cfg);

/// Format named by the path's extension, or `fallback` if it has none.
/// Throws InputError for an unrecognized extension.
MeshFormat output_format(const std::string& path, MeshFormat fallback);

/// Exit codes shared by the CLI and batch summaries.
enum ExitCode : int { kExitOk = 0, kExitInputError = 1, kExitInternalError = 2 };

struct ManifestEntry {
  std::string input;
  std::string output;
};

enum class OnError { kSkip, kAbort };

struct BatchManifest {
  std::vector<ManifestEntry> entries;
  OnError on_error = OnError::kSkip;

  /// {"entries": [{"input": ..., "output": ...}], "on_error": "skip"|"abort"}
  static BatchManifest from_json(const nlohmann::json& j);
  /// Throws InputError for empty paths or duplicate outputs.
  void validate() const;
};

struct BatchOutcome {
  nlohmann::json summary;
  int exit_code = kExitOk;
};

/// Runs every entry independently on up to `jobs` threads. Entries are
/// reported in manifest order regardless of scheduling. With on_error=abort,
/// entries after the first failure are reported as "aborted".
BatchOutcome run_batch(const BatchManifest& manifest, const PipelineConfig& cfg, int jobs = 1);

}  // namespace watertight
