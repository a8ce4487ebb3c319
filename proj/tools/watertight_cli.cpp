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

// watertight: convert meshes to closed oriented manifolds.
//
//   watertight convert --input in.obj --output out.obj [--report r.json]
//   watertight batch --manifest m.json [--jobs N] [--summary s.json]
//   watertight check --input mesh.obj --report r.json

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "watertight/errors.hpp"
#include "watertight/mesh.hpp"
#include "watertight/pipeline.hpp"
#include "watertight/verify.hpp"

namespace wt = watertight;

namespace {

struct TuningFlags {
  double resolution = 0.01;
  std::optional<int> depth;
  bool no_project = false;
  int steps = wt::ProjectionParams{}.iterations;
  double step_size = wt::ProjectionParams{}.step_size;
  double smooth_weight = wt::ProjectionParams{}.smoothing_weight;

  void attach(CLI::App* cmd) {
    cmd->add_option("--resolution", resolution, "Target leaf edge length in normalized units")
        ->capture_default_str();
    cmd->add_option("--depth", depth, "Octree depth (overrides --resolution)");
    cmd->add_flag("--no-project", no_project, "Skip projection onto the input surface");
    cmd->add_option("--steps", steps, "Projection iterations")->capture_default_str();
    cmd->add_option("--step-size", step_size, "Maximum move per iteration")->capture_default_str();
    cmd->add_option("--smooth-weight", smooth_weight, "Laplacian blend factor in [0,1]")
        ->capture_default_str();
  }

  wt::PipelineConfig config() const {
    wt::PipelineConfig cfg;
    cfg.octree.target_leaf_size = resolution;
    cfg.octree.max_depth = depth;
    cfg.project_enabled = !no_project;
    cfg.projection.iterations = steps;
    cfg.projection.step_size = step_size;
    cfg.projection.smoothing_weight = smooth_weight;
    return cfg;
  }
};

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw wt::InputError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
  if (!out) throw wt::InputError("failed writing '" + path + "'");
}

wt::MeshFormat input_format(const std::string& path) {
  const auto format = wt::format_from_path(path);
  if (!format) throw wt::InputError("unknown mesh format for '" + path + "' (expected .obj or .off)");
  return *format;
}

int run_convert(const std::string& input, const std::string& output,
                const std::string& format_flag, const std::string& report_path,
                const TuningFlags& flags) {
  wt::PipelineConfig cfg = flags.config();
  if (!format_flag.empty()) {
    cfg.output_format = *wt::format_from_name(format_flag);
  } else {
    cfg.output_format = wt::output_format(output, wt::MeshFormat::kObj);
  }
  cfg.emit_report = !report_path.empty();

  wt::LoadStats stats;
  const wt::TriangleMesh mesh = wt::load_mesh_file(input, input_format(input), &stats);
  if (stats.dropped_degenerate > 0) {
    std::cerr << "note: dropped " << stats.dropped_degenerate << " degenerate triangles\n";
  }
  const wt::PipelineResult result = wt::run_pipeline(mesh, cfg);
  wt::write_mesh_file(output, result.mesh, cfg.output_format);
  if (cfg.emit_report) write_json(report_path, wt::to_json(result.report));

  std::cout << output << ": " << result.mesh.vertices.size() << " vertices, "
            << result.mesh.triangles.size() << " triangles, depth " << result.diagnostics.depth
            << ", edge splits " << result.diagnostics.splits.edge_splits << ", vertex splits "
            << result.diagnostics.splits.vertex_splits << ", flip rate "
            << result.report.flip_rate << '\n';
  return wt::kExitOk;
}

int run_batch(const std::string& manifest_path, int jobs, const std::string& summary_path,
              const TuningFlags& flags) {
  std::ifstream in(manifest_path);
  if (!in) throw wt::InputError("cannot open '" + manifest_path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw wt::InputError(std::string("malformed manifest: ") + e.what());
  }
  const wt::BatchManifest manifest = wt::BatchManifest::from_json(j);
  const wt::BatchOutcome outcome = wt::run_batch(manifest, flags.config(), jobs);
  if (summary_path.empty()) {
    std::cout << outcome.summary.dump(2) << '\n';
  } else {
    write_json(summary_path, outcome.summary);
    std::cout << outcome.summary["succeeded"] << "/" << outcome.summary["total"]
              << " succeeded, manifold " << outcome.summary["manifold_pass"] << "\n";
  }
  return outcome.exit_code;
}

int run_check(const std::string& input, const std::string& report_path) {
  const wt::TriangleMesh mesh = wt::load_mesh_file(input, input_format(input));
  const wt::ManifoldReport report = wt::check_manifold(mesh);
  write_json(report_path, wt::to_json(report));
  std::cout << input << ": manifold " << report.is_manifold << ", closed " << report.is_closed
            << ", oriented " << report.is_oriented << ", euler " << report.euler_characteristic
            << '\n';
  return wt::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convert triangle meshes to watertight manifolds"};
  app.require_subcommand(1);

  std::string input;
  std::string output;
  std::string format;
  std::string report;
  TuningFlags convert_flags;
  auto* convert = app.add_subcommand("convert", "Run the full pipeline on one mesh");
  convert->add_option("--input", input, "Input mesh (.obj or .off)")->required();
  convert->add_option("--output", output, "Output mesh path")->required();
  convert->add_option("--format", format, "Output format")->check(CLI::IsMember({"obj", "off"}));
  convert->add_option("--report", report, "Write the manifold report as JSON");
  convert_flags.attach(convert);

  std::string manifest;
  int jobs = 1;
  std::string summary;
  TuningFlags batch_flags;
  auto* batch = app.add_subcommand("batch", "Run the pipeline on every manifest entry");
  batch->add_option("--manifest", manifest, "Manifest JSON")->required();
  batch->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  batch->add_option("--summary", summary, "Write the summary JSON here instead of stdout");
  batch_flags.attach(batch);

  std::string check_input;
  std::string check_report;
  auto* check = app.add_subcommand("check", "Verify a mesh without modifying it");
  check->add_option("--input", check_input, "Mesh to verify")->required();
  check->add_option("--report", check_report, "Report JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? wt::kExitOk : wt::kExitInputError;
  }

  try {
    if (*convert) return run_convert(input, output, format, report, convert_flags);
    if (*batch) return run_batch(manifest, jobs, summary, batch_flags);
    return run_check(check_input, check_report);
  } catch (const wt::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return wt::kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return wt::kExitInternalError;
  }
}
