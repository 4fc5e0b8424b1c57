// Copyright 2026 The mdp-interp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mdp/synth.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "mdp/random.h"

namespace mdp {
namespace {

using Json = nlohmann::ordered_json;

std::string Num(double v) { return absl::StrFormat("%.17g", v); }

absl::Status WriteFile(const std::filesystem::path& path,
                       const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot open ", path.string(), " for writing"));
  }
  out << text;
  if (!out) return absl::DataLossError(absl::StrCat("short write to ", path.string()));
  return absl::OkStatus();
}

absl::StatusOr<std::string> ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot read ", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Rows of numbers from a CSV body with one header line.
absl::StatusOr<std::vector<std::vector<double>>> ReadCsv(
    const std::filesystem::path& path, size_t expected_cols) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  std::vector<std::vector<double>> rows;
  bool header = true;
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(*text, '\n', absl::SkipEmpty())) {
    ++line_no;
    if (header) {
      header = false;
      continue;
    }
    std::vector<double> row;
    for (absl::string_view field : absl::StrSplit(line, ',')) {
      double v;
      if (!absl::SimpleAtod(field, &v)) {
        return absl::DataLossError(absl::StrCat(path.string(), ":", line_no,
                                                ": bad number '", field, "'"));
      }
      row.push_back(v);
    }
    if (expected_cols > 0 && row.size() != expected_cols) {
      return absl::DataLossError(absl::StrCat(path.string(), ":", line_no,
                                              ": expected ", expected_cols,
                                              " fields"));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double HotspotDensity(const Point& x, const std::vector<Point>& centers,
                      const SynthSpec& spec) {
  double bump = 0.0;
  for (const Point& c : centers) {
    const double dx = x[0] - c[0];
    const double dy = x[1] - c[1];
    bump += std::exp(-(dx * dx + dy * dy) /
                     (2.0 * spec.hotspot_sigma * spec.hotspot_sigma));
  }
  return 1.0 + spec.hotspot_weight * bump;
}

}  // namespace

absl::Status SynthSpec::Validate() const {
  if (!(extent_x > 0.0) || !(extent_y > 0.0)) {
    return absl::InvalidArgumentError("extents must be positive");
  }
  if (cells_x < 1 || cells_y < 1 || samples_per_cell_axis < 1 ||
      outputs_per_axis < 1 || tasks < 1 || hotspots < 0) {
    return absl::InvalidArgumentError(
        "cell, sample, output and task counts must be >= 1");
  }
  if (graph_nodes_per_axis < 2) {
    return absl::InvalidArgumentError("graph needs at least 2 nodes per axis");
  }
  if (!(edge_jitter >= 0.0) || !(hotspot_sigma > 0.0) ||
      !(hotspot_weight >= 0.0)) {
    return absl::InvalidArgumentError(
        "jitter and hotspot weight must be >= 0, hotspot width > 0");
  }
  return absl::OkStatus();
}

absl::StatusOr<Instance> SynthesizeInstance(const SynthSpec& spec) {
  if (absl::Status s = spec.Validate(); !s.ok()) return s;
  std::mt19937_64 rng(spec.seed);
  Instance inst;
  inst.box = Box{Point{0.0, 0.0}, Point{spec.extent_x, spec.extent_y}};
  absl::StatusOr<Partition> part =
      Partition::Create(inst.box, {spec.cells_x, spec.cells_y});
  if (!part.ok()) return part.status();
  inst.partition = *std::move(part);

  const int G = spec.graph_nodes_per_axis;
  std::vector<Point> nodes;
  for (int j = 0; j < G; ++j) {
    for (int i = 0; i < G; ++i) {
      nodes.push_back(Point{spec.extent_x * i / (G - 1),
                            spec.extent_y * j / (G - 1)});
    }
  }
  std::vector<GraphEdge> edges;
  const double hx = spec.extent_x / (G - 1);
  const double hy = spec.extent_y / (G - 1);
  for (int j = 0; j < G; ++j) {
    for (int i = 0; i < G; ++i) {
      const int u = i + G * j;
      if (i + 1 < G) {
        edges.push_back({u, u + 1, hx * (1.0 + spec.edge_jitter * UniformUnit(rng))});
      }
      if (j + 1 < G) {
        edges.push_back({u, u + G, hy * (1.0 + spec.edge_jitter * UniformUnit(rng))});
      }
    }
  }
  absl::StatusOr<RoadGraph> graph = RoadGraph::Create(nodes, std::move(edges));
  if (!graph.ok()) return graph.status();
  inst.graph = *std::move(graph);

  std::vector<Point> centers;
  for (int h = 0; h < spec.hotspots; ++h) {
    const double x = spec.extent_x * UniformUnit(rng);
    const double y = spec.extent_y * UniformUnit(rng);
    centers.push_back(Point{x, y});
  }

  const int S = spec.samples_per_cell_axis;
  double total = 0.0;
  for (size_t c = 0; c < inst.partition.num_cells(); ++c) {
    const Cell cell = inst.partition.GetCell(c);
    for (int b = 0; b < S; ++b) {
      for (int a = 0; a < S; ++a) {
        Point x{cell.base_corner()[0] + (a + 0.5) / S * cell.sides()[0],
                cell.base_corner()[1] + (b + 0.5) / S * cell.sides()[1]};
        const double m = HotspotDensity(x, centers, spec);
        inst.prior.points.push_back(std::move(x));
        inst.prior.mass.push_back(m);
        total += m;
      }
    }
  }
  for (double& m : inst.prior.mass) m /= total;

  const int O = spec.outputs_per_axis;
  for (int j = 0; j < O; ++j) {
    for (int i = 0; i < O; ++i) {
      inst.outputs.candidates.push_back(
          Point{(i + 0.5) * spec.extent_x / O, (j + 0.5) * spec.extent_y / O});
    }
  }

  std::vector<double> node_weight(nodes.size());
  double node_total = 0.0;
  for (size_t v = 0; v < nodes.size(); ++v) {
    node_weight[v] = HotspotDensity(nodes[v], centers, spec);
    node_total += node_weight[v];
  }
  for (double& w : node_weight) w /= node_total;
  std::map<int, int> picks;
  for (int t = 0; t < spec.tasks; ++t) {
    ++picks[static_cast<int>(SampleIndex(node_weight, rng))];
  }
  for (const auto& [node, count] : picks) {
    inst.tasks.nodes.push_back(node);
    inst.tasks.weight.push_back(static_cast<double>(count) / spec.tasks);
  }
  double wsum = 0.0;
  for (double w : inst.tasks.weight) wsum += w;
  for (double& w : inst.tasks.weight) w /= wsum;

  absl::StatusOr<TaskLoss> loss = TaskLoss::Create(inst.graph, inst.tasks);
  if (!loss.ok()) return loss.status();
  absl::StatusOr<Matrix> matrix =
      BuildLossMatrix(*loss, inst.prior.points, inst.outputs);
  if (!matrix.ok()) return matrix.status();
  inst.loss = *std::move(matrix);
  return inst;
}

absl::Status WriteInstanceBundle(const Instance& inst, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot create ", dir, ": ", ec.message()));
  }
  const std::filesystem::path root(dir);
  Json manifest;
  manifest["format"] = "mdp-instance-1";
  manifest["box_lower"] = {inst.box.lower[0], inst.box.lower[1]};
  manifest["box_upper"] = {inst.box.upper[0], inst.box.upper[1]};
  manifest["cells_per_axis"] = std::vector<int>(
      inst.partition.cells_per_axis().begin(), inst.partition.cells_per_axis().end());
  manifest["files"] = {{"graph", "graph.txt"},   {"nodes", "nodes.csv"},
                       {"prior", "prior.csv"},   {"outputs", "outputs.csv"},
                       {"loss", "loss.csv"},     {"tasks", "tasks.csv"}};
  if (absl::Status s = WriteFile(root / "manifest.json", manifest.dump(2) + "\n");
      !s.ok()) {
    return s;
  }

  std::string graph = absl::StrCat(inst.graph.num_nodes(), " ",
                                   inst.graph.edges().size(), "\n");
  for (const GraphEdge& e : inst.graph.edges()) {
    absl::StrAppend(&graph, e.u, " ", e.v, " ", Num(e.weight), "\n");
  }
  std::string nodes = "id,x,y\n";
  for (size_t v = 0; v < inst.graph.num_nodes(); ++v) {
    absl::StrAppend(&nodes, v, ",", Num(inst.graph.nodes()[v][0]), ",",
                    Num(inst.graph.nodes()[v][1]), "\n");
  }
  std::string prior = "x,y,mass\n";
  for (size_t s = 0; s < inst.prior.size(); ++s) {
    absl::StrAppend(&prior, Num(inst.prior.points[s][0]), ",",
                    Num(inst.prior.points[s][1]), ",", Num(inst.prior.mass[s]),
                    "\n");
  }
  std::string outputs = "x,y\n";
  for (const Point& y : inst.outputs.candidates) {
    absl::StrAppend(&outputs, Num(y[0]), ",", Num(y[1]), "\n");
  }
  std::string loss;
  for (size_t k = 0; k < inst.loss.cols(); ++k) {
    absl::StrAppend(&loss, k == 0 ? "" : ",", "y", k);
  }
  loss += "\n";
  for (size_t s = 0; s < inst.loss.rows(); ++s) {
    for (size_t k = 0; k < inst.loss.cols(); ++k) {
      absl::StrAppend(&loss, k == 0 ? "" : ",", Num(inst.loss(s, k)));
    }
    loss += "\n";
  }
  std::string tasks = "node,weight\n";
  for (size_t t = 0; t < inst.tasks.nodes.size(); ++t) {
    absl::StrAppend(&tasks, inst.tasks.nodes[t], ",", Num(inst.tasks.weight[t]),
                    "\n");
  }
  for (const auto& [name, text] :
       std::vector<std::pair<std::string, std::string>>{
           {"graph.txt", graph}, {"nodes.csv", nodes}, {"prior.csv", prior},
           {"outputs.csv", outputs}, {"loss.csv", loss}, {"tasks.csv", tasks}}) {
    if (absl::Status s = WriteFile(root / name, text); !s.ok()) return s;
  }
  return absl::OkStatus();
}

absl::StatusOr<Instance> ReadInstanceBundle(const std::string& dir) {
  const std::filesystem::path root(dir);
  absl::StatusOr<std::string> manifest_text = ReadFile(root / "manifest.json");
  if (!manifest_text.ok()) return manifest_text.status();
  Json manifest = Json::parse(*manifest_text, nullptr, false);
  if (manifest.is_discarded() || !manifest.contains("cells_per_axis") ||
      !manifest.contains("box_lower") || !manifest.contains("box_upper")) {
    return absl::DataLossError(
        absl::StrCat(dir, "/manifest.json is not an instance manifest"));
  }
  Instance inst;
  try {
    inst.box = Box{Point(manifest["box_lower"].get<std::vector<double>>()),
                   Point(manifest["box_upper"].get<std::vector<double>>())};
    absl::StatusOr<Partition> part = Partition::Create(
        inst.box, manifest["cells_per_axis"].get<std::vector<int>>());
    if (!part.ok()) return part.status();
    inst.partition = *std::move(part);
  } catch (const nlohmann::json::exception& e) {
    return absl::DataLossError(absl::StrCat("malformed manifest: ", e.what()));
  }

  absl::StatusOr<std::vector<std::vector<double>>> nodes =
      ReadCsv(root / "nodes.csv", 3);
  if (!nodes.ok()) return nodes.status();
  std::vector<Point> positions;
  for (const auto& r : *nodes) positions.push_back(Point{r[1], r[2]});
  absl::StatusOr<std::string> graph_text = ReadFile(root / "graph.txt");
  if (!graph_text.ok()) return graph_text.status();
  std::istringstream gin(*graph_text);
  size_t V = 0, E = 0;
  if (!(gin >> V >> E) || V != positions.size()) {
    return absl::DataLossError("graph.txt header disagrees with nodes.csv");
  }
  std::vector<GraphEdge> edges(E);
  for (GraphEdge& e : edges) {
    std::string w;
    if (!(gin >> e.u >> e.v >> w) || !absl::SimpleAtod(w, &e.weight)) {
      return absl::DataLossError("graph.txt has a malformed edge line");
    }
  }
  absl::StatusOr<RoadGraph> graph =
      RoadGraph::Create(std::move(positions), std::move(edges));
  if (!graph.ok()) return absl::DataLossError(graph.status().message());
  inst.graph = *std::move(graph);

  absl::StatusOr<std::vector<std::vector<double>>> prior =
      ReadCsv(root / "prior.csv", 3);
  if (!prior.ok()) return prior.status();
  for (const auto& r : *prior) {
    inst.prior.points.push_back(Point{r[0], r[1]});
    inst.prior.mass.push_back(r[2]);
  }
  absl::StatusOr<std::vector<std::vector<double>>> outputs =
      ReadCsv(root / "outputs.csv", 2);
  if (!outputs.ok()) return outputs.status();
  for (const auto& r : *outputs) {
    inst.outputs.candidates.push_back(Point{r[0], r[1]});
  }
  absl::StatusOr<std::vector<std::vector<double>>> loss =
      ReadCsv(root / "loss.csv", inst.outputs.size());
  if (!loss.ok()) return loss.status();
  inst.loss = Matrix(loss->size(), inst.outputs.size());
  for (size_t s = 0; s < loss->size(); ++s) {
    for (size_t k = 0; k < inst.outputs.size(); ++k) inst.loss(s, k) = (*loss)[s][k];
  }
  absl::StatusOr<std::vector<std::vector<double>>> tasks =
      ReadCsv(root / "tasks.csv", 2);
  if (!tasks.ok()) return tasks.status();
  for (const auto& r : *tasks) {
    inst.tasks.nodes.push_back(static_cast<int>(r[0]));
    inst.tasks.weight.push_back(r[1]);
  }
  if (absl::Status s = inst.prior.Validate(1e-9); !s.ok()) return s;
  if (absl::Status s = inst.outputs.Validate(); !s.ok()) return s;
  if (absl::Status s =
          ValidateLossMatrix(inst.loss, inst.prior.size(), inst.outputs.size());
      !s.ok()) {
    return s;
  }
  return inst;
}

}  // namespace mdp
