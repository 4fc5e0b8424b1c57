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

#include "mdp/mechanism_io.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "mdp/baselines.h"
#include "mdp/interpolation.h"

namespace mdp {
namespace {

using Json = nlohmann::ordered_json;

Json MetricToJson(const Metric& m) {
  if (m.is_infinite()) return "inf";
  return m.p();
}

Json PointsToJson(const std::vector<Point>& points) {
  Json arr = Json::array();
  for (const Point& p : points) {
    arr.push_back(std::vector<double>(p.coords().begin(), p.coords().end()));
  }
  return arr;
}

Json MatrixToJson(const Matrix& m) {
  Json rows = Json::array();
  for (size_t r = 0; r < m.rows(); ++r) {
    rows.push_back(std::vector<double>(m.Row(r).begin(), m.Row(r).end()));
  }
  return rows;
}

Json PartitionToJson(const Partition& part) {
  const Box& b = part.bounds();
  Json j;
  j["lower"] = std::vector<double>(b.lower.coords().begin(),
                                   b.lower.coords().end());
  j["upper"] = std::vector<double>(b.upper.coords().begin(),
                                   b.upper.coords().end());
  j["cells"] = std::vector<int>(part.cells_per_axis().begin(),
                                part.cells_per_axis().end());
  return j;
}

absl::StatusOr<Json> ToJson(const PerturbationMechanism& mech) {
  Json j;
  j["format"] = kMechanismFormat;
  if (const auto* m = dynamic_cast<const InterpolatedMechanism*>(&mech)) {
    const MechanismBudget& b = m->budget();
    j["kind"] = "interpolated";
    j["name"] = b.method;
    j["eps"] = b.total_eps;
    j["metric_p"] = MetricToJson(b.metric);
    j["axis_eps"] = b.axis_eps;
    j["convention"] = BudgetConventionName(b.convention);
    j["partition"] = PartitionToJson(m->partition());
    j["outputs"] = PointsToJson(m->outputs().candidates);
    j["table"] = MatrixToJson(m->table().matrix());
    return j;
  }
  if (const auto* m = dynamic_cast<const CellConstantMechanism*>(&mech)) {
    j["kind"] = "cell_constant";
    j["name"] = m->name();
    j["eps"] = m->eps();
    j["metric_p"] = MetricToJson(m->metric());
    j["partition"] = PartitionToJson(m->partition());
    j["outputs"] = PointsToJson(m->outputs().candidates);
    j["table"] = MatrixToJson(m->table().matrix());
    return j;
  }
  if (const auto* m = dynamic_cast<const ExponentialMechanism*>(&mech)) {
    j["kind"] = "exponential";
    j["name"] = m->name();
    j["eps"] = m->eps();
    j["metric_p"] = MetricToJson(m->metric());
    j["factor"] = m->factor();
    j["outputs"] = PointsToJson(m->outputs().candidates);
    return j;
  }
  if (const auto* m =
          dynamic_cast<const TruncatedExponentialMechanism*>(&mech)) {
    j["kind"] = "truncated_exponential";
    j["name"] = m->name();
    j["eps"] = m->eps();
    j["metric_p"] = MetricToJson(m->metric());
    j["factor"] = m->factor();
    j["radius"] = m->radius();
    j["outputs"] = PointsToJson(m->outputs().candidates);
    return j;
  }
  if (const auto* m = dynamic_cast<const RemappedMechanism*>(&mech)) {
    absl::StatusOr<Json> base = ToJson(m->base());
    if (!base.ok()) return base.status();
    base->erase("format");
    j["kind"] = "remapped";
    j["name"] = m->name();
    j["map"] = m->map();
    j["base"] = *std::move(base);
    return j;
  }
  return absl::UnimplementedError(
      absl::StrCat("no serialization for mechanism ", mech.name()));
}

absl::Status FieldError(const std::string& field, const std::string& what) {
  return absl::InvalidArgumentError(
      absl::StrCat("mechanism field '", field, "': ", what));
}

absl::StatusOr<const Json*> Field(const Json& j, const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) return FieldError(key, "missing");
  return &*it;
}

absl::StatusOr<double> NumberField(const Json& j, const std::string& key) {
  absl::StatusOr<const Json*> f = Field(j, key);
  if (!f.ok()) return f.status();
  if (!(*f)->is_number()) return FieldError(key, "expected a number");
  return (*f)->get<double>();
}

absl::StatusOr<std::string> StringField(const Json& j, const std::string& key) {
  absl::StatusOr<const Json*> f = Field(j, key);
  if (!f.ok()) return f.status();
  if (!(*f)->is_string()) return FieldError(key, "expected a string");
  return (*f)->get<std::string>();
}

absl::StatusOr<std::vector<double>> VectorField(const Json& j,
                                                const std::string& key) {
  absl::StatusOr<const Json*> f = Field(j, key);
  if (!f.ok()) return f.status();
  if (!(*f)->is_array()) return FieldError(key, "expected an array");
  std::vector<double> v;
  for (const Json& e : **f) {
    if (!e.is_number()) return FieldError(key, "expected numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

absl::StatusOr<Matrix> MatrixField(const Json& j, const std::string& key) {
  absl::StatusOr<const Json*> f = Field(j, key);
  if (!f.ok()) return f.status();
  if (!(*f)->is_array() || (*f)->empty()) {
    return FieldError(key, "expected a non-empty array of rows");
  }
  const Json& rows = **f;
  const size_t cols = rows[0].is_array() ? rows[0].size() : 0;
  if (cols == 0) return FieldError(key, "rows must be non-empty arrays");
  Matrix m(rows.size(), cols);
  for (size_t r = 0; r < rows.size(); ++r) {
    if (!rows[r].is_array() || rows[r].size() != cols) {
      return FieldError(key, absl::StrCat("row ", r, " has the wrong length"));
    }
    for (size_t c = 0; c < cols; ++c) {
      if (!rows[r][c].is_number()) return FieldError(key, "expected numbers");
      m(r, c) = rows[r][c].get<double>();
    }
  }
  return m;
}

absl::StatusOr<Metric> MetricField(const Json& j) {
  absl::StatusOr<const Json*> f = Field(j, "metric_p");
  if (!f.ok()) return f.status();
  if ((*f)->is_string() && (*f)->get<std::string>() == "inf") {
    return Metric::LInf();
  }
  if (!(*f)->is_number()) return FieldError("metric_p", "expected a number");
  return Metric::Create((*f)->get<double>());
}

absl::StatusOr<OutputDomain> OutputsField(const Json& j) {
  absl::StatusOr<Matrix> m = MatrixField(j, "outputs");
  if (!m.ok()) return m.status();
  OutputDomain out;
  for (size_t r = 0; r < m->rows(); ++r) {
    out.candidates.emplace_back(
        std::vector<double>(m->Row(r).begin(), m->Row(r).end()));
  }
  return out;
}

absl::StatusOr<Partition> PartitionField(const Json& j) {
  absl::StatusOr<const Json*> f = Field(j, "partition");
  if (!f.ok()) return f.status();
  absl::StatusOr<std::vector<double>> lo = VectorField(**f, "lower");
  if (!lo.ok()) return lo.status();
  absl::StatusOr<std::vector<double>> hi = VectorField(**f, "upper");
  if (!hi.ok()) return hi.status();
  absl::StatusOr<std::vector<double>> cells = VectorField(**f, "cells");
  if (!cells.ok()) return cells.status();
  std::vector<int> counts;
  for (double c : *cells) {
    if (c != std::floor(c)) return FieldError("cells", "expected integers");
    counts.push_back(static_cast<int>(c));
  }
  return Partition::Create(Box{Point(*lo), Point(*hi)}, std::move(counts));
}

absl::StatusOr<std::shared_ptr<const PerturbationMechanism>> FromJson(
    const Json& j) {
  absl::StatusOr<std::string> kind = StringField(j, "kind");
  if (!kind.ok()) return kind.status();
  if (*kind == "remapped") {
    absl::StatusOr<const Json*> base_json = Field(j, "base");
    if (!base_json.ok()) return base_json.status();
    absl::StatusOr<std::shared_ptr<const PerturbationMechanism>> base =
        FromJson(**base_json);
    if (!base.ok()) return base.status();
    absl::StatusOr<std::vector<double>> raw = VectorField(j, "map");
    if (!raw.ok()) return raw.status();
    std::vector<int> map(raw->begin(), raw->end());
    absl::StatusOr<RemappedMechanism> m =
        RemappedMechanism::FromMap(*std::move(base), std::move(map));
    if (!m.ok()) return m.status();
    return std::make_shared<const RemappedMechanism>(*std::move(m));
  }

  absl::StatusOr<std::string> name = StringField(j, "name");
  if (!name.ok()) return name.status();
  absl::StatusOr<double> eps = NumberField(j, "eps");
  if (!eps.ok()) return eps.status();
  absl::StatusOr<Metric> metric = MetricField(j);
  if (!metric.ok()) return metric.status();
  absl::StatusOr<OutputDomain> outputs = OutputsField(j);
  if (!outputs.ok()) return outputs.status();

  if (*kind == "interpolated" || *kind == "cell_constant") {
    absl::StatusOr<Partition> part = PartitionField(j);
    if (!part.ok()) return part.status();
    absl::StatusOr<Matrix> table = MatrixField(j, "table");
    if (!table.ok()) return table.status();
    if (*kind == "cell_constant") {
      absl::StatusOr<CellConstantMechanism> m = CellConstantMechanism::Create(
          *std::move(part), PerturbationTable(*std::move(table)),
          *std::move(outputs), *eps, *metric, *name);
      if (!m.ok()) return m.status();
      return std::make_shared<const CellConstantMechanism>(*std::move(m));
    }
    MechanismBudget budget;
    budget.method = *name;
    budget.total_eps = *eps;
    budget.metric = *metric;
    absl::StatusOr<std::vector<double>> axis = VectorField(j, "axis_eps");
    if (!axis.ok()) return axis.status();
    budget.axis_eps = *std::move(axis);
    absl::StatusOr<std::string> conv = StringField(j, "convention");
    if (!conv.ok()) return conv.status();
    absl::StatusOr<BudgetConvention> c = ParseBudgetConvention(*conv);
    if (!c.ok()) return FieldError("convention", std::string(c.status().message()));
    budget.convention = *c;
    absl::StatusOr<InterpolatedMechanism> m = InterpolatedMechanism::Create(
        *std::move(part), PerturbationTable(*std::move(table)),
        *std::move(outputs), std::move(budget));
    if (!m.ok()) return m.status();
    return std::make_shared<const InterpolatedMechanism>(*std::move(m));
  }

  absl::StatusOr<double> factor = NumberField(j, "factor");
  if (!factor.ok()) return factor.status();
  if (*kind == "exponential") {
    absl::StatusOr<ExponentialMechanism> m = ExponentialMechanism::Create(
        *std::move(outputs), *eps, *metric, *factor, *name);
    if (!m.ok()) return m.status();
    return std::make_shared<const ExponentialMechanism>(*std::move(m));
  }
  if (*kind == "truncated_exponential") {
    absl::StatusOr<double> radius = NumberField(j, "radius");
    if (!radius.ok()) return radius.status();
    absl::StatusOr<TruncatedExponentialMechanism> m =
        TruncatedExponentialMechanism::Create(*std::move(outputs), *eps,
                                              *metric, *radius, *factor);
    if (!m.ok()) return m.status();
    return std::make_shared<const TruncatedExponentialMechanism>(
        *std::move(m));
  }
  return FieldError("kind", absl::StrCat("unknown kind '", *kind, "'"));
}

}  // namespace

absl::StatusOr<std::string> MechanismToJson(const PerturbationMechanism& mech) {
  absl::StatusOr<Json> j = ToJson(mech);
  if (!j.ok()) return j.status();
  return j->dump(2) + "\n";
}

absl::StatusOr<std::shared_ptr<const PerturbationMechanism>> MechanismFromJson(
    const std::string& text) {
  Json j = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError("mechanism file is not a JSON object");
  }
  absl::StatusOr<std::string> format = StringField(j, "format");
  if (!format.ok()) return format.status();
  if (*format != kMechanismFormat) {
    return FieldError("format", absl::StrCat("unsupported '", *format, "'"));
  }
  return FromJson(j);
}

absl::Status WriteMechanismFile(const PerturbationMechanism& mech,
                                const std::string& path) {
  absl::StatusOr<std::string> text = MechanismToJson(mech);
  if (!text.ok()) return text.status();
  std::ofstream out(path, std::ios::binary);
  out << *text;
  out.close();
  if (!out) return absl::NotFoundError(absl::StrCat("cannot write ", path));
  return absl::OkStatus();
}

absl::StatusOr<std::shared_ptr<const PerturbationMechanism>> ReadMechanismFile(
    const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot read ", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return MechanismFromJson(buf.str());
}

void WriteTableCsv(const PerturbationTable& table, std::ostream& out) {
  out << "anchor";
  for (size_t k = 0; k < table.cols(); ++k) out << ",y" << k;
  out << "\n";
  for (size_t i = 0; i < table.rows(); ++i) {
    out << i;
    for (double v : table.Row(i)) out << absl::StrFormat(",%.17g", v);
    out << "\n";
  }
}

absl::StatusOr<PerturbationTable> ReadTableCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    return absl::InvalidArgumentError("table CSV is empty");
  }
  const std::vector<std::string> header = absl::StrSplit(line, ',');
  if (header.size() < 2 || header[0] != "anchor") {
    return absl::InvalidArgumentError("table CSV header must start 'anchor,'");
  }
  const size_t cols = header.size() - 1;
  std::vector<double> values;
  size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = absl::StrSplit(line, ',');
    size_t anchor = 0;
    if (cells.size() != cols + 1 || !absl::SimpleAtoi(cells[0], &anchor) ||
        anchor != rows) {
      return absl::InvalidArgumentError(
          absl::StrCat("table CSV row ", rows, " is malformed"));
    }
    for (size_t k = 1; k < cells.size(); ++k) {
      double v = 0.0;
      if (!absl::SimpleAtod(cells[k], &v)) {
        return absl::InvalidArgumentError(
            absl::StrCat("table CSV row ", rows, " has a bad number"));
      }
      values.push_back(v);
    }
    ++rows;
  }
  Matrix m(rows, cols);
  for (size_t i = 0; i < values.size(); ++i) m(i / cols, i % cols) = values[i];
  return PerturbationTable(std::move(m));
}

}  // namespace mdp
