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

#include "mdp/geometry.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"

namespace mdp {

bool Point::IsFinite() const {
  return std::all_of(coords_.begin(), coords_.end(),
                     [](double v) { return std::isfinite(v); });
}

absl::StatusOr<Metric> Metric::Create(double p) {
  if (std::isnan(p) || p < 1.0) {
    return absl::InvalidArgumentError(
        absl::StrCat("metric exponent p must be in [1, inf], got ", p));
  }
  return Metric(p);
}

double Metric::DualExponent() const {
  if (p_ == 1.0) return kInfinity;
  if (is_infinite()) return 1.0;
  return p_ / (p_ - 1.0);
}

double LpNorm(std::span<const double> v, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  if (p == 1.0) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  }
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x), p);
  return std::pow(s, 1.0 / p);
}

double LpDistanceUnchecked(std::span<const double> a, std::span<const double> b,
                           const Metric& metric) {
  const double p = metric.p();
  if (metric.is_infinite()) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
  }
  if (p == 1.0) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[i];
      s += d * d;
    }
    return std::sqrt(s);
  }
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += std::pow(std::abs(a[i] - b[i]), p);
  return std::pow(s, 1.0 / p);
}

absl::StatusOr<double> LpDistance(const Point& a, const Point& b,
                                  const Metric& metric) {
  if (a.dim() != b.dim()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "dimension mismatch: ", a.dim(), " vs ", b.dim()));
  }
  return LpDistanceUnchecked(a.coords(), b.coords(), metric);
}

bool Box::Contains(const Point& x) const {
  if (x.dim() != dim()) return false;
  for (size_t l = 0; l < dim(); ++l) {
    if (!(x[l] >= lower[l] && x[l] <= upper[l])) return false;
  }
  return true;
}

absl::Status Box::Validate() const {
  if (lower.dim() == 0 || lower.dim() != upper.dim()) {
    return absl::InvalidArgumentError("box corners must share a dimension >= 1");
  }
  if (!lower.IsFinite() || !upper.IsFinite()) {
    return absl::InvalidArgumentError("box corners must be finite");
  }
  for (size_t l = 0; l < dim(); ++l) {
    if (!(upper[l] > lower[l])) {
      return absl::InvalidArgumentError(
          absl::StrCat("degenerate bounds on axis ", l));
    }
  }
  return absl::OkStatus();
}

double Cell::Volume() const {
  double v = 1.0;
  for (double s : sides_) v *= s;
  return v;
}

bool Cell::Contains(const Point& x) const {
  if (x.dim() != dim()) return false;
  for (size_t l = 0; l < dim(); ++l) {
    if (!(x[l] >= base_[l] && x[l] <= Upper(l))) return false;
  }
  return true;
}

absl::StatusOr<Partition> Partition::Create(Box bounds,
                                            std::vector<int> cells_per_axis) {
  if (absl::Status s = bounds.Validate(); !s.ok()) return s;
  if (cells_per_axis.size() != bounds.dim()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "expected ", bounds.dim(), " cell counts, got ", cells_per_axis.size()));
  }
  Partition part;
  part.num_cells_ = 1;
  part.num_anchors_ = 1;
  for (size_t l = 0; l < cells_per_axis.size(); ++l) {
    const int count = cells_per_axis[l];
    if (count < 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("cell count on axis ", l, " must be >= 1"));
    }
    const double lo = bounds.lower[l];
    const double hi = bounds.upper[l];
    const double side = (hi - lo) / count;
    std::vector<double> grid(count + 1);
    for (int i = 0; i <= count; ++i) grid[i] = lo + side * i;
    grid[count] = hi;
    part.sides_.push_back(side);
    part.grid_.push_back(std::move(grid));
    part.cell_strides_.push_back(part.num_cells_);
    part.anchor_strides_.push_back(part.num_anchors_);
    part.num_cells_ *= static_cast<size_t>(count);
    part.num_anchors_ *= static_cast<size_t>(count) + 1;
  }
  part.bounds_ = std::move(bounds);
  part.counts_ = std::move(cells_per_axis);
  return part;
}

absl::StatusOr<Partition> PartitionDomain(const Box& bounds,
                                          std::vector<int> cells_per_axis) {
  return Partition::Create(bounds, std::move(cells_per_axis));
}

std::vector<int> Partition::AnchorMultiIndex(size_t anchor) const {
  std::vector<int> idx(dim());
  for (size_t l = 0; l < dim(); ++l) {
    idx[l] = static_cast<int>(anchor % (counts_[l] + 1));
    anchor /= counts_[l] + 1;
  }
  return idx;
}

size_t Partition::AnchorIndex(std::span<const int> multi_index) const {
  size_t a = 0;
  for (size_t l = 0; l < dim(); ++l) a += multi_index[l] * anchor_strides_[l];
  return a;
}

Point Partition::Anchor(size_t anchor) const {
  std::vector<double> c(dim());
  for (size_t l = 0; l < dim(); ++l) {
    c[l] = grid_[l][anchor % (counts_[l] + 1)];
    anchor /= counts_[l] + 1;
  }
  return Point(std::move(c));
}

std::vector<int> Partition::CellMultiIndex(size_t cell) const {
  std::vector<int> idx(dim());
  for (size_t l = 0; l < dim(); ++l) {
    idx[l] = static_cast<int>(cell % counts_[l]);
    cell /= counts_[l];
  }
  return idx;
}

size_t Partition::CellIndex(std::span<const int> multi_index) const {
  size_t c = 0;
  for (size_t l = 0; l < dim(); ++l) c += multi_index[l] * cell_strides_[l];
  return c;
}

Cell Partition::GetCell(size_t cell) const {
  const std::vector<int> idx = CellMultiIndex(cell);
  std::vector<double> base(dim());
  std::vector<double> sides(dim());
  for (size_t l = 0; l < dim(); ++l) {
    base[l] = grid_[l][idx[l]];
    sides[l] = grid_[l][idx[l] + 1] - grid_[l][idx[l]];
  }
  return Cell(Point(std::move(base)), std::move(sides));
}

size_t Partition::CornerAnchor(size_t cell, uint32_t gamma_mask) const {
  const std::vector<int> idx = CellMultiIndex(cell);
  size_t a = 0;
  for (size_t l = 0; l < dim(); ++l) {
    const int i = idx[l] + static_cast<int>((gamma_mask >> l) & 1u);
    a += i * anchor_strides_[l];
  }
  return a;
}

std::vector<size_t> Partition::CellCorners(size_t cell) const {
  std::vector<size_t> corners(corners_per_cell());
  for (uint32_t g = 0; g < corners_per_cell(); ++g) {
    corners[g] = CornerAnchor(cell, g);
  }
  return corners;
}

absl::StatusOr<size_t> Partition::LocateCell(const Point& x) const {
  if (x.dim() != dim()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "point has dimension ", x.dim(), ", partition has ", dim()));
  }
  if (!x.IsFinite() || !bounds_.Contains(x)) {
    return absl::OutOfRangeError("point lies outside the partitioned domain");
  }
  std::vector<int> idx(dim());
  for (size_t l = 0; l < dim(); ++l) {
    const std::vector<double>& g = grid_[l];
    const int count = counts_[l];
    // First grid line strictly above x, minus one: the upper cell wins ties.
    int i = static_cast<int>(std::upper_bound(g.begin(), g.end(), x[l]) -
                             g.begin()) - 1;
    idx[l] = std::clamp(i, 0, count - 1);
  }
  return CellIndex(idx);
}

absl::StatusOr<CellWeights> InterpolationWeights(const Cell& cell,
                                                 const Point& x) {
  if (!cell.Contains(x)) {
    return absl::InvalidArgumentError("point lies outside the cell");
  }
  const size_t n = cell.dim();
  CellWeights w;
  w.lambda.resize(n);
  for (size_t l = 0; l < n; ++l) {
    const double lam = (cell.Upper(l) - x[l]) / cell.sides()[l];
    w.lambda[l] = std::clamp(lam, 0.0, 1.0);
  }
  const uint32_t corners = 1u << n;
  w.corner_weights.resize(corners);
  for (uint32_t g = 0; g < corners; ++g) {
    double prod = 1.0;
    for (size_t l = 0; l < n; ++l) {
      prod *= ((g >> l) & 1u) ? 1.0 - w.lambda[l] : w.lambda[l];
    }
    w.corner_weights[g] = prod;
  }
  return w;
}

std::vector<AnchorEdge> AxisNeighbors(const Partition& partition) {
  std::vector<AnchorEdge> edges;
  const size_t n = partition.dim();
  std::vector<size_t> strides(n);
  size_t s = 1;
  for (size_t l = 0; l < n; ++l) {
    strides[l] = s;
    s *= partition.cells_per_axis()[l] + 1;
  }
  for (size_t a = 0; a < partition.num_anchors(); ++a) {
    const std::vector<int> idx = partition.AnchorMultiIndex(a);
    for (size_t l = 0; l < n; ++l) {
      if (idx[l] < partition.cells_per_axis()[l]) {
        const double gap = partition.GridCoordinate(l, idx[l] + 1) -
                           partition.GridCoordinate(l, idx[l]);
        edges.push_back({a, a + strides[l], static_cast<int>(l), gap});
      }
    }
  }
  return edges;
}

double MaxCellDistance(const Cell& a, const Cell& b, const Metric& metric) {
  std::vector<double> gaps(a.dim());
  for (size_t l = 0; l < a.dim(); ++l) {
    gaps[l] = std::max(std::abs(a.Upper(l) - b.base_corner()[l]),
                       std::abs(b.Upper(l) - a.base_corner()[l]));
  }
  return LpNorm(gaps, metric.p());
}

}  // namespace mdp
