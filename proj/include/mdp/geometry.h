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

// Secret-domain geometry: points, lp metrics, orthotope partitions and the
// multilinear corner weights used by log-convex interpolation.

#ifndef MDP_GEOMETRY_H_
#define MDP_GEOMETRY_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace mdp {

// A record in the N-dimensional secret domain (domain units per axis).
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords) : coords_(std::move(coords)) {}
  Point(std::initializer_list<double> coords) : coords_(coords) {}

  size_t dim() const { return coords_.size(); }
  double operator[](size_t i) const { return coords_[i]; }
  double& operator[](size_t i) { return coords_[i]; }
  std::span<const double> coords() const { return coords_; }

  bool IsFinite() const;

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<double> coords_;
};

// The lp norm exponent, p in [1, +inf].
class Metric {
 public:
  static constexpr double kInfinity = std::numeric_limits<double>::infinity();

  static absl::StatusOr<Metric> Create(double p);
  static Metric L1() { return Metric(1.0); }
  static Metric L2() { return Metric(2.0); }
  static Metric LInf() { return Metric(kInfinity); }

  double p() const { return p_; }
  bool is_infinite() const { return p_ == kInfinity; }

  // Hoelder conjugate q = p / (p - 1); +inf for p = 1 and 1 for p = +inf.
  double DualExponent() const;

  friend bool operator==(const Metric&, const Metric&) = default;

 private:
  explicit Metric(double p) : p_(p) {}
  double p_ = 2.0;
};

// (sum_l |a_l - b_l|^p)^(1/p), or max_l |a_l - b_l| for p = +inf.
absl::StatusOr<double> LpDistance(const Point& a, const Point& b,
                                  const Metric& metric);

// Same as LpDistance without the dimension check. Spans must be equal length.
double LpDistanceUnchecked(std::span<const double> a, std::span<const double> b,
                           const Metric& metric);

// lp norm of a vector, with the same p conventions as LpDistance.
double LpNorm(std::span<const double> v, double p);

// Axis-aligned bounding box of the secret domain.
struct Box {
  Point lower;
  Point upper;

  size_t dim() const { return lower.dim(); }
  bool Contains(const Point& x) const;
  absl::Status Validate() const;
};

// An N-orthotope with minimum corner `base_corner` and side lengths `sides`.
class Cell {
 public:
  Cell(Point base_corner, std::vector<double> sides)
      : base_(std::move(base_corner)), sides_(std::move(sides)) {}

  const Point& base_corner() const { return base_; }
  std::span<const double> sides() const { return sides_; }
  size_t dim() const { return base_.dim(); }

  double Upper(size_t axis) const { return base_[axis] + sides_[axis]; }
  double Volume() const;
  bool Contains(const Point& x) const;

 private:
  Point base_;
  std::vector<double> sides_;
};

// The lambda coefficients of a point inside a cell and the product weights
// w(gamma) of the 2^N corners. Corner gamma is encoded as a bit mask with bit
// l set iff gamma_l = 1 (the corner lies on the upper face of axis l).
struct CellWeights {
  std::vector<double> lambda;
  std::vector<double> corner_weights;

  double Weight(uint32_t gamma_mask) const { return corner_weights[gamma_mask]; }
};

// Two lattice-adjacent anchors that differ along exactly one axis.
struct AnchorEdge {
  size_t a = 0;
  size_t b = 0;
  int axis = 0;
  double gap = 0.0;
};

// Uniform grid partition of a box into prod(counts) cells whose corners form
// the deduplicated anchor lattice. Anchors and cells are indexed in
// lexicographic order with axis 0 varying fastest.
class Partition {
 public:
  Partition() = default;  // empty; use Create
  static absl::StatusOr<Partition> Create(Box bounds,
                                          std::vector<int> cells_per_axis);

  const Box& bounds() const { return bounds_; }
  size_t dim() const { return counts_.size(); }
  std::span<const int> cells_per_axis() const { return counts_; }
  std::span<const double> sides() const { return sides_; }

  size_t num_cells() const { return num_cells_; }
  size_t num_anchors() const { return num_anchors_; }
  uint32_t corners_per_cell() const { return 1u << dim(); }

  // Lattice coordinate of grid line `index` along `axis` (0..counts[axis]).
  double GridCoordinate(size_t axis, int index) const {
    return grid_[axis][index];
  }

  Point Anchor(size_t anchor) const;
  std::vector<int> AnchorMultiIndex(size_t anchor) const;
  size_t AnchorIndex(std::span<const int> multi_index) const;

  Cell GetCell(size_t cell) const;
  std::vector<int> CellMultiIndex(size_t cell) const;
  size_t CellIndex(std::span<const int> multi_index) const;

  // Anchor index of corner `gamma_mask` of `cell`.
  size_t CornerAnchor(size_t cell, uint32_t gamma_mask) const;
  std::vector<size_t> CellCorners(size_t cell) const;

  // Cell containing x. Points on a shared interior face go to the upper cell;
  // points on the upper domain boundary go to the last cell of that axis.
  absl::StatusOr<size_t> LocateCell(const Point& x) const;

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.bounds_.lower == b.bounds_.lower &&
           a.bounds_.upper == b.bounds_.upper && a.counts_ == b.counts_;
  }

 private:
  Box bounds_;
  std::vector<int> counts_;
  std::vector<double> sides_;
  std::vector<std::vector<double>> grid_;
  std::vector<size_t> anchor_strides_;
  std::vector<size_t> cell_strides_;
  size_t num_cells_ = 0;
  size_t num_anchors_ = 0;
};

absl::StatusOr<Partition> PartitionDomain(const Box& bounds,
                                          std::vector<int> cells_per_axis);

absl::StatusOr<CellWeights> InterpolationWeights(const Cell& cell,
                                                 const Point& x);

// Every unordered pair of axis-neighbor anchors, each listed once, ordered by
// the lower anchor index and then by axis.
std::vector<AnchorEdge> AxisNeighbors(const Partition& partition);

// Largest lp distance between any two points of the two orthotopes; attained
// at corners, so it is the norm of the per-axis maximal coordinate gaps.
double MaxCellDistance(const Cell& a, const Cell& b, const Metric& metric);

}  // namespace mdp

#endif  // MDP_GEOMETRY_H_
