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

#include "mdp/interpolation.h"

#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "mdp/random.h"

namespace mdp {
namespace {

OutputDomain LineOutputs(size_t k) {
  OutputDomain out;
  for (size_t i = 0; i < k; ++i) {
    out.candidates.push_back(Point{static_cast<double>(i)});
  }
  return out;
}

InterpolatedMechanism Make(const Partition& part, const Matrix& table,
                           std::vector<double> axis_eps = {}) {
  MechanismBudget budget{"test", 1.0, Metric::L2(), std::move(axis_eps)};
  return InterpolatedMechanism::Create(part, PerturbationTable(table),
                                       LineOutputs(table.cols()), budget)
      .value();
}

// A positive table whose log rows change by at most eps_l * side_l between
// axis neighbors: per output, a random walk along each axis.
Matrix LipschitzTable(const Partition& part, size_t K,
                      const std::vector<double>& eps, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> step(-1.0, 1.0);
  std::uniform_real_distribution<double> offset(-2.0, 0.0);
  Matrix logs(part.num_anchors(), K, 0.0);
  std::vector<std::vector<std::vector<double>>> walks(K);
  for (size_t k = 0; k < K; ++k) {
    walks[k].resize(part.dim());
    for (size_t l = 0; l < part.dim(); ++l) {
      const int n = part.cells_per_axis()[l];
      std::vector<double>& w = walks[k][l];
      w.assign(n + 1, 0.0);
      w[0] = offset(rng);
      for (int i = 1; i <= n; ++i) {
        w[i] = w[i - 1] + step(rng) * eps[l] * part.sides()[l];
      }
    }
  }
  Matrix table(part.num_anchors(), K);
  for (size_t a = 0; a < part.num_anchors(); ++a) {
    const std::vector<int> idx = part.AnchorMultiIndex(a);
    for (size_t k = 0; k < K; ++k) {
      double s = 0.0;
      for (size_t l = 0; l < part.dim(); ++l) s += walks[k][l][idx[l]];
      table(a, k) = std::exp(s);
    }
  }
  return table;
}

Point RandomPoint(const Box& box, std::mt19937_64& rng) {
  std::vector<double> c(box.dim());
  for (size_t l = 0; l < box.dim(); ++l) {
    c[l] = box.lower[l] + (box.upper[l] - box.lower[l]) * UniformUnit(rng);
  }
  return Point(std::move(c));
}

double Dual(const std::vector<double>& eps, const Metric& metric) {
  return LpNorm(eps, metric.DualExponent());
}

TEST(LogConvex1dTest, Endpoints) {
  EXPECT_EQ(LogConvex1d(0.2, 0.8, 1.0).value(), 0.2);
  EXPECT_EQ(LogConvex1d(0.2, 0.8, 0.0).value(), 0.8);
}

TEST(LogConvex1dTest, GeometricMean) {
  EXPECT_NEAR(LogConvex1d(0.2, 0.8, 0.5).value(), 0.4, 1e-15);
}

TEST(LogConvex1dTest, RejectsNonPositive) {
  EXPECT_FALSE(LogConvex1d(0.0, 0.8, 0.5).ok());
  EXPECT_FALSE(LogConvex1d(0.2, -1.0, 0.5).ok());
}

TEST(InterpolatedMechanismTest, RejectsZeroEntries) {
  Partition part = *Partition::Create(Box{Point{0.0}, Point{1.0}}, {1});
  Matrix t(2, 2, 0.5);
  t(1, 0) = 0.0;
  EXPECT_FALSE(InterpolatedMechanism::Create(part, PerturbationTable(t),
                                             LineOutputs(2), {})
                   .ok());
  EXPECT_FALSE(InterpolatedMechanism::Create(part, PerturbationTable(t),
                                             LineOutputs(3), {})
                   .ok());
}

TEST(InterpolatedMechanismTest, AnchorValuesAreExact) {
  std::mt19937_64 rng(3);
  Partition part =
      *Partition::Create(Box{Point{0.0, 0.0}, Point{3.0, 2.0}}, {3, 2});
  Matrix t = LipschitzTable(part, 4, {0.5, 0.5}, rng);
  InterpolatedMechanism mech = Make(part, t);
  for (size_t a = 0; a < part.num_anchors(); ++a) {
    for (size_t k = 0; k < 4; ++k) {
      EXPECT_EQ(mech.Unnormalized(part.Anchor(a), k).value(), t(a, k));
    }
  }
}

TEST(InterpolatedMechanismTest, OneDimensionalMidpoint) {
  Partition part = *Partition::Create(Box{Point{0.0}, Point{1.0}}, {1});
  Matrix t(2, 2);
  t(0, 0) = 0.2;
  t(0, 1) = 0.8;
  t(1, 0) = 0.8;
  t(1, 1) = 0.2;
  InterpolatedMechanism mech = Make(part, t);
  EXPECT_NEAR(mech.Unnormalized(Point{0.5}, 0).value(), 0.4, 1e-15);
  EXPECT_NEAR(mech.Unnormalized(Point{0.5}, 1).value(), 0.4, 1e-15);
  std::vector<double> d = mech.Distribution(Point{0.5}).value();
  EXPECT_NEAR(d[0], 0.5, 1e-15);
  EXPECT_NEAR(d[1], 0.5, 1e-15);
}

TEST(InterpolatedMechanismTest, EqualCornersStayConstant) {
  Partition part =
      *Partition::Create(Box{Point{0.0, 0.0}, Point{1.0, 1.0}}, {1, 1});
  InterpolatedMechanism mech = Make(part, Matrix(4, 1, 0.3));
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    EXPECT_NEAR(mech.Unnormalized(RandomPoint(part.bounds(), rng), 0).value(),
                0.3, 1e-15);
  }
}

TEST(InterpolatedMechanismTest, NormalizedAnchorRowUnchanged) {
  Partition part =
      *Partition::Create(Box{Point{0.0, 0.0}, Point{2.0, 2.0}}, {2, 2});
  std::mt19937_64 rng(4);
  Matrix t = LipschitzTable(part, 3, {0.4, 0.4}, rng);
  for (size_t a = 0; a < t.rows(); ++a) {
    double s = 0.0;
    for (double v : t.Row(a)) s += v;
    for (size_t k = 0; k < t.cols(); ++k) t(a, k) /= s;
  }
  InterpolatedMechanism mech = Make(part, t);
  for (size_t a = 0; a < part.num_anchors(); ++a) {
    std::vector<double> d = mech.Distribution(part.Anchor(a)).value();
    for (size_t k = 0; k < 3; ++k) EXPECT_NEAR(d[k], t(a, k), 1e-15);
  }
}

TEST(InterpolatedMechanismTest, ScaleInvariance) {
  Partition part =
      *Partition::Create(Box{Point{0.0, 0.0}, Point{2.0, 2.0}}, {2, 2});
  std::mt19937_64 rng(5);
  Matrix t = LipschitzTable(part, 3, {0.4, 0.4}, rng);
  Matrix scaled = t;
  for (size_t a = 0; a < t.rows(); ++a) {
    for (size_t k = 0; k < 3; ++k) scaled(a, k) *= 7.5;
  }
  InterpolatedMechanism m1 = Make(part, t);
  InterpolatedMechanism m2 = Make(part, scaled);
  for (int i = 0; i < 100; ++i) {
    const Point x = RandomPoint(part.bounds(), rng);
    std::vector<double> d1 = m1.Distribution(x).value();
    std::vector<double> d2 = m2.Distribution(x).value();
    double sum = 0.0;
    for (size_t k = 0; k < 3; ++k) {
      EXPECT_NEAR(d1[k], d2[k], 1e-14);
      sum += d1[k];
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(InterpolatedMechanismTest, OutOfDomain) {
  Partition part = *Partition::Create(Box{Point{0.0}, Point{1.0}}, {1});
  InterpolatedMechanism mech = Make(part, Matrix(2, 2, 0.5));
  EXPECT_FALSE(mech.Distribution(Point{1.5}).ok());
  EXPECT_FALSE(mech.Unnormalized(Point{-0.1}, 0).ok());
  std::mt19937_64 rng(1);
  EXPECT_FALSE(mech.Sample(Point{2.0}, rng).ok());
}

TEST(InterpolatedMechanismTest, ContinuousAcrossFaces) {
  std::mt19937_64 rng(6);
  Partition part =
      *Partition::Create(Box{Point{0.0, 0.0}, Point{3.0, 3.0}}, {3, 3});
  InterpolatedMechanism mech = Make(part, LipschitzTable(part, 3, {1, 1}, rng));
  for (int i = 0; i < 200; ++i) {
    const double face = 1.0 + static_cast<double>(i % 2);
    const double along = 3.0 * UniformUnit(rng);
    for (int axis = 0; axis < 2; ++axis) {
      Point on = axis == 0 ? Point{face, along} : Point{along, face};
      Point below = on;
      below[axis] = std::nextafter(face, 0.0);
      std::vector<double> a = mech.Distribution(on).value();
      std::vector<double> b = mech.Distribution(below).value();
      for (size_t k = 0; k < 3; ++k) EXPECT_NEAR(a[k], b[k], 1e-10);
    }
  }
}

TEST(SampleTest, DegenerateDistribution) {
  Partition part = *Partition::Create(Box{Point{0.0}, Point{1.0}}, {1});
  Matrix t(2, 3, 1e-300);
  t(0, 0) = 1.0;
  t(1, 0) = 1.0;
  InterpolatedMechanism mech = Make(part, t);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_EQ(mech.Sample(Point{UniformUnit(rng)}, rng).value(), 0u);
  }
}

TEST(SampleTest, DeterministicPerSeed) {
  std::mt19937_64 gen(7);
  Partition part =
      *Partition::Create(Box{Point{0.0, 0.0}, Point{2.0, 2.0}}, {2, 2});
  InterpolatedMechanism mech = Make(part, LipschitzTable(part, 5, {1, 1}, gen));
  std::mt19937_64 a(42), b(42);
  for (int i = 0; i < 500; ++i) {
    EXPECT_EQ(mech.Sample(Point{0.3, 1.7}, a).value(),
              mech.Sample(Point{0.3, 1.7}, b).value());
  }
}

TEST(SampleTest, FrequenciesWithinThreeSigma) {
  std::mt19937_64 gen(8);
  Partition part =
      *Partition::Create(Box{Point{0.0, 0.0}, Point{2.0, 2.0}}, {2, 2});
  InterpolatedMechanism mech = Make(part, LipschitzTable(part, 4, {1, 1}, gen));
  const Point x{0.7, 1.2};
  std::vector<double> d = mech.Distribution(x).value();
  const int n = 100000;
  std::vector<int> counts(4, 0);
  std::mt19937_64 rng(11);
  for (int i = 0; i < n; ++i) ++counts[mech.Sample(x, rng).value()];
  for (size_t k = 0; k < 4; ++k) {
    const double sigma = std::sqrt(n * d[k] * (1.0 - d[k]));
    EXPECT_LE(std::abs(counts[k] - n * d[k]), 3.0 * sigma) << "output " << k;
  }
}

TEST(SoftmaxTest, StableForLargeLogs) {
  std::vector<double> p = SoftmaxFromLogs({-1000.0, -1000.0 + std::log(3.0)});
  EXPECT_NEAR(p[0], 0.25, 1e-12);
  EXPECT_NEAR(p[1], 0.75, 1e-12);
}

// One-dimensional validity within and across intervals, on a dense grid.
TEST(LipschitzPropertyTest, OneDimensionalDenseGrid) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    const double eps = 0.3 + trial * 0.4;
    Partition part = *Partition::Create(Box{Point{0.0}, Point{4.0}}, {4});
    InterpolatedMechanism mech = Make(part, LipschitzTable(part, 3, {eps}, rng));
    for (int i = 0; i <= 200; ++i) {
      for (int j = 0; j <= 200; j += 7) {
        const Point a{4.0 * i / 200.0};
        const Point b{4.0 * j / 200.0};
        std::vector<double> la = mech.LogUnnormalized(a).value();
        std::vector<double> lb = mech.LogUnnormalized(b).value();
        for (size_t k = 0; k < 3; ++k) {
          EXPECT_LE(std::abs(la[k] - lb[k]), eps * std::abs(a[0] - b[0]) + 1e-9);
        }
      }
    }
  }
}

// Dimension-wise, Hoelder-aggregated and normalized (doubled) bounds on
// random pairs in two and three dimensions.
TEST(LipschitzPropertyTest, MultiDimensionalBounds) {
  std::mt19937_64 rng(13);
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    const Metric metric = Metric::Create(p).value();
    for (size_t dim : {2u, 3u}) {
      std::vector<double> lower(dim, 0.0), upper(dim);
      std::vector<int> cells(dim);
      std::vector<double> eps(dim);
      for (size_t l = 0; l < dim; ++l) {
        cells[l] = 2 + static_cast<int>(l);
        upper[l] = 1.0 + l;
        eps[l] = 0.2 + 0.9 * UniformUnit(rng);
      }
      Partition part =
          *Partition::Create(Box{Point(lower), Point(upper)}, cells);
      InterpolatedMechanism mech =
          Make(part, LipschitzTable(part, 4, eps, rng), eps);
      const double eff = Dual(eps, metric);
      for (int trial = 0; trial < 400; ++trial) {
        const Point a = RandomPoint(part.bounds(), rng);
        const Point b = RandomPoint(part.bounds(), rng);
        const double d = LpDistance(a, b, metric).value();
        double dw = 0.0;
        for (size_t l = 0; l < dim; ++l) dw += eps[l] * std::abs(a[l] - b[l]);
        std::vector<double> la = mech.LogUnnormalized(a).value();
        std::vector<double> lb = mech.LogUnnormalized(b).value();
        std::vector<double> na = mech.Distribution(a).value();
        std::vector<double> nb = mech.Distribution(b).value();
        for (size_t k = 0; k < 4; ++k) {
          const double diff = std::abs(la[k] - lb[k]);
          EXPECT_LE(diff, dw + 1e-9);
          EXPECT_LE(diff, eff * d + 1e-9);
          EXPECT_LE(std::abs(std::log(na[k]) - std::log(nb[k])),
                    2.0 * eff * d + 1e-9);
        }
      }
    }
  }
}

}  // namespace
}  // namespace mdp
