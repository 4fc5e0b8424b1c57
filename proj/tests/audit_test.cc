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


#include "mdp/audit.h"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"
#include "mdp/baselines.h"

namespace mdp {
namespace {

// Same distribution everywhere.
class ConstantMechanism : public PerturbationMechanism {
 public:
  explicit ConstantMechanism(std::vector<double> z) : z_(std::move(z)) {}
  size_t num_outputs() const override { return z_.size(); }
  std::string name() const override { return "constant"; }
  absl::StatusOr<std::vector<double>> Distribution(const Point&) const override {
    return z_;
  }

 private:
  std::vector<double> z_;
};

// Two outputs with probability 0.6 / 0.3 style rows picked by the sign of x.
class StepMechanism : public PerturbationMechanism {
 public:
  size_t num_outputs() const override { return 2; }
  std::string name() const override { return "step"; }
  absl::StatusOr<std::vector<double>> Distribution(
      const Point& x) const override {
    if (x[0] < 0.5) return std::vector<double>{0.6, 0.4};
    return std::vector<double>{0.3, 0.7};
  }
};

Box UnitSquare() { return {Point{0.0, 0.0}, Point{1.0, 1.0}}; }

ExponentialMechanism PlanarEm(double eps) {
  OutputDomain out;
  out.candidates = {Point{0.0, 0.0}, Point{1.0, 0.0}, Point{0.0, 1.0},
                    Point{0.7, 0.6}};
  return *ExponentialMechanism::Create(out, eps, Metric::L2(), 1.0);
}

TEST(PprTest, IdenticalDistributionsGiveZero) {
  ConstantMechanism m({0.2, 0.8});
  auto r = Ppr(m, Point{0.0}, Point{3.0}, 1, Metric::L1());
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(*r, 0.0);
}

TEST(PprTest, StepExample) {
  StepMechanism m;
  auto r = Ppr(m, Point{0.0}, Point{1.0}, 0, Metric::L1());
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR(*r, std::log(2.0), 1e-15);
}

TEST(PprTest, ScalesInverselyWithDistance) {
  StepMechanism m;
  auto near = Ppr(m, Point{0.0}, Point{1.0}, 0, Metric::L1());
  auto far = Ppr(m, Point{0.0}, Point{4.0}, 0, Metric::L1());
  EXPECT_NEAR(*far, *near / 4.0, 1e-15);
}

TEST(PprTest, CoincidentPointsAreAnError) {
  StepMechanism m;
  EXPECT_FALSE(Ppr(m, Point{0.2}, Point{0.2}, 0, Metric::L1()).ok());
  EXPECT_FALSE(Ppr(m, Point{0.2}, Point{0.3}, 5, Metric::L1()).ok());
}

TEST(PprTest, ZeroProbabilityIsFloored) {
  ConstantMechanism zero({1.0, 0.0});
  auto r = Ppr(zero, Point{0.0}, Point{1.0}, 1, Metric::L1());
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(*r, 0.0);
}

TEST(SampleUniformPointsTest, InsideBoxAndReproducible) {
  const Box box{Point{-1.0, 2.0}, Point{3.0, 2.5}};
  const std::vector<Point> a = SampleUniformPoints(box, 500, 9);
  const std::vector<Point> b = SampleUniformPoints(box, 500, 9);
  const std::vector<Point> c = SampleUniformPoints(box, 500, 10);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  for (const Point& p : a) EXPECT_TRUE(box.Contains(p));
}

TEST(AuditTest, ConstantMechanismHasNoLeakage) {
  ConstantMechanism m({0.1, 0.2, 0.7});
  AuditOptions opts;
  opts.eps = 0.5;
  opts.sample_count = 50;
  auto r = RunAudit(m, UnitSquare(), opts);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->pair_count, 50u * 49u / 2u);
  EXPECT_EQ(r->violating_pairs, 0u);
  EXPECT_EQ(r->violation_ratio, 0.0);
  EXPECT_EQ(r->histogram[0].count, r->pair_count);
  EXPECT_EQ(r->max_ppr, 0.0);
}

TEST(AuditTest, MatchesBruteForceCount) {
  const ExponentialMechanism em = PlanarEm(1.0);  // exact bound 2 eps' = 2
  const std::vector<Point> pts = SampleUniformPoints(UnitSquare(), 60, 4);
  for (double eps : {0.5, 1.0, 1.5, 2.5}) {
    AuditOptions opts;
    opts.eps = eps;
    auto r = AuditPoints(em, pts, opts);
    ASSERT_TRUE(r.ok());
    uint64_t violating = 0;
    double max_ppr = 0.0;
    for (size_t i = 0; i < pts.size(); ++i) {
      for (size_t j = i + 1; j < pts.size(); ++j) {
        double worst = 0.0;
        for (size_t k = 0; k < em.num_outputs(); ++k) {
          worst = std::max(worst, *Ppr(em, pts[i], pts[j], k, Metric::L2()));
        }
        if (worst > eps * (1.0 + 1e-12)) ++violating;
        max_ppr = std::max(max_ppr, worst);
      }
    }
    EXPECT_EQ(r->violating_pairs, violating) << eps;
    EXPECT_NEAR(r->max_ppr, max_ppr, 1e-12);
    EXPECT_NEAR(r->violation_ratio, 100.0 * violating / r->pair_count, 1e-12);
    EXPECT_GE(r->violation_ratio, 0.0);
    EXPECT_LE(r->violation_ratio, 100.0);
    EXPECT_EQ(r->max_ppr, r->offenders.empty() ? 0.0 : r->offenders[0].ppr);
  }
}

TEST(AuditTest, HistogramCountsEveryPair) {
  const ExponentialMechanism em = PlanarEm(1.7);
  AuditOptions opts;
  opts.eps = 1.0;
  opts.sample_count = 80;
  opts.histogram_bins = 7;
  auto r = RunAudit(em, UnitSquare(), opts);
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r->histogram.size(), 8u);
  uint64_t total = 0;
  for (const HistogramBin& b : r->histogram) total += b.count;
  EXPECT_EQ(total, r->pair_count);
  EXPECT_NEAR(r->histogram[6].hi, 2.0, 1e-15);
  EXPECT_TRUE(std::isinf(r->histogram[7].hi));
}

TEST(AuditTest, ViolationsShrinkAsBudgetGrows) {
  const ExponentialMechanism em = PlanarEm(2.0);
  double prev = 101.0;
  for (double eps : {0.5, 1.0, 2.0, 3.0, 4.0}) {
    AuditOptions opts;
    opts.eps = eps;
    opts.sample_count = 60;
    auto r = RunAudit(em, UnitSquare(), opts);
    ASSERT_TRUE(r.ok());
    EXPECT_LE(r->violation_ratio, prev);
    prev = r->violation_ratio;
  }
  EXPECT_EQ(prev, 0.0);  // ratio never exceeds 2 * 2 * 0.5 = 2 <= 4
}

TEST(AuditTest, DeterministicAcrossThreads) {
  const ExponentialMechanism em = PlanarEm(1.5);
  AuditOptions opts;
  opts.eps = 1.0;
  opts.sample_count = 90;
  opts.seed = 12;
  auto one = RunAudit(em, UnitSquare(), opts);
  opts.threads = 4;
  auto four = RunAudit(em, UnitSquare(), opts);
  ASSERT_TRUE(one.ok());
  ASSERT_TRUE(four.ok());
  EXPECT_EQ(AuditReportToJson(*one), AuditReportToJson(*four));
}

TEST(AuditTest, OffendersSortedAndBounded) {
  const ExponentialMechanism em = PlanarEm(2.0);
  AuditOptions opts;
  opts.eps = 0.5;
  opts.sample_count = 40;
  opts.top_k = 5;
  auto r = RunAudit(em, UnitSquare(), opts);
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r->offenders.size(), 5u);
  for (size_t t = 1; t < 5; ++t) {
    EXPECT_GE(r->offenders[t - 1].ppr, r->offenders[t].ppr);
  }
  for (const PairOffender& o : r->offenders) EXPECT_LT(o.i, o.j);
}

TEST(AuditTest, RejectsBadOptions) {
  ConstantMechanism m({1.0});
  AuditOptions opts;
  opts.eps = 0.0;
  EXPECT_FALSE(RunAudit(m, UnitSquare(), opts).ok());
  opts.eps = 1.0;
  opts.histogram_bins = 0;
  EXPECT_FALSE(RunAudit(m, UnitSquare(), opts).ok());
  opts.histogram_bins = 3;
  EXPECT_FALSE(RunAudit(m, {Point{0.0}, Point{0.0}}, opts).ok());
}

TEST(AuditTest, JsonAndCsvFormats) {
  StepMechanism m;
  AuditOptions opts;
  opts.eps = 0.1;
  opts.sample_count = 10;
  opts.histogram_bins = 2;
  opts.top_k = 3;
  auto r = RunAudit(m, {Point{0.0}, Point{1.0}}, opts);
  ASSERT_TRUE(r.ok());
  const nlohmann::json j = nlohmann::json::parse(AuditReportToJson(*r));
  for (const char* key :
       {"eps", "seed", "sampled_points", "pair_count", "violating_pairs",
        "violation_ratio", "max_ppr", "top_offenders"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["pair_count"].get<uint64_t>(), 45u);
  EXPECT_LE(j["top_offenders"].size(), 3u);

  std::ostringstream csv;
  WriteHistogramCsv(*r, csv);
  const std::string text = csv.str();
  EXPECT_EQ(text.rfind("bin_lo,bin_hi,count\n0,0.10000000000000001,", 0), 0u);
  EXPECT_NE(text.find(",inf,"), std::string::npos);
}

}  // namespace
}  // namespace mdp
