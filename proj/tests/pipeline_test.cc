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


#include "mdp/pipeline.h"

#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "mdp/evaluation.h"
#include "test_instances.h"

namespace mdp {
namespace {

TEST(PipelineTest, BuildsEveryTag) {
  auto inst = SynthesizeInstance(testing::SmallSpec(2));
  ASSERT_TRUE(inst.ok());
  MethodOptions opts;
  opts.sweep_resolution = 2;
  std::vector<std::string> tags = BaseMethodTags();
  tags.push_back("RMP-EM");
  for (const std::string& tag : tags) {
    auto m = BuildMethod(tag, *inst, 0.9, opts);
    ASSERT_TRUE(m.ok()) << tag << ": " << m.status();
    EXPECT_EQ((*m)->num_outputs(), inst->outputs.size());
    auto z = (*m)->Distribution(inst->prior.points[0]);
    ASSERT_TRUE(z.ok());
    double s = 0.0;
    for (double v : *z) s += v;
    EXPECT_NEAR(s, 1.0, 1e-12) << tag;
  }
}

TEST(PipelineTest, UnknownTagListsChoices) {
  auto inst = SynthesizeInstance(testing::SmallSpec(2));
  auto m = BuildMethod("Magic", *inst, 0.9, {});
  ASSERT_FALSE(m.ok());
  EXPECT_EQ(m.status().code(), absl::StatusCode::kInvalidArgument);
  EXPECT_NE(m.status().message().find("AIPO"), std::string::npos);
}

TEST(PipelineTest, SweepNoWorseThanEqualSplit) {
  for (uint64_t seed : {1u, 5u}) {
    auto inst = SynthesizeInstance(testing::SmallSpec(seed));
    ASSERT_TRUE(inst.ok());
    for (double eps : {0.4, 1.2}) {
      MethodOptions opts;
      opts.sweep_resolution = 3;
      auto sweep = BuildAipo(*inst, eps, opts);
      opts.budget_mode = BudgetMode::kEqual;
      auto equal = BuildAipo(*inst, eps, opts);
      ASSERT_TRUE(sweep.ok()) << sweep.status();
      ASSERT_TRUE(equal.ok()) << equal.status();
      EXPECT_LE(sweep->loss, equal->loss + 1e-9);
      EXPECT_FALSE(sweep->curve.empty());
      EXPECT_TRUE(equal->curve.empty());
      auto direct = ExpectedLoss(*sweep->mechanism, inst->prior, inst->loss);
      ASSERT_TRUE(direct.ok());
      EXPECT_NEAR(*direct, sweep->loss, 1e-9);
    }
  }
}

TEST(PipelineTest, ExplicitBudgetIsUsed) {
  auto inst = SynthesizeInstance(testing::SmallSpec(1));
  MethodOptions opts;
  opts.budget_mode = BudgetMode::kExplicit;
  opts.explicit_eps = {0.2, 0.3};
  auto r = BuildAipo(*inst, 1.0, opts);
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_EQ(r->budget.eps, opts.explicit_eps);
  opts.explicit_eps = {0.9, 0.9};  // exceeds the half-budget surface
  EXPECT_FALSE(BuildAipo(*inst, 1.0, opts).ok());
}

TEST(PipelineTest, LowerBoundBelowMethods) {
  auto inst = SynthesizeInstance(testing::SmallSpec(6));
  MethodOptions opts;
  opts.sweep_resolution = 2;
  for (double eps : {0.3, 1.5}) {
    auto lb = InstanceLowerBound(*inst, eps, opts);
    ASSERT_TRUE(lb.ok()) << lb.status();
    for (const std::string& tag : {"AIPO", "EM", "CoarseLP"}) {
      auto m = BuildMethod(tag, *inst, eps, opts);
      ASSERT_TRUE(m.ok());
      auto loss = ExpectedLoss(**m, inst->prior, inst->loss);
      EXPECT_GE(*loss, *lb - 1e-8) << tag;
    }
  }
}

TEST(PipelineTest, BudgetModeNames) {
  for (BudgetMode m : {BudgetMode::kSweep, BudgetMode::kEqual,
                       BudgetMode::kExplicit}) {
    auto parsed = ParseBudgetMode(BudgetModeName(m));
    ASSERT_TRUE(parsed.ok());
    EXPECT_EQ(*parsed, m);
  }
  EXPECT_FALSE(ParseBudgetMode("greedy").ok());
}

}  // namespace
}  // namespace mdp
