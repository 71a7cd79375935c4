// Copyright 2026 The Stackrel Authors
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


#include "stackrel/vmfml.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "stackrel/errors.h"
#include "stackrel/rng.h"
#include "testing/test_util.h"

namespace stackrel {
namespace {

using testing::Flatten;
using testing::NumericGradient;
using testing::RelativeError;
using testing::Unflatten;

Eigen::MatrixXd RandomMatrix(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

std::vector<Embedding> RandomBatch(int n, int d, int k, Rng& rng) {
  std::uniform_int_distribution<int> label(0, k - 1);
  std::vector<Embedding> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(MakeEmbedding(RandomMatrix(d, 1, rng).col(0), DomainTag::Source(0), label(rng)));
  }
  return out;
}

TEST(VmfmlPosteriorTest, EqualWeightsGiveUniform) {
  VmfmlHead head{Eigen::MatrixXd::Ones(4, 3), 20.0};
  const Eigen::VectorXd p = VmfmlPosterior(head, Eigen::Vector3d(0.0, 0.6, 0.8));
  EXPECT_TRUE(p.isApproxToConstant(0.25, 1e-15));
}

TEST(VmfmlPosteriorTest, OrthogonalCompetitors) {
  VmfmlHead head{Eigen::MatrixXd::Identity(3, 3), 20.0};
  const Eigen::VectorXd p = VmfmlPosterior(head, Eigen::Vector3d::UnitX());
  const double want = std::exp(20.0) / (std::exp(20.0) + 2.0);
  EXPECT_NEAR(p[0], want, 1e-15);
  EXPECT_NEAR(p.sum(), 1.0, 1e-12);
}

TEST(VmfmlPosteriorTest, InvariantToPositiveRowScaling) {
  Rng rng = MakeRng(1, "posterior");
  for (int trial = 0; trial < 20; ++trial) {
    VmfmlHead head{RandomMatrix(5, 8, rng), 15.0};
    const Eigen::VectorXd z = RandomMatrix(8, 1, rng).col(0).normalized();
    const Eigen::VectorXd before = VmfmlPosterior(head, z);
    head.raw_weights *= 7.0;
    head.raw_weights.row(trial % 5) *= 0.01;
    const Eigen::VectorXd after = VmfmlPosterior(head, z);
    EXPECT_LT((before - after).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_TRUE((after.array() > 0.0).all());
    EXPECT_NEAR(after.sum(), 1.0, 1e-12);
  }
}

TEST(VmfmlPosteriorTest, ZeroRowThrows) {
  VmfmlHead head{Eigen::MatrixXd::Identity(3, 3), 20.0};
  head.raw_weights.row(1).setZero();
  EXPECT_THROW(VmfmlPosterior(head, Eigen::Vector3d::UnitX()), ValidationError);
}

TEST(VmfmlLossTest, OppositeDirectionsExample) {
  Eigen::MatrixXd w(2, 3);
  w << 0.0, 0.0, 2.0, 0.0, 0.0, -3.0;
  const VmfmlHead head{w, 20.0};
  const std::vector<Embedding> batch = {{Eigen::Vector3d::UnitZ(), DomainTag::Source(0), 0}};
  const VmfmlLossGrad r = VmfmlLossAndGrad(head, batch);
  EXPECT_NEAR(r.loss, std::log1p(std::exp(-40.0)), 1e-30);
  EXPECT_NEAR(r.loss, 4.25e-18, 0.01e-18);
}

TEST(VmfmlLossTest, PerfectFitHasZeroLossAndGradient) {
  const VmfmlHead head{Eigen::MatrixXd::Identity(3, 3), 1e4};
  std::vector<Embedding> batch;
  for (int j = 0; j < 3; ++j) batch.push_back({Eigen::VectorXd::Unit(3, j), DomainTag::Source(0), j});
  const VmfmlLossGrad r = VmfmlLossAndGrad(head, batch);
  EXPECT_EQ(r.loss, 0.0);
  EXPECT_LT(r.grad.cwiseAbs().maxCoeff(), 1e-300);
}

TEST(VmfmlLossTest, LossIsSummedOverTheBatch) {
  Rng rng = MakeRng(2, "sum");
  const VmfmlHead head{RandomMatrix(3, 4, rng), 5.0};
  const auto batch = RandomBatch(6, 4, 3, rng);
  double sum = 0.0;
  for (const Embedding& e : batch) {
    sum -= std::log(VmfmlPosterior(head, e.vector)[*e.label]);
  }
  EXPECT_NEAR(VmfmlLossAndGrad(head, batch).loss, sum, 1e-12);
}

TEST(VmfmlLossTest, GradientMatchesFiniteDifferences) {
  Rng rng = MakeRng(3, "fd");
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 2 + trial % 4;
    const int d = 3 + trial % 6;
    const VmfmlHead head{RandomMatrix(k, d, rng), 1.0 + trial};
    const auto batch = RandomBatch(10, d, k, rng);
    const VmfmlLossGrad r = VmfmlLossAndGrad(head, batch);
    auto f = [&](const Eigen::VectorXd& x) {
      return VmfmlLossAndGrad({Unflatten(x, k, d), head.concentration}, batch).loss;
    };
    const Eigen::VectorXd numeric = NumericGradient(f, Flatten(head.raw_weights));
    EXPECT_LT(RelativeError(Flatten(r.grad), numeric), 1e-4) << "trial " << trial;
  }
}

TEST(VmfmlLossTest, RejectsMissingOrOutOfRangeLabels) {
  const VmfmlHead head{Eigen::MatrixXd::Identity(3, 3), 20.0};
  std::vector<Embedding> batch = {{Eigen::Vector3d::UnitX(), DomainTag::Source(0), std::nullopt}};
  EXPECT_THROW(VmfmlLossAndGrad(head, batch), ValidationError);
  batch[0].label = 3;
  EXPECT_THROW(VmfmlLossAndGrad(head, batch), ValidationError);
}

}  // namespace
}  // namespace stackrel
