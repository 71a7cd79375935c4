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

#include "stackrel/kmvn.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "stackrel/errors.h"
#include "testing/test_util.h"

namespace stackrel {
namespace {

using testing::BoxSurface;
using testing::KmvnBySort;
using testing::RandomCloud;

constexpr double kPi = std::numbers::pi;

void ExpectSameResult(const KmvnResult& got, const KmvnResult& want) {
  ASSERT_EQ(got.pairs.size(), want.pairs.size());
  for (std::size_t i = 0; i < got.pairs.size(); ++i) {
    EXPECT_EQ(got.pairs[i], want.pairs[i]) << "rank " << i;
    EXPECT_EQ(got.angles[i], want.angles[i]);
    EXPECT_EQ(got.distances[i], want.distances[i]);
  }
  EXPECT_EQ(got.z_op1, want.z_op1);
  EXPECT_EQ(got.z_op2, want.z_op2);
}

TEST(VerticalAngleTest, MatchesFormulaAtLandmarks) {
  EXPECT_DOUBLE_EQ(*VerticalAngle({0, 0, 1}), kPi);
  EXPECT_DOUBLE_EQ(*VerticalAngle({0, 0, -3}), 0.0);
  EXPECT_DOUBLE_EQ(*VerticalAngle({1, 0, 0}), kPi / 2);
  EXPECT_NEAR(*VerticalAngle({1, 0, 1}), 3 * kPi / 4, 1e-15);
}

TEST(VerticalAngleTest, DegenerateDirectionIsSignaledNotNan) {
  EXPECT_FALSE(VerticalAngle({0, 0, 0}).has_value());
  EXPECT_FALSE(VerticalAngle({1e-10, 0, 0}).has_value());
  EXPECT_TRUE(VerticalAngle({1e-8, 0, 0}).has_value());
}

TEST(VerticalAngleTest, ClampsRoundedCosines) {
  EXPECT_DOUBLE_EQ(VerticalAngleFromCosine(1.0 + 1e-15), kPi);
  EXPECT_DOUBLE_EQ(VerticalAngleFromCosine(-1.0 - 1e-15), 0.0);
}

TEST(SelectKmvnTest, SinglePairDirections) {
  const std::vector<Point3> up{{0, 0, 1}};
  const std::vector<Point3> origin{{0, 0, 0}};
  const KmvnOptions k1{.k = 1};
  KmvnResult r = SelectKmvn(up, origin, k1);
  EXPECT_EQ(r.z_op1, 1.0);
  EXPECT_EQ(r.z_op2, 1.0);
  r = SelectKmvn(origin, up, k1);
  EXPECT_EQ(r.z_op1, -1.0);
  EXPECT_EQ(r.z_op2, 1.0);
}

TEST(SelectKmvnTest, ReturnsAllPairsWhenKExceedsThem) {
  Rng rng(3);
  const auto a = RandomCloud(4, rng);
  const auto b = RandomCloud(5, rng, {0, 0, 1});
  const KmvnResult r = SelectKmvn(a, b, {.k = 100});
  EXPECT_EQ(r.pairs.size(), 20u);
}

TEST(SelectKmvnTest, ErrorsOnEmptyCloudZeroKAndAllDegenerate) {
  const std::vector<Point3> p{{0, 0, 0}};
  const std::vector<Point3> none;
  EXPECT_THROW(SelectKmvn(none, p), ValidationError);
  EXPECT_THROW(SelectKmvn(p, p, {.k = 0}), ValidationError);
  EXPECT_THROW(SelectKmvn(p, p), DegenerateError);
}

TEST(SelectKmvnTest, SkipsDegeneratePairs) {
  const std::vector<Point3> a{{0, 0, 0}, {0, 0, 1}};
  const std::vector<Point3> b{{0, 0, 0}};
  const KmvnResult r = SelectKmvn(a, b, {.k = 5});
  ASSERT_EQ(r.pairs.size(), 1u);
  EXPECT_EQ(r.pairs[0], (PointPair{1, 0}));
}

TEST(SelectKmvnTest, TieBreakPrefersShorterThenLowerIndex) {
  // Three exactly vertical pairs of different lengths, two of equal length.
  const std::vector<Point3> a{{0, 0, 2}, {1, 0, 1}, {2, 0, 1}};
  const std::vector<Point3> b{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  const KmvnResult r = SelectKmvn(a, b, {.k = 3});
  ASSERT_EQ(r.pairs.size(), 3u);
  EXPECT_EQ(r.pairs[0], (PointPair{1, 1}));
  EXPECT_EQ(r.pairs[1], (PointPair{2, 2}));
  EXPECT_EQ(r.pairs[2], (PointPair{0, 0}));
}

class OracleTest : public ::testing::TestWithParam<VerticalSelection> {};

TEST_P(OracleTest, MatchesExhaustiveSortOnRandomClouds) {
  Rng rng(17);
  std::uniform_int_distribution<int> size(1, 60);
  for (int trial = 0; trial < 60; ++trial) {
    const auto a = RandomCloud(size(rng), rng, {0, 0, 0.1 * (trial % 3)});
    const auto b = RandomCloud(size(rng), rng);
    for (std::size_t k : {1u, 10u, 50u}) {
      const KmvnOptions opt{.k = k, .selection = GetParam()};
      ExpectSameResult(SelectKmvn(a, b, opt), KmvnBySort(a, b, opt));
    }
  }
}

TEST_P(OracleTest, MatchesOracleOnGridWithManyTies) {
  std::vector<Point3> a;
  std::vector<Point3> b;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      a.push_back({0.1 * i, 0.1 * j, 0.5});
      b.push_back({0.1 * i, 0.1 * j, 0.0});
    }
  }
  const KmvnOptions opt{.k = 20, .selection = GetParam()};
  ExpectSameResult(SelectKmvn(a, b, opt), KmvnBySort(a, b, opt));
}

INSTANTIATE_TEST_SUITE_P(Selections, OracleTest,
                         ::testing::Values(VerticalSelection::kLine,
                                           VerticalSelection::kDirected));

TEST(KmvnPropertyTest, AntisymmetricAndInRange) {
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = RandomCloud(40, rng, {0, 0, 0.2});
    const auto b = RandomCloud(30, rng);
    const KmvnResult ab = SelectKmvn(a, b, {.k = 10});
    const KmvnResult ba = SelectKmvn(b, a, {.k = 10});
    EXPECT_EQ(ab.z_op1, -ba.z_op1);
    EXPECT_EQ(ab.z_op2, ba.z_op2);
    for (std::size_t i = 0; i < ab.pairs.size(); ++i) {
      EXPECT_EQ(ab.pairs[i].index_a, ba.pairs[i].index_b);
      EXPECT_EQ(ab.pairs[i].index_b, ba.pairs[i].index_a);
    }
    EXPECT_GE(ab.z_op1, -1.0);
    EXPECT_LE(ab.z_op1, 1.0);
    EXPECT_GE(ab.z_op2, 0.0);
  }
}

TEST(KmvnPropertyTest, UniformScalingScalesOnlyDistance) {
  Rng rng(29);
  const auto a = RandomCloud(50, rng, {0, 0, 0.3});
  const auto b = RandomCloud(50, rng);
  const double s = 4.0;  // a power of two keeps every product exact
  auto scaled = [s](std::vector<Point3> p) {
    for (Point3& q : p) q *= s;
    return p;
  };
  const KmvnResult r = SelectKmvn(a, b, {.k = 10});
  const KmvnResult t = SelectKmvn(scaled(a), scaled(b), {.k = 10});
  EXPECT_EQ(t.pairs, r.pairs);
  EXPECT_DOUBLE_EQ(t.z_op1, r.z_op1);
  EXPECT_DOUBLE_EQ(t.z_op2, s * r.z_op2);
}

TEST(KmvnPropertyTest, InvariantUnderZRotationAndTranslation) {
  Rng rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto a = RandomCloud(80, rng, {0, 0, 0.2});
  const auto b = RandomCloud(80, rng);
  const KmvnResult r = SelectKmvn(a, b);
  for (int trial = 0; trial < 20; ++trial) {
    const Quaternion q = Quaternion::FromAxisAngle({0, 0, 1}, 3.0 * u(rng));
    const Point3 t{u(rng), u(rng), u(rng)};
    auto move = [&](std::vector<Point3> p) {
      for (Point3& x : p) x = q.Rotate(x) + t;
      return p;
    };
    const KmvnResult m = SelectKmvn(move(a), move(b));
    EXPECT_NEAR(m.z_op1, r.z_op1, 1e-9);
    EXPECT_NEAR(m.z_op2, r.z_op2, 1e-9);
  }
}

TEST(PairFeaturesTest, StackedBoxesPointUpAndSwapNegates) {
  Rng rng(37);
  const ObjectCloud bottom{1, "box", BoxSurface(0, 0, 0, 0.1, 0.1, 0.1, 800, rng)};
  const ObjectCloud top{2, "box", BoxSurface(0, 0, 0.1, 0.05, 0.05, 0.05, 800, rng)};
  const auto up = PairFeatures(top, bottom);
  const auto down = PairFeatures(bottom, top);
  EXPECT_GT(up[0], 0.7);
  EXPECT_EQ(down[0], -up[0]);
  EXPECT_EQ(down[1], up[1]);
}

TEST(PairFeaturesTest, DistantSideBySideBoxesAreNearHorizontal) {
  Rng rng(41);
  const ObjectCloud a{1, "box", BoxSurface(0, 0, 0, 0.05, 0.05, 0.1, 500, rng)};
  const ObjectCloud b{2, "box", BoxSurface(1.0, 0, 0, 0.05, 0.05, 0.1, 500, rng)};
  EXPECT_LT(std::abs(PairFeatures(a, b)[0]), 0.3);
}

TEST(CentroidZGapTest, DifferenceOfMeanHeights) {
  Rng rng(43);
  ObjectCloud a{1, {}, RandomCloud(30, rng)};
  EXPECT_EQ(CentroidZGap(a, a), 0.0);
  ObjectCloud b = a;
  for (Point3& p : b.points) p.z += 0.5;
  EXPECT_NEAR(CentroidZGap(b, a), 0.5, 1e-12);
}

TEST(AllPairFeaturesTest, CoversEveryOrderedPairAndMatchesDirectCalls) {
  Rng rng(47);
  Scene s;
  for (int i = 0; i < 4; ++i) {
    s.objects.push_back({i + 1, {}, RandomCloud(40, rng, {0.3 * i, 0, 0.1 * i})});
  }
  for (std::size_t jobs : {1u, 3u}) {
    const auto all = AllPairFeatures(s, {}, jobs);
    ASSERT_EQ(all.size(), 12u);
    for (const OrderedPairFeatures& f : all) {
      const KmvnResult direct = SelectKmvn(*s.Find(f.a), *s.Find(f.b));
      EXPECT_EQ(f.kmvn.z_op1, direct.z_op1);
      EXPECT_EQ(f.kmvn.z_op2, direct.z_op2);
      EXPECT_EQ(f.kmvn.pairs, direct.pairs);
    }
  }
}

TEST(AllPairFeaturesTest, FlagsDegeneratePairs) {
  Scene s;
  s.objects = {{1, {}, {{0, 0, 0}}}, {2, {}, {{0, 0, 0}}}, {3, {}, {{0, 0, 1}}}};
  int degenerate = 0;
  for (const auto& f : AllPairFeatures(s)) degenerate += f.degenerate;
  EXPECT_EQ(degenerate, 2);
}

}  // namespace
}  // namespace stackrel
