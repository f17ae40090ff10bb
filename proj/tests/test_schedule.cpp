#include <gtest/gtest.h>

#include <numeric>

#include "isaacs/errors.hpp"
#include "isaacs/schedule.hpp"

using namespace isaacs;

namespace {

PrioritySpec constant(double p) { return {PriorityFamily::kConstant, {p}}; }

int count(const MarkSequence& m, std::size_t from, std::size_t to) {
  return std::accumulate(m.marks.begin() + from, m.marks.begin() + to, 0);
}

}  // namespace

TEST(Partition, UniformAndValidation) {
  const auto p = make_uniform_partition(0.0, 1.0, 4);
  EXPECT_EQ(p.intervals(), 4u);
  EXPECT_DOUBLE_EQ(p.mesh(), 0.25);
  EXPECT_EQ(p.end(), 1.0);
  EXPECT_THROW(Partition(Eigen::Vector3d(0.0, 0.5, 0.5)), InvalidArgument);
  EXPECT_THROW(make_uniform_partition(0.0, 1.0, 0), InvalidArgument);
}

TEST(SubGrid, Blocks) {
  const auto u = SubGrid::uniform_blocks(10, 4);
  EXPECT_EQ(u.indices(), (std::vector<std::size_t>{0, 4, 8, 10}));
  const auto b = SubGrid::balanced_blocks(10, 4);
  EXPECT_EQ(b.indices(), (std::vector<std::size_t>{0, 4, 7, 10}));
  EXPECT_EQ(SubGrid::balanced_blocks(25, 5).blocks(), 5u);
  EXPECT_EQ(b.block_of(1), 0u);
  EXPECT_EQ(b.block_of(5), 1u);
  EXPECT_EQ(b.block_of(10), 2u);
  EXPECT_EQ(SubGrid::trivial(3).indices(), (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_THROW(SubGrid({0, 2, 2}), InvalidArgument);
  EXPECT_THROW(SubGrid({1, 3}), InvalidArgument);
}

TEST(Marks, ExactFractionsHaveZeroDeviation) {
  const auto part = make_uniform_partition(0.0, 1.0, 16);
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto s = make_marks(part, constant(p), 4);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(count(s.marks, 4 * i, 4 * i + 4), p * 4);
    const auto r = check_density(part, s.marks, s.subgrid, constant(p), 0.25);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.max_deviation, 0.0);
    EXPECT_EQ(r.max_block_length, 0.25);
  }
}

TEST(Marks, PassWithForcedEpsilon) {
  for (std::size_t n : {7u, 25u, 50u, 100u, 333u}) {
    const auto part = make_uniform_partition(0.0, 0.5, n);
    const std::size_t block = static_cast<std::size_t>(std::lround(std::sqrt(double(n))));
    for (const PrioritySpec& p :
         {constant(0.5), constant(0.7), PrioritySpec{PriorityFamily::kLinearTime, {0.3, 0.4}}}) {
      const auto s = make_marks(part, p, block);
      const double eps = forced_epsilon(part, s.subgrid, p);
      EXPECT_TRUE(check_density(part, s.marks, s.subgrid, p, eps).pass) << n;
    }
  }
}

TEST(Marks, ForcedEpsilonShrinksUnderRefinement) {
  const PrioritySpec p{PriorityFamily::kLinearTime, {0.3, 0.4}};
  double prev = 1.0;
  for (std::size_t n : {16u, 64u, 256u, 1024u}) {
    const auto part = make_uniform_partition(0.0, 1.0, n);
    const auto s = make_marks(part, p, static_cast<std::size_t>(std::sqrt(double(n))));
    const double eps = forced_epsilon(part, s.subgrid, p);
    EXPECT_LT(eps, prev);
    prev = eps;
  }
  EXPECT_LT(prev, 0.05);
}

TEST(Marks, AllOnesFailBelowOneHalf) {
  const auto part = make_uniform_partition(0.0, 1.0, 100);
  MarkSequence ones{std::vector<int>(100, 1)};
  const auto sub = SubGrid::uniform_blocks(100, 10);
  EXPECT_FALSE(check_density(part, ones, sub, constant(0.5), 0.49).pass);
  const auto r = check_density(part, ones, sub, constant(0.5), 0.5);
  EXPECT_EQ(r.max_deviation, 0.5);
  EXPECT_TRUE(r.pass);
}

TEST(Marks, RejectsStateDependentPriority) {
  const auto part = make_uniform_partition(0.0, 1.0, 4);
  const PrioritySpec p{PriorityFamily::kLogistic, {0.0, 0.0, 1.0}};
  EXPECT_THROW(make_marks(part, p, 2), InvalidArgument);
  MarkSequence short_marks{{1, 0}};
  EXPECT_THROW(check_density(part, short_marks, SubGrid::trivial(4), constant(0.5), 1.0),
               InvalidArgument);
}
