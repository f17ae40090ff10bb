#include <gtest/gtest.h>

#include <random>

#include "isaacs/static_game.hpp"

using namespace isaacs;

namespace {

LocalGameMatrix<double> pennies() {
  LocalGameMatrix<double> f(2, 2);
  f << 1, -1, -1, 1;
  return f;
}

}  // namespace

TEST(StaticGame, MatchingPennies) {
  const auto f = pennies();
  const auto s = static_saddle(f);
  EXPECT_EQ(s.lower_value, -1.0);
  EXPECT_EQ(s.upper_value, 1.0);
  for (double p : {0.0, 0.25, 0.5, 1.0}) EXPECT_DOUBLE_EQ(mixed_value(f, p), 1.0 - 2.0 * p);
}

TEST(StaticGame, CounterMapsAndTies) {
  LocalGameMatrix<double> f(2, 3);
  f << 3, 1, 1,
       0, 2, 5;
  const auto lo = lower_value(f);
  EXPECT_EQ(lo.value, 1.0);
  EXPECT_EQ(lo.u_star, 0);
  EXPECT_EQ(lo.beta_star, (ResponseMap{1, 0}));  // tie at column 1 vs 2 goes low
  const auto up = upper_value(f);
  EXPECT_EQ(up.value, 2.0);
  EXPECT_EQ(up.v_star, 1);
  EXPECT_EQ(up.alpha_star, (ResponseMap{0, 1, 1}));
  EXPECT_EQ(lower_value_only(f), lo.value);
  EXPECT_EQ(upper_value_only(f), up.value);
}

TEST(StaticGame, SaddlePointGameHasValue) {
  LocalGameMatrix<double> f(2, 2);
  f << 2, 3,
       1, 4;
  const auto s = static_saddle(f);
  EXPECT_EQ(s.lower_value, 2.0);
  EXPECT_EQ(s.upper_value, 2.0);
}

TEST(StaticGame, RejectsBadInput) {
  EXPECT_THROW(lower_value(LocalGameMatrix<double>(0, 2)), InvalidArgument);
  EXPECT_THROW(mixed_value(pennies(), 1.5), InvalidArgument);
  EXPECT_THROW(representation_residual(LocalGameMatrix<double>::Zero(5, 2), 0.5),
               InvalidArgument);
}

TEST(StaticGame, RepresentationIdentityRandom) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> size(1, 4);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  std::uniform_real_distribution<double> prob(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    LocalGameMatrix<double> f(size(rng), size(rng));
    for (Eigen::Index i = 0; i < f.size(); ++i) f.data()[i] = entry(rng);
    const auto r = representation_residual(f, prob(rng));
    EXPECT_LE(r.residual, 1e-12);
  }
}

TEST(StaticGame, PlayOnePeriod) {
  const auto f = pennies();
  PeriodChoice u{0, {1, 0}};  // counter: against v=0 play 1
  PeriodChoice v{1, {0, 1}};  // counter: match u
  EXPECT_EQ(play_one_period(f, 0.5, u, v, 0.2), 1.0);   // heads: f(0, beta(0)=0)
  EXPECT_EQ(play_one_period(f, 0.5, u, v, 0.7), -1.0);  // tails: f(alpha(1)=0, 1)
  EXPECT_THROW(play_one_period(f, 0.5, u, v, 1.0), InvalidArgument);
  PeriodChoice bad{0, {3, 0}};
  EXPECT_THROW(play_one_period(f, 0.5, bad, v, 0.2), InvalidArgument);
}

TEST(StaticGame, FloatScalar) {
  Eigen::MatrixXf f(2, 2);
  f << 1.f, -1.f, -1.f, 1.f;
  EXPECT_EQ(lower_value(f).value, -1.f);
}
