#include <gtest/gtest.h>

#include <cmath>

#include "isaacs/errors.hpp"
#include "isaacs/lattice.hpp"

using namespace isaacs;

namespace {

ProblemSpec constant_problem(double mu, double sigma) {
  CoefficientSpec c{CoefficientFamily::kConstant, {mu, sigma}, 1, 1};
  PayoffSpec g{PayoffFamily::kCos, {1.0, 1.0, 0.0}};
  const auto one = ActionSet::scalars({0.0});
  return ProblemSpec(c, g, {PriorityFamily::kConstant, {0.5}}, one, one, 1.0, 0.0,
                     VectorXd::Zero(1));
}

}  // namespace

TEST(GaussHermite, ThreePoint) {
  const auto r = gauss_hermite(3);
  EXPECT_NEAR(r.nodes(0), -std::sqrt(3.0), 1e-14);
  EXPECT_NEAR(r.nodes(1), 0.0, 1e-14);
  EXPECT_NEAR(r.nodes(2), std::sqrt(3.0), 1e-14);
  EXPECT_NEAR(r.weights(0), 1.0 / 6.0, 1e-14);
  EXPECT_NEAR(r.weights(1), 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(r.weights.dot(r.nodes), 0.0, 1e-14);
  EXPECT_NEAR(r.weights.dot(r.nodes.cwiseAbs2()), 1.0, 1e-14);
}

TEST(GaussHermite, HigherMoments) {
  for (int q : {5, 7}) {
    const auto r = gauss_hermite(q);
    EXPECT_NEAR(r.weights.sum(), 1.0, 1e-14);
    EXPECT_NEAR(r.weights.dot(r.nodes.array().pow(4).matrix()), 3.0, 1e-12);
  }
  EXPECT_THROW(gauss_hermite(4), InvalidArgument);
}

TEST(Lattice, DegenerateDiffusionSingleSuccessor) {
  const auto spec = constant_problem(0.5, 0.0);
  const SpatialGrid grid(-2.0, 2.0, 41);
  const auto part = make_uniform_partition(0.0, 1.0, 10);
  const auto lat = build_lattice(spec, grid, part, 3);
  double total = 0.0, mean = 0.0;
  for (const auto& s : lat.successors(1, 20, 0, 0)) {
    total += s.weight;
    mean += s.weight * s.position;
  }
  EXPECT_NEAR(total, 1.0, 1e-15);
  EXPECT_NEAR(mean, 0.05, 1e-15);
  for (const auto& s : lat.successors(1, 20, 0, 0)) {
    if (s.weight > 0.0) EXPECT_NEAR(s.position, 0.05, 1e-15);
  }
}

TEST(Lattice, MomentsMatchEulerStep) {
  const auto spec = constant_problem(0.0, std::sqrt(2.0));
  const SpatialGrid grid(-3.0, 3.0, 61);
  const auto part = make_uniform_partition(0.0, 1.0, 100);  // dt = 0.01
  const auto lat = build_lattice(spec, grid, part, 3);
  const double x = grid.node(30);
  double mean = 0.0, var = 0.0;
  for (const auto& s : lat.successors(5, 30, 0, 0)) mean += s.weight * (s.position - x);
  for (const auto& s : lat.successors(5, 30, 0, 0)) {
    var += s.weight * (s.position - x - mean) * (s.position - x - mean);
  }
  EXPECT_NEAR(mean, 0.0, 1e-14);
  EXPECT_NEAR(var, 0.02, 1e-14);
}

TEST(Lattice, ExpectationOfLinearFunctionIsExact) {
  const auto spec = constant_problem(0.3, 1.0);
  const SpatialGrid grid(-4.0, 4.0, 81);
  const auto part = make_uniform_partition(0.0, 1.0, 20);
  const auto lat = build_lattice(spec, grid, part, 5);
  const Eigen::VectorXd c = grid.points();
  const double e = lat.expectation(3, 40, 0, 0, {c.data(), static_cast<std::size_t>(c.size())});
  EXPECT_NEAR(e, grid.node(40) + 0.3 * 0.05, 1e-12);
}

TEST(Lattice, TooCoarseGridThrows) {
  const auto spec = constant_problem(40.0, 0.0);
  const SpatialGrid grid(-1.0, 1.0, 5);
  EXPECT_THROW(build_lattice(spec, grid, make_uniform_partition(0.0, 1.0, 1), 3),
               InvalidArgument);
}
