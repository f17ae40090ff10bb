#include <gtest/gtest.h>

#include <cmath>

#include "isaacs/errors.hpp"
#include "isaacs/pde.hpp"

using namespace isaacs;

namespace {

PrioritySpec half() { return {PriorityFamily::kConstant, {0.5}}; }

ProblemSpec linear_problem(double mu, double sigma, PayoffSpec g, double horizon) {
  CoefficientSpec c{CoefficientFamily::kConstant, {mu, sigma}, 1, 1};
  const auto one = ActionSet::scalars({0.0});
  return ProblemSpec(c, std::move(g), half(), one, one, horizon, 0.0, VectorXd::Zero(1));
}

// E cos(x + mu tau + s W_tau)
double cos_oracle(double x, double mu, double s, double tau) {
  return std::cos(x + mu * tau) * std::exp(-0.5 * s * s * tau);
}

double sup_error(const ValueField& f, double window, auto&& exact) {
  double err = 0.0;
  const std::size_t k = 0;
  for (std::size_t j = 0; j < f.grid.nodes(); ++j) {
    const double x = f.grid.node(j);
    if (std::abs(x) <= window) err = std::max(err, std::abs(f.values(k, j) - exact(x)));
  }
  return err;
}

}  // namespace

TEST(SpatialGrid, Basics) {
  const SpatialGrid g(-1.0, 1.0, 5);
  EXPECT_DOUBLE_EQ(g.dx(), 0.5);
  EXPECT_EQ(g.nearest(0.3), 3u);
  EXPECT_EQ(g.nearest(-7.0), 0u);
  const auto s = g.locate(0.25);
  EXPECT_EQ(s.left, 2u);
  EXPECT_DOUBLE_EQ(s.frac, 0.5);
  EXPECT_TRUE(g.far_outside(2.5));
  EXPECT_FALSE(g.far_outside(1.9));
  EXPECT_THROW(SpatialGrid(1.0, 1.0, 5), InvalidArgument);
  EXPECT_THROW(SpatialGrid(0.0, 1.0, 2), InvalidArgument);
}

TEST(Pde, HeatEquationClosedForm) {
  // b = 0, sigma = sqrt(2): v = cos(x) exp(-(T - t)).
  const auto spec = linear_problem(0.0, std::sqrt(2.0), {PayoffFamily::kCos, {1, 1, 0}}, 0.5);
  const SpatialGrid grid(-8.0, 8.0, 321);
  const auto f = solve(spec, grid, cfl_max_dt(spec, grid));
  EXPECT_LT(sup_error(f, 2.0, [](double x) { return cos_oracle(x, 0.0, std::sqrt(2.0), 0.5); }),
            2e-3);
  EXPECT_EQ(f.times(f.slices() - 1), 0.5);
}

TEST(Pde, DriftedCosineSecondOrder) {
  const auto spec = linear_problem(0.5, 1.0, {PayoffFamily::kCos, {1, 1, 0}}, 1.0);
  double err[2];
  int i = 0;
  for (std::size_t nodes : {161u, 321u}) {
    const SpatialGrid grid(-8.0, 8.0, nodes);
    const auto f = solve(spec, grid, cfl_max_dt(spec, grid));
    err[i++] = sup_error(f, 2.0, [](double x) { return cos_oracle(x, 0.5, 1.0, 1.0); });
  }
  EXPECT_LT(err[1], 2e-2);
  EXPECT_GE(err[0] / err[1], 2.5);
  EXPECT_LE(err[0] / err[1], 5.0);
}

TEST(Pde, UpwindIsFirstOrder) {
  const auto spec = linear_problem(0.5, 1.0, {PayoffFamily::kCos, {1, 1, 0}}, 1.0);
  PdeOptions opt;
  opt.stencil = DriftStencil::kUpwind;
  double err[2];
  int i = 0;
  for (std::size_t nodes : {161u, 321u}) {
    const SpatialGrid grid(-8.0, 8.0, nodes);
    const auto f = solve(spec, grid, cfl_max_dt(spec, grid), opt);
    err[i++] = sup_error(f, 2.0, [](double x) { return cos_oracle(x, 0.5, 1.0, 1.0); });
  }
  EXPECT_GT(err[0] / err[1], 1.6);
  EXPECT_LT(err[0] / err[1], 2.5);
}

TEST(Pde, CappedQuadratic) {
  // b = 0, sigma = sqrt(2), g = min(x^2, 25): away from the cap v = x^2 + 2 (T - t).
  const auto spec =
      linear_problem(0.0, std::sqrt(2.0), {PayoffFamily::kQuadraticCapped, {25.0}}, 0.1);
  const SpatialGrid grid(-8.0, 8.0, 321);
  const auto f = solve(spec, grid, cfl_max_dt(spec, grid));
  EXPECT_LT(sup_error(f, 2.0, [](double x) { return x * x + 0.2; }), 2e-2);
}

TEST(Pde, SaveTimesKept) {
  const auto spec = linear_problem(0.0, 1.0, {PayoffFamily::kCos, {1, 1, 0}}, 1.0);
  const SpatialGrid grid(-5.0, 5.0, 51);
  PdeOptions opt;
  opt.save_times = {0.25, 0.5};
  const auto f = solve(spec, grid, 0.01, opt);
  ASSERT_EQ(f.slices(), 4u);
  EXPECT_EQ(f.slice_at(0.25), 1u);
  EXPECT_THROW(f.slice_at(0.3), InvalidArgument);
  opt.save_times = {1.5};
  EXPECT_THROW(solve(spec, grid, 0.01, opt), InvalidArgument);
}

TEST(Pde, CflViolationThrows) {
  const auto spec = bilinear_benchmark(half());
  const SpatialGrid grid(-10.0, 10.0, 401);
  const double dt = cfl_max_dt(spec, grid);
  EXPECT_GT(dt, 0.0);
  EXPECT_THROW(solve(spec, grid, 2.0 * dt), CflError);
  EXPECT_NO_THROW(solve(spec, grid, dt));
}

TEST(Pde, OrderingAndIsaacsGap) {
  const SpatialGrid grid(-10.0, 10.0, 401);
  const auto spec = bilinear_benchmark(half());
  const double dt = cfl_max_dt(spec, grid);
  PdeOptions opt;
  opt.save_times = {0.25};
  opt.kind = HamiltonianKind::kLower;
  const auto lo = solve(spec, grid, dt, opt);
  opt.kind = HamiltonianKind::kUpper;
  const auto up = solve(spec, grid, dt, opt);
  opt.kind = HamiltonianKind::kMixed;
  const auto mid = solve(spec, grid, dt, opt);
  EXPECT_GE((mid.values - lo.values).minCoeff(), -1e-9);
  EXPECT_GE((up.values - mid.values).minCoeff(), -1e-9);
  const auto gap = isaacs_gap(spec, grid, dt, opt);
  EXPECT_GT(gap.values.row(0).maxCoeff(), 1e-3);
  EXPECT_EQ(gap.values, up.values - lo.values);
}
