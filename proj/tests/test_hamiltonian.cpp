#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "isaacs/errors.hpp"
#include "isaacs/hamiltonian.hpp"

using namespace isaacs;

namespace {

DifferentialState state(double t, double x, double g, double h) {
  return {t, VectorXd::Constant(1, x), VectorXd::Constant(1, g), MatrixXd::Constant(1, 1, h)};
}

}  // namespace

TEST(Hamiltonian, BilinearClosedForm) {
  const auto spec = bilinear_benchmark({PriorityFamily::kConstant, {0.25}});
  for (double g : {-1.5, 0.0, 0.7}) {
    const auto ds = state(0.1, 0.2, g, 0.3);
    const auto h = hamiltonians(spec, ds);
    EXPECT_NEAR(h.lower, -4.0 * std::abs(g) + 0.3, 1e-14);
    EXPECT_NEAR(h.upper, 4.0 * std::abs(g) + 0.3, 1e-14);
    EXPECT_NEAR(h.mixed, 0.25 * h.lower + 0.75 * h.upper, 1e-14);
    EXPECT_EQ(h.lower, hamiltonian_lower(spec, ds));
    EXPECT_EQ(h.upper, hamiltonian_upper(spec, ds));
    EXPECT_EQ(h.mixed, hamiltonian_mixed(spec, ds));
  }
}

TEST(Hamiltonian, GeneratorMatrix) {
  const auto spec = bilinear_benchmark({PriorityFamily::kConstant, {0.5}});
  const auto f = generator_matrix(spec, state(0.0, 0.0, 1.0, 2.0));
  ASSERT_EQ(f.rows(), 2);
  EXPECT_NEAR(f(0, 0), 6.0, 1e-14);   // uv = 1
  EXPECT_NEAR(f(0, 1), -2.0, 1e-14);  // uv = -1
}

TEST(Hamiltonian, ExtremePriorityIsBitwiseOneSided) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z;
  for (int i = 0; i < 200; ++i) {
    const auto ds = state(0.25, z(rng), z(rng), z(rng));
    const auto one = bilinear_benchmark({PriorityFamily::kConstant, {1.0}});
    const auto zero = bilinear_benchmark({PriorityFamily::kConstant, {0.0}});
    EXPECT_EQ(hamiltonian_mixed(one, ds), hamiltonian_lower(one, ds));
    EXPECT_EQ(hamiltonian_mixed(zero, ds), hamiltonian_upper(zero, ds));
  }
}

TEST(Hamiltonian, Validation) {
  const auto spec = bilinear_benchmark({PriorityFamily::kConstant, {0.5}});
  DifferentialState ds = state(0.0, 0.0, 1.0, 1.0);
  ds.grad = VectorXd::Zero(2);
  EXPECT_THROW(hamiltonian_lower(spec, ds), InvalidArgument);
  DifferentialState asym{0.0, VectorXd::Zero(2), VectorXd::Zero(2), MatrixXd::Zero(2, 2)};
  asym.hess(0, 1) = 1.0;
  EXPECT_THROW(asym.validate(2), InvalidArgument);
}
