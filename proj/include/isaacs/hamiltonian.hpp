#pragma once

#include "isaacs/problem.hpp"
#include "isaacs/static_game.hpp"

namespace isaacs {

/// (t, x, v_x, v_xx) at which the Hamiltonians are evaluated.
struct DifferentialState {
  double t = 0.0;
  VectorXd x;
  VectorXd grad;
  MatrixXd hess;

  // Throws InvalidArgument on shape mismatch or an asymmetric Hessian.
  void validate(int d) const;
};

/// b(t,x,u,v) . grad + 1/2 Tr(sigma sigma^T hess).
double generator(const ProblemSpec& spec, const DifferentialState& ds, std::size_t u,
                 std::size_t v);

/// Matrix of generator values over the action grids.
LocalGameMatrix<double> generator_matrix(const ProblemSpec& spec, const DifferentialState& ds);

double hamiltonian_lower(const ProblemSpec& spec, const DifferentialState& ds);
double hamiltonian_upper(const ProblemSpec& spec, const DifferentialState& ds);
/// p(t,x) H^- + (1 - p(t,x)) H^+ with p taken from the problem.
double hamiltonian_mixed(const ProblemSpec& spec, const DifferentialState& ds);

struct HamiltonianTriple {
  double lower;
  double upper;
  double mixed;
  double priority;
};

// All three from a single generator matrix.
HamiltonianTriple hamiltonians(const ProblemSpec& spec, const DifferentialState& ds);

}  // namespace isaacs
