#include "isaacs/hamiltonian.hpp"

#include "isaacs/errors.hpp"

namespace isaacs {

void DifferentialState::validate(int d) const {
  if (x.size() != d || grad.size() != d || hess.rows() != d || hess.cols() != d) {
    throw InvalidArgument("differential state shape mismatch");
  }
  if (!((hess - hess.transpose()).cwiseAbs().maxCoeff() <= 1e-12)) {
    throw InvalidArgument("Hessian is not symmetric");
  }
}

double generator(const ProblemSpec& spec, const DifferentialState& ds, std::size_t u,
                 std::size_t v) {
  ds.validate(spec.dimension());
  const Coefficients c = eval_coefficients(spec, ds.t, ds.x, u, v);
  const MatrixXd a = c.diffusion * c.diffusion.transpose();
  return c.drift.dot(ds.grad) + 0.5 * (a * ds.hess).trace();
}

LocalGameMatrix<double> generator_matrix(const ProblemSpec& spec, const DifferentialState& ds) {
  LocalGameMatrix<double> f(spec.u_set().size(), spec.v_set().size());
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    for (Eigen::Index j = 0; j < f.cols(); ++j) f(i, j) = generator(spec, ds, i, j);
  }
  return f;
}

double hamiltonian_lower(const ProblemSpec& spec, const DifferentialState& ds) {
  return lower_value(generator_matrix(spec, ds)).value;
}

double hamiltonian_upper(const ProblemSpec& spec, const DifferentialState& ds) {
  return upper_value(generator_matrix(spec, ds)).value;
}

double hamiltonian_mixed(const ProblemSpec& spec, const DifferentialState& ds) {
  return hamiltonians(spec, ds).mixed;
}

HamiltonianTriple hamiltonians(const ProblemSpec& spec, const DifferentialState& ds) {
  const auto f = generator_matrix(spec, ds);
  const double p = spec.priority()(ds.t, ds.x);
  const double lo = lower_value(f).value;
  const double up = upper_value(f).value;
  return {lo, up, p * lo + (1.0 - p) * up, p};
}

}  // namespace isaacs
