#include "isaacs/lattice.hpp"

#include "isaacs/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace isaacs {

GaussHermiteRule gauss_hermite(int points) {
  if (points != 3 && points != 5 && points != 7) {
    throw InvalidArgument("Gauss-Hermite rule supports 3, 5 or 7 points");
  }
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(points, points);
  for (int k = 1; k < points; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(static_cast<double>(k));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  Eigen::VectorXd z = es.eigenvalues();
  Eigen::VectorXd w = es.eigenvectors().row(0).transpose().array().square();

  // Enforce the exact symmetry of the rule.
  GaussHermiteRule rule{Eigen::VectorXd(points), Eigen::VectorXd(points)};
  for (int q = 0; q < points; ++q) {
    const int r = points - 1 - q;
    rule.nodes(q) = 0.5 * (z(q) - z(r));
    rule.weights(q) = 0.5 * (w(q) + w(r));
  }
  rule.nodes(points / 2) = 0.0;
  rule.weights /= rule.weights.sum();
  return rule;
}

TransitionModel::TransitionModel(SpatialGrid grid, Partition partition, int quad_points,
                                 std::size_t nu, std::size_t nv)
    : grid_(std::move(grid)),
      partition_(std::move(partition)),
      quad_points_(quad_points),
      nu_(nu),
      nv_(nv) {}

std::span<const TransitionModel::Successor> TransitionModel::successors(std::size_t k,
                                                                      std::size_t node,
                                                                      std::size_t u,
                                                                      std::size_t v) const {
  const Slice& s = slices_[slice_of_[k - 1]];
  const std::size_t cell = node * nu_ * nv_ + u * nv_ + v;
  const std::size_t first = s.offsets[cell];
  return {s.successors.data() + first, s.offsets[cell + 1] - first};
}

double TransitionModel::expectation(std::size_t k, std::size_t node, std::size_t u,
                                    std::size_t v, std::span<const double> continuation) const {
  double acc = 0.0;
  for (const Successor& s : successors(k, node, u, v)) {
    const double a = continuation[s.stencil.left];
    const double b = continuation[s.stencil.left + 1];
    acc += s.weight * (a + s.stencil.frac * (b - a));
  }
  return acc;
}

TransitionModel build_lattice(const ProblemSpec& spec, const SpatialGrid& grid,
                              const Partition& partition, int quad_points) {
  if (spec.dimension() != 1) throw InvalidArgument("lattice needs a one-dimensional state");
  const GaussHermiteRule rule = gauss_hermite(quad_points);
  const std::size_t nu = spec.u_set().size();
  const std::size_t nv = spec.v_set().size();
  const std::size_t n = partition.intervals();
  TransitionModel model(grid, partition, quad_points, nu, nv);

  const bool shareable = !spec.coefficients().time_dependent();
  double shared_step = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double h = partition.step(k);
    if (shareable && !model.slices_.empty() &&
        std::abs(h - shared_step) <= 1e-12 * shared_step) {
      model.slice_of_.push_back(model.slices_.size() - 1);
      continue;
    }
    const double t = partition.times()(k - 1);
    TransitionModel::Slice slice;
    slice.offsets.reserve(grid.nodes() * nu * nv + 1);
    for (std::size_t node = 0; node < grid.nodes(); ++node) {
      const double x = grid.node(node);
      for (std::size_t i = 0; i < nu; ++i) {
        for (std::size_t j = 0; j < nv; ++j) {
          slice.offsets.push_back(slice.successors.size());
          const auto c = eval_scalar(spec, t, x, i, j);
          const double mean = x + c.drift * h;
          auto push = [&](double pos, double w) {
            if (!std::isfinite(pos)) throw NumericalError("non-finite lattice successor");
            if (grid.far_outside(pos)) {
              throw InvalidArgument("grid too coarse: a lattice successor leaves the domain");
            }
            if (pos < grid.lower() || pos > grid.upper()) ++model.clamped_;
            slice.successors.push_back({pos, w, grid.locate(pos)});
          };
          if (c.variance == 0.0) {
            push(mean, 1.0);
          } else {
            const double scale = std::sqrt(c.variance * h);
            for (int q = 0; q < quad_points; ++q) push(mean + scale * rule.nodes(q), rule.weights(q));
          }
        }
      }
    }
    slice.offsets.push_back(slice.successors.size());
    model.slices_.push_back(std::move(slice));
    model.slice_of_.push_back(model.slices_.size() - 1);
    shared_step = h;
  }
  return model;
}

}  // namespace isaacs
