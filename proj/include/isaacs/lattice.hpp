#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

#include "isaacs/pde.hpp"
#include "isaacs/problem.hpp"
#include "isaacs/schedule.hpp"

namespace isaacs {

/// Probabilists' Gauss-Hermite rule: sum_q w_q h(z_q) ~ E[h(Z)], Z ~ N(0,1).
struct GaussHermiteRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

// Golub-Welsch; supports 3, 5 and 7 points.
GaussHermiteRule gauss_hermite(int points);

/// Euler successors x + b dt + sqrt(sigma sigma^T dt) z_q with Gauss-Hermite
/// weights, for every interval, lattice node and action pair. Continuation
/// values are read by clamped linear interpolation on the grid.
class TransitionModel {
 public:
  struct Successor {
    double position;
    double weight;
    SpatialGrid::Stencil stencil;
  };

  const SpatialGrid& grid() const { return grid_; }
  const Partition& partition() const { return partition_; }
  int quad_points() const { return quad_points_; }
  std::size_t u_count() const { return nu_; }
  std::size_t v_count() const { return nv_; }
  // Successors lying outside [lower, upper] (read through the clamp).
  std::size_t clamped() const { return clamped_; }

  // Interval k in 1..n.
  std::span<const Successor> successors(std::size_t k, std::size_t node, std::size_t u,
                                        std::size_t v) const;

  // E[C(X_{t_k}) | X_{t_{k-1}} = node, actions (u, v)].
  double expectation(std::size_t k, std::size_t node, std::size_t u, std::size_t v,
                     std::span<const double> continuation) const;

 private:
  friend TransitionModel build_lattice(const ProblemSpec&, const SpatialGrid&, const Partition&,
                                       int);
  TransitionModel(SpatialGrid grid, Partition partition, int quad_points, std::size_t nu,
                  std::size_t nv);

  struct Slice {
    std::vector<Successor> successors;
    std::vector<std::size_t> offsets;  // (node * pairs + pair) -> first successor
  };

  SpatialGrid grid_;
  Partition partition_;
  int quad_points_;
  std::size_t nu_;
  std::size_t nv_;
  std::size_t clamped_ = 0;
  std::vector<Slice> slices_;
  std::vector<std::size_t> slice_of_;  // interval k-1 -> slice
};

/// Throws InvalidArgument for unsupported quadrature sizes, a non-1-D state,
/// or a successor further than half the domain width beyond the boundary
/// (the lattice is too coarse to hold one step).
TransitionModel build_lattice(const ProblemSpec& spec, const SpatialGrid& grid,
                              const Partition& partition, int quad_points);

}  // namespace isaacs
