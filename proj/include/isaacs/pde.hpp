#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "isaacs/problem.hpp"

namespace isaacs {

using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Uniform one-dimensional grid of `nodes` points on [lower, upper].
class SpatialGrid {
 public:
  SpatialGrid(double lower, double upper, std::size_t nodes);

  double lower() const { return lower_; }
  double upper() const { return upper_; }
  std::size_t nodes() const { return nodes_; }
  double dx() const { return dx_; }
  double node(std::size_t j) const { return j + 1 == nodes_ ? upper_ : lower_ + dx_ * j; }
  Eigen::VectorXd points() const;

  // Nearest node to x after clamping into [lower, upper].
  std::size_t nearest(double x) const;

  // Linear interpolation stencil: x clamped into the grid lies between
  // node(left) and node(left + 1) with weight `frac` on the right node.
  struct Stencil {
    std::size_t left;
    double frac;
  };
  Stencil locate(double x) const;

  // Outside [lower - w/2, upper + w/2] with w = upper - lower.
  bool far_outside(double x) const;

 private:
  double lower_;
  double upper_;
  std::size_t nodes_;
  double dx_;
};

/// Values v(t_k, x_j) on a time x node lattice, one row per time slice.
struct ValueField {
  Eigen::VectorXd times;
  SpatialGrid grid;
  RowMatrixXd values;

  std::size_t slices() const { return static_cast<std::size_t>(times.size()); }
  // Linear interpolation in x within slice k, clamped at the boundary.
  double interpolate(std::size_t k, double x) const;
  // Index of the slice whose time equals t within 1e-12; throws otherwise.
  std::size_t slice_at(double t) const;
};

enum class HamiltonianKind { kLower, kUpper, kMixed };
enum class DriftStencil {
  // Central difference where it keeps the scheme monotone (|b| dx <= sigma^2),
  // upwind difference otherwise. Second order on diffusion-dominated problems.
  kHybrid,
  // Always upwind by the sign of b. First order.
  kUpwind,
};

struct PdeOptions {
  HamiltonianKind kind = HamiltonianKind::kMixed;
  DriftStencil stencil = DriftStencil::kHybrid;
  // Slices to keep (within [s, T]); s and T are always kept. Empty keeps
  // every step.
  std::vector<double> save_times;
  // Reuse coefficient tables across steps when they do not depend on t.
  bool cache_coefficients = true;
};

/// Largest dt with dt (max|b|/dx + max sigma sigma^T/dx^2) <= 1 - 1e-6 over
/// the lattice nodes and action pairs. Time-dependent coefficients are
/// scanned at 257 uniform times in [s, T]. Infinite when nothing moves.
double cfl_max_dt(const ProblemSpec& spec, const SpatialGrid& grid);

/// Backward explicit monotone scheme for -v_t - H(t, x, v_x, v_xx) = 0,
/// v(T) = g, from T down to the problem's start time. Each step has length at
/// most dt (steps are shortened to land on the save times). Throws CflError
/// if a step violates the monotonicity bound and NumericalError on
/// non-finite values.
ValueField solve(const ProblemSpec& spec, const SpatialGrid& grid, double dt,
                 const PdeOptions& options = {});

/// v+ - v- from two solves with the upper and lower Hamiltonians.
ValueField isaacs_gap(const ProblemSpec& spec, const SpatialGrid& grid, double dt,
                      const PdeOptions& options = {});

}  // namespace isaacs
