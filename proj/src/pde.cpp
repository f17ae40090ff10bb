#include "isaacs/pde.hpp"

#include "isaacs/errors.hpp"
#include "isaacs/static_game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace isaacs {

// ---------------------------------------------------------------------------
// SpatialGrid / ValueField

SpatialGrid::SpatialGrid(double lower, double upper, std::size_t nodes)
    : lower_(lower), upper_(upper), nodes_(nodes), dx_(0.0) {
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(upper > lower)) {
    throw InvalidArgument("spatial grid needs finite lower < upper");
  }
  if (nodes < 3) throw InvalidArgument("spatial grid needs at least 3 nodes");
  dx_ = (upper - lower) / static_cast<double>(nodes - 1);
}

Eigen::VectorXd SpatialGrid::points() const {
  Eigen::VectorXd x(nodes_);
  for (std::size_t j = 0; j < nodes_; ++j) x(j) = node(j);
  return x;
}

std::size_t SpatialGrid::nearest(double x) const {
  if (!(x > lower_)) return 0;
  if (!(x < upper_)) return nodes_ - 1;
  const double r = std::round((x - lower_) / dx_);
  return std::min(static_cast<std::size_t>(r), nodes_ - 1);
}

SpatialGrid::Stencil SpatialGrid::locate(double x) const {
  if (!(x > lower_)) return {0, 0.0};
  if (!(x < upper_)) return {nodes_ - 2, 1.0};
  const double pos = (x - lower_) / dx_;
  std::size_t left = std::min(static_cast<std::size_t>(pos), nodes_ - 2);
  return {left, pos - static_cast<double>(left)};
}

bool SpatialGrid::far_outside(double x) const {
  const double half = 0.5 * (upper_ - lower_);
  return !(x >= lower_ - half && x <= upper_ + half);
}

double ValueField::interpolate(std::size_t k, double x) const {
  const auto s = grid.locate(x);
  const double a = values(k, s.left);
  const double b = values(k, s.left + 1);
  return a + s.frac * (b - a);
}

std::size_t ValueField::slice_at(double t) const {
  for (Eigen::Index k = 0; k < times.size(); ++k) {
    if (std::abs(times(k) - t) <= 1e-12 * std::max(1.0, std::abs(t))) {
      return static_cast<std::size_t>(k);
    }
  }
  throw InvalidArgument("no value slice at t = " + std::to_string(t));
}

// ---------------------------------------------------------------------------
// Scheme

namespace {

constexpr double kCflSafety = 1.0 - 1e-6;

// Drift and variance per (node, action pair), pair index = i * |V| + j.
struct CoefficientTable {
  Eigen::MatrixXd drift;     // nodes x pairs
  Eigen::MatrixXd variance;  // nodes x pairs

  void fill(const ProblemSpec& spec, const SpatialGrid& grid, double t) {
    const std::size_t nu = spec.u_set().size();
    const std::size_t nv = spec.v_set().size();
    drift.resize(grid.nodes(), nu * nv);
    variance.resize(grid.nodes(), nu * nv);
    for (std::size_t n = 0; n < grid.nodes(); ++n) {
      for (std::size_t i = 0; i < nu; ++i) {
        for (std::size_t j = 0; j < nv; ++j) {
          const auto c = eval_scalar(spec, t, grid.node(n), i, j);
          drift(n, i * nv + j) = c.drift;
          variance(n, i * nv + j) = c.variance;
        }
      }
    }
  }

  double rate(double dx) const {
    return (drift.cwiseAbs() / dx + variance / (dx * dx)).maxCoeff();
  }
};

void require_one_dimensional(const ProblemSpec& spec) {
  if (spec.dimension() != 1) throw InvalidArgument("lattice solvers need a one-dimensional state");
}

std::vector<double> scan_times(const ProblemSpec& spec) {
  if (!spec.coefficients().time_dependent()) return {spec.start_time()};
  const double s = spec.start_time();
  const double T = spec.horizon();
  std::vector<double> ts(257);
  for (std::size_t k = 0; k < ts.size(); ++k) ts[k] = s + (T - s) * k / (ts.size() - 1.0);
  return ts;
}

// Descending list of times the solver stops at.
std::vector<double> step_times(const ProblemSpec& spec, double dt, const PdeOptions& opt) {
  const double s = spec.start_time();
  const double T = spec.horizon();
  std::vector<double> marks;
  if (opt.save_times.empty()) {
    marks = {s, T};
  } else {
    marks = opt.save_times;
    for (double t : marks) {
      if (!(t >= s - 1e-12 && t <= T + 1e-12)) throw InvalidArgument("save time outside [s, T]");
    }
    marks.push_back(s);
    marks.push_back(T);
  }
  std::sort(marks.begin(), marks.end(), std::greater<>());
  marks.erase(std::unique(marks.begin(), marks.end(),
                          [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
              marks.end());

  std::vector<double> out{marks.front()};
  for (std::size_t m = 1; m < marks.size(); ++m) {
    const double hi = marks[m - 1];
    const double lo = marks[m];
    const double len = hi - lo;
    const auto steps =
        std::isfinite(dt) ? std::max<std::size_t>(1, std::ceil(len / dt - 1e-9)) : std::size_t{1};
    for (std::size_t q = 1; q < steps; ++q) out.push_back(hi - len * q / steps);
    out.push_back(lo);
  }
  return out;
}

}  // namespace

double cfl_max_dt(const ProblemSpec& spec, const SpatialGrid& grid) {
  require_one_dimensional(spec);
  CoefficientTable table;
  double rate = 0.0;
  for (double t : scan_times(spec)) {
    table.fill(spec, grid, t);
    rate = std::max(rate, table.rate(grid.dx()));
  }
  if (!std::isfinite(rate)) throw NumericalError("non-finite coefficients on the grid");
  if (rate == 0.0) return std::numeric_limits<double>::infinity();
  return kCflSafety / rate;
}

ValueField solve(const ProblemSpec& spec, const SpatialGrid& grid, double dt,
                 const PdeOptions& options) {
  require_one_dimensional(spec);
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  const std::size_t nodes = grid.nodes();
  const std::size_t nu = spec.u_set().size();
  const std::size_t nv = spec.v_set().size();
  const double dx = grid.dx();

  const std::vector<double> ts = step_times(spec, dt, options);
  const bool keep_all = options.save_times.empty();
  std::vector<double> kept{ts.front()};
  std::vector<Eigen::VectorXd> kept_values;

  Eigen::VectorXd v(nodes);
  for (std::size_t j = 0; j < nodes; ++j) v(j) = spec.payoff()(grid.node(j));
  if (!v.allFinite()) throw NumericalError("terminal payoff is not finite on the grid");
  kept_values.push_back(v);

  auto is_save_time = [&](double t) {
    if (keep_all) return true;
    if (std::abs(t - spec.start_time()) <= 1e-12) return true;
    return std::any_of(options.save_times.begin(), options.save_times.end(),
                       [&](double s) { return std::abs(s - t) <= 1e-12; });
  };

  const bool reuse = options.cache_coefficients && !spec.coefficients().time_dependent();
  CoefficientTable table;
  if (reuse) table.fill(spec, grid, ts.front());

  Eigen::VectorXd next(nodes);
  LocalGameMatrix<double> f(nu, nv);
  for (std::size_t step = 1; step < ts.size(); ++step) {
    const double t = ts[step - 1];
    const double h = t - ts[step];
    if (!reuse) table.fill(spec, grid, t);
    if (h * table.rate(dx) > kCflSafety * (1.0 + 1e-12)) {
      throw CflError("time step " + std::to_string(h) + " violates the monotonicity bound at t = " +
                     std::to_string(t));
    }

    for (std::size_t n = 0; n < nodes; ++n) {
      const double vc = v(n);
      const double vm = n == 0 ? vc : v(n - 1);
      const double vp = n + 1 == nodes ? vc : v(n + 1);
      const double d_back = (vc - vm) / dx;
      const double d_fwd = (vp - vc) / dx;
      const double d_cen = (vp - vm) / (2.0 * dx);
      const double d_two = (vp - 2.0 * vc + vm) / (dx * dx);

      for (std::size_t i = 0; i < nu; ++i) {
        for (std::size_t j = 0; j < nv; ++j) {
          const double b = table.drift(n, i * nv + j);
          const double a = table.variance(n, i * nv + j);
          double transport;
          if (options.stencil == DriftStencil::kHybrid && std::abs(b) * dx <= a) {
            transport = b * d_cen;
          } else {
            transport = b > 0.0 ? b * d_fwd : b * d_back;
          }
          f(i, j) = transport + 0.5 * a * d_two;
        }
      }

      double ham;
      switch (options.kind) {
        case HamiltonianKind::kLower:
          ham = lower_value_only(f);
          break;
        case HamiltonianKind::kUpper:
          ham = upper_value_only(f);
          break;
        case HamiltonianKind::kMixed:
        default: {
          const double p = spec.priority()(t, grid.node(n));
          ham = p * lower_value_only(f) + (1.0 - p) * upper_value_only(f);
          break;
        }
      }
      next(n) = vc + h * ham;
    }
    if (!next.allFinite()) {
      throw NumericalError("non-finite value at t = " + std::to_string(ts[step]));
    }
    v.swap(next);
    if (is_save_time(ts[step])) {
      kept.push_back(ts[step]);
      kept_values.push_back(v);
    }
  }

  // Slices are stored in increasing time.
  ValueField out{Eigen::VectorXd(kept.size()), grid, RowMatrixXd(kept.size(), nodes)};
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const std::size_t r = kept.size() - 1 - k;
    out.times(r) = kept[k];
    out.values.row(r) = kept_values[k].transpose();
  }
  return out;
}

ValueField isaacs_gap(const ProblemSpec& spec, const SpatialGrid& grid, double dt,
                      const PdeOptions& options) {
  PdeOptions lo = options;
  lo.kind = HamiltonianKind::kLower;
  PdeOptions up = options;
  up.kind = HamiltonianKind::kUpper;
  ValueField gap = solve(spec, grid, dt, up);
  gap.values -= solve(spec, grid, dt, lo).values;
  return gap;
}

}  // namespace isaacs
