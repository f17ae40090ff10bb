#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace isaacs {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Finite, ordered action grid standing in for a compact action space.
/// Order matters: every argmin/argmax ties to the lowest index.
class ActionSet {
 public:
  explicit ActionSet(std::vector<VectorXd> points);
  static ActionSet scalars(std::initializer_list<double> values);
  static ActionSet scalars(std::span<const double> values);

  std::size_t size() const { return points_.size(); }
  Eigen::Index dimension() const { return points_.front().size(); }
  const VectorXd& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<VectorXd>& points() const { return points_; }

  // Index of an exactly matching point.
  std::optional<std::size_t> find(const VectorXd& point) const;
  // Largest Euclidean norm over the grid.
  double max_norm() const;

 private:
  std::vector<VectorXd> points_;
};

enum class CoefficientFamily { kConstant, kAffine, kBilinear, kVolControl, kSeasonal };
enum class PayoffFamily { kConstant, kCos, kTanh, kQuadraticCapped };
enum class PriorityFamily { kConstant, kLinearTime, kLogistic };

// Parameter names per family, in the order stored in `params`.
//   coefficients  constant    mu sigma                b = mu,                   s = sigma
//                 affine      a0 a1 cu cv sigma       b = a0 + a1 x + cu u + cv v
//                 bilinear    kappa sigma             b = kappa (u.v)
//                 vol_control kappa sigma gain        b = kappa v,              s = sigma + gain |u|
//                 seasonal    kappa omega sigma       b = kappa (u.v) cos(omega t)
//   The diffusion is always s times the d x d' identity block.
//   payoff        constant    value
//                 cos         amplitude frequency phase   A cos(w sum(x) + phi)
//                 tanh        amplitude frequency phase   A tanh(w sum(x) + phi)
//                 quadratic_capped cap                    min(|x|^2, cap)
//   priority      constant    value
//                 linear_time intercept slope             clamp(a + c t, 0, 1)
//                 logistic    intercept time_slope state_slope
const std::vector<std::string>& parameter_names(CoefficientFamily f);
const std::vector<std::string>& parameter_names(PayoffFamily f);
const std::vector<std::string>& parameter_names(PriorityFamily f);

std::string_view family_name(CoefficientFamily f);
std::string_view family_name(PayoffFamily f);
std::string_view family_name(PriorityFamily f);

CoefficientFamily parse_coefficient_family(std::string_view name);
PayoffFamily parse_payoff_family(std::string_view name);
PriorityFamily parse_priority_family(std::string_view name);

struct CoefficientSpec {
  CoefficientFamily family = CoefficientFamily::kConstant;
  std::vector<double> params;
  int d = 1;
  int d_prime = 1;

  bool time_dependent() const { return family == CoefficientFamily::kSeasonal; }
  bool action_dependent_diffusion() const { return family == CoefficientFamily::kVolControl; }
};

struct PayoffSpec {
  PayoffFamily family = PayoffFamily::kConstant;
  std::vector<double> params;

  double bound() const;
  double operator()(const VectorXd& x) const;
  double operator()(double x) const;  // d = 1 shortcut
};

struct PrioritySpec {
  PriorityFamily family = PriorityFamily::kConstant;
  std::vector<double> params;

  bool time_only() const;
  double operator()(double t, const VectorXd& x) const;
  double operator()(double t, double x) const;  // d = 1 shortcut
};

struct Coefficients {
  VectorXd drift;      // d
  MatrixXd diffusion;  // d x d'
};

// Drift and sigma sigma^T for a one-dimensional state.
struct ScalarCoefficients {
  double drift;
  double variance;
};

class ProblemSpec {
 public:
  ProblemSpec(CoefficientSpec coefficients, PayoffSpec payoff, PrioritySpec priority,
              ActionSet u_set, ActionSet v_set, double horizon, double start_time,
              VectorXd start_state);

  const CoefficientSpec& coefficients() const { return coefficients_; }
  const PayoffSpec& payoff() const { return payoff_; }
  const PrioritySpec& priority() const { return priority_; }
  const ActionSet& u_set() const { return u_set_; }
  const ActionSet& v_set() const { return v_set_; }
  double horizon() const { return horizon_; }
  double start_time() const { return start_time_; }
  const VectorXd& start_state() const { return start_state_; }
  int dimension() const { return coefficients_.d; }

  // Copies with one piece swapped; the result is re-validated.
  ProblemSpec with_priority(PrioritySpec priority) const;
  ProblemSpec with_start(double start_time, VectorXd start_state) const;
  ProblemSpec with_payoff(PayoffSpec payoff) const;

  // Declared per-family constants for the standing assumptions.
  double declared_lipschitz(double box_radius) const;
  double declared_growth() const;

 private:
  CoefficientSpec coefficients_;
  PayoffSpec payoff_;
  PrioritySpec priority_;
  ActionSet u_set_;
  ActionSet v_set_;
  double horizon_;
  double start_time_;
  VectorXd start_state_;
};

/// Drift b(t,x,u,v) and diffusion sigma(t,x,u,v) for action indices into the
/// problem's grids. Throws InvalidArgument for t outside [0,T], indices out of
/// range or a state of the wrong dimension.
Coefficients eval_coefficients(const ProblemSpec& spec, double t, const VectorXd& x,
                               std::size_t u, std::size_t v);
// Same, with action points looked up by exact match.
Coefficients eval_coefficients(const ProblemSpec& spec, double t, const VectorXd& x,
                               const VectorXd& u, const VectorXd& v);
// Allocation-free d = 1 path used by the lattice solvers. No range checks.
ScalarCoefficients eval_scalar(const ProblemSpec& spec, double t, double x, std::size_t u,
                               std::size_t v);

struct AssumptionReport {
  std::size_t samples = 0;
  double max_lipschitz_ratio = 0.0;
  double declared_lipschitz = 0.0;
  double max_growth_ratio = 0.0;
  double declared_growth = 0.0;
  double max_abs_payoff = 0.0;
  double payoff_bound = 0.0;
  double min_priority = 1.0;
  double max_priority = 0.0;
  bool all_finite = true;
  bool shapes_ok = true;
  bool lipschitz_ok = true;
  bool growth_ok = true;
  bool payoff_ok = true;
  bool priority_ok = true;

  bool pass() const {
    return all_finite && shapes_ok && lipschitz_ok && growth_ok && payoff_ok && priority_ok;
  }
};

/// Samples (t, x, y, u, v) uniformly in [0,T] x [-r,r]^d and checks the
/// Lipschitz, linear growth, payoff bound and priority range assumptions
/// against the family's declared constants.
AssumptionReport validate_assumptions(const ProblemSpec& spec, double box_radius,
                                      std::size_t samples, std::uint64_t seed);

/// d = 1, b = 4uv, sigma = sqrt(2), U = V = {-1, 1}, g = cos, T = 0.5.
ProblemSpec bilinear_benchmark(PrioritySpec priority, double start_state = 0.0);

}  // namespace isaacs
