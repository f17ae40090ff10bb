#include "isaacs/problem.hpp"

#include "isaacs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace isaacs {

// ---------------------------------------------------------------------------
// ActionSet

ActionSet::ActionSet(std::vector<VectorXd> points) : points_(std::move(points)) {
  if (points_.empty()) throw InvalidArgument("action set must be nonempty");
  const Eigen::Index dim = points_.front().size();
  if (dim == 0) throw InvalidArgument("action points must have at least one component");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].size() != dim) throw InvalidArgument("action points differ in dimension");
    if (!points_[i].allFinite()) throw InvalidArgument("action points must be finite");
    for (std::size_t j = 0; j < i; ++j) {
      if (points_[i] == points_[j]) throw InvalidArgument("action points must be distinct");
    }
  }
}

ActionSet ActionSet::scalars(std::initializer_list<double> values) {
  return scalars(std::span<const double>(values.begin(), values.size()));
}

ActionSet ActionSet::scalars(std::span<const double> values) {
  std::vector<VectorXd> pts;
  pts.reserve(values.size());
  for (double v : values) pts.push_back(VectorXd::Constant(1, v));
  return ActionSet(std::move(pts));
}

std::optional<std::size_t> ActionSet::find(const VectorXd& point) const {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].size() == point.size() && points_[i] == point) return i;
  }
  return std::nullopt;
}

double ActionSet::max_norm() const {
  double m = 0.0;
  for (const auto& p : points_) m = std::max(m, p.norm());
  return m;
}

// ---------------------------------------------------------------------------
// Family registry

namespace {

template <typename Enum>
struct FamilyEntry {
  Enum id;
  std::string_view name;
  std::vector<std::string> params;
};

const std::vector<FamilyEntry<CoefficientFamily>>& coefficient_registry() {
  static const std::vector<FamilyEntry<CoefficientFamily>> r = {
      {CoefficientFamily::kConstant, "constant", {"mu", "sigma"}},
      {CoefficientFamily::kAffine, "affine", {"a0", "a1", "cu", "cv", "sigma"}},
      {CoefficientFamily::kBilinear, "bilinear", {"kappa", "sigma"}},
      {CoefficientFamily::kVolControl, "vol_control", {"kappa", "sigma", "gain"}},
      {CoefficientFamily::kSeasonal, "seasonal", {"kappa", "omega", "sigma"}},
  };
  return r;
}

const std::vector<FamilyEntry<PayoffFamily>>& payoff_registry() {
  static const std::vector<FamilyEntry<PayoffFamily>> r = {
      {PayoffFamily::kConstant, "constant", {"value"}},
      {PayoffFamily::kCos, "cos", {"amplitude", "frequency", "phase"}},
      {PayoffFamily::kTanh, "tanh", {"amplitude", "frequency", "phase"}},
      {PayoffFamily::kQuadraticCapped, "quadratic_capped", {"cap"}},
  };
  return r;
}

const std::vector<FamilyEntry<PriorityFamily>>& priority_registry() {
  static const std::vector<FamilyEntry<PriorityFamily>> r = {
      {PriorityFamily::kConstant, "constant", {"value"}},
      {PriorityFamily::kLinearTime, "linear_time", {"intercept", "slope"}},
      {PriorityFamily::kLogistic, "logistic", {"intercept", "time_slope", "state_slope"}},
  };
  return r;
}

template <typename Enum>
const FamilyEntry<Enum>& lookup(const std::vector<FamilyEntry<Enum>>& reg, Enum id) {
  for (const auto& e : reg) {
    if (e.id == id) return e;
  }
  throw InvalidArgument("unregistered family");
}

template <typename Enum>
Enum lookup(const std::vector<FamilyEntry<Enum>>& reg, std::string_view name,
            std::string_view kind) {
  for (const auto& e : reg) {
    if (e.name == name) return e.id;
  }
  throw InvalidArgument("unknown " + std::string(kind) + " family '" + std::string(name) + "'");
}

template <typename Enum>
void check_params(const std::vector<FamilyEntry<Enum>>& reg, Enum id,
                  const std::vector<double>& params) {
  const auto& e = lookup(reg, id);
  if (params.size() != e.params.size()) {
    throw InvalidArgument("family '" + std::string(e.name) + "' expects " +
                          std::to_string(e.params.size()) + " parameters, got " +
                          std::to_string(params.size()));
  }
  for (double p : params) {
    if (!std::isfinite(p)) throw InvalidArgument("family parameters must be finite");
  }
}

}  // namespace

const std::vector<std::string>& parameter_names(CoefficientFamily f) {
  return lookup(coefficient_registry(), f).params;
}
const std::vector<std::string>& parameter_names(PayoffFamily f) {
  return lookup(payoff_registry(), f).params;
}
const std::vector<std::string>& parameter_names(PriorityFamily f) {
  return lookup(priority_registry(), f).params;
}

std::string_view family_name(CoefficientFamily f) { return lookup(coefficient_registry(), f).name; }
std::string_view family_name(PayoffFamily f) { return lookup(payoff_registry(), f).name; }
std::string_view family_name(PriorityFamily f) { return lookup(priority_registry(), f).name; }

CoefficientFamily parse_coefficient_family(std::string_view name) {
  return lookup(coefficient_registry(), name, "coefficient");
}
PayoffFamily parse_payoff_family(std::string_view name) {
  return lookup(payoff_registry(), name, "payoff");
}
PriorityFamily parse_priority_family(std::string_view name) {
  return lookup(priority_registry(), name, "priority");
}

// ---------------------------------------------------------------------------
// Payoff and priority

double PayoffSpec::bound() const {
  switch (family) {
    case PayoffFamily::kConstant:
      return std::abs(params[0]);
    case PayoffFamily::kCos:
    case PayoffFamily::kTanh:
      return std::abs(params[0]);
    case PayoffFamily::kQuadraticCapped:
      return params[0];
  }
  return 0.0;
}

namespace {

double payoff_from(const PayoffSpec& g, double sum, double sq_norm) {
  const auto& p = g.params;
  switch (g.family) {
    case PayoffFamily::kConstant:
      return p[0];
    case PayoffFamily::kCos:
      return p[0] * std::cos(p[1] * sum + p[2]);
    case PayoffFamily::kTanh:
      return p[0] * std::tanh(p[1] * sum + p[2]);
    case PayoffFamily::kQuadraticCapped:
      return std::min(sq_norm, p[0]);
  }
  return 0.0;
}

}  // namespace

double PayoffSpec::operator()(const VectorXd& x) const {
  return payoff_from(*this, x.sum(), x.squaredNorm());
}

double PayoffSpec::operator()(double x) const { return payoff_from(*this, x, x * x); }

bool PrioritySpec::time_only() const {
  return family != PriorityFamily::kLogistic || params[2] == 0.0;
}

double PrioritySpec::operator()(double t, double x) const {
  const auto& p = params;
  switch (family) {
    case PriorityFamily::kConstant:
      return p[0];
    case PriorityFamily::kLinearTime:
      return std::clamp(p[0] + p[1] * t, 0.0, 1.0);
    case PriorityFamily::kLogistic:
      return 1.0 / (1.0 + std::exp(-(p[0] + p[1] * t + p[2] * x)));
  }
  return 0.0;
}

double PrioritySpec::operator()(double t, const VectorXd& x) const {
  return (*this)(t, x.size() > 0 ? x(0) : 0.0);
}

// ---------------------------------------------------------------------------
// ProblemSpec

ProblemSpec::ProblemSpec(CoefficientSpec coefficients, PayoffSpec payoff, PrioritySpec priority,
                         ActionSet u_set, ActionSet v_set, double horizon, double start_time,
                         VectorXd start_state)
    : coefficients_(std::move(coefficients)),
      payoff_(std::move(payoff)),
      priority_(std::move(priority)),
      u_set_(std::move(u_set)),
      v_set_(std::move(v_set)),
      horizon_(horizon),
      start_time_(start_time),
      start_state_(std::move(start_state)) {
  check_params(coefficient_registry(), coefficients_.family, coefficients_.params);
  check_params(payoff_registry(), payoff_.family, payoff_.params);
  check_params(priority_registry(), priority_.family, priority_.params);
  if (coefficients_.d < 1 || coefficients_.d_prime < 1) {
    throw InvalidArgument("state and noise dimensions must be positive");
  }
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) throw InvalidArgument("horizon must be positive");
  if (!(start_time_ >= 0.0 && start_time_ <= horizon_)) {
    throw InvalidArgument("start time must lie in [0, T]");
  }
  if (start_state_.size() != coefficients_.d) {
    throw InvalidArgument("start state dimension does not match the coefficients");
  }
  if (payoff_.family == PayoffFamily::kQuadraticCapped && payoff_.params[0] < 0.0) {
    throw InvalidArgument("quadratic_capped needs a nonnegative cap");
  }
  const bool needs_matching_actions = coefficients_.family == CoefficientFamily::kBilinear ||
                                      coefficients_.family == CoefficientFamily::kSeasonal;
  if (needs_matching_actions && u_set_.dimension() != v_set_.dimension()) {
    throw InvalidArgument("bilinear drift needs u and v of the same dimension");
  }
}

ProblemSpec ProblemSpec::with_priority(PrioritySpec priority) const {
  return ProblemSpec(coefficients_, payoff_, std::move(priority), u_set_, v_set_, horizon_,
                     start_time_, start_state_);
}

ProblemSpec ProblemSpec::with_start(double start_time, VectorXd start_state) const {
  return ProblemSpec(coefficients_, payoff_, priority_, u_set_, v_set_, horizon_, start_time,
                     std::move(start_state));
}

ProblemSpec ProblemSpec::with_payoff(PayoffSpec payoff) const {
  return ProblemSpec(coefficients_, std::move(payoff), priority_, u_set_, v_set_, horizon_,
                     start_time_, start_state_);
}

double ProblemSpec::declared_lipschitz(double /*box_radius*/) const {
  const auto& p = coefficients_.params;
  switch (coefficients_.family) {
    case CoefficientFamily::kAffine:
      return std::abs(p[1]);
    default:
      return 0.0;
  }
}

double ProblemSpec::declared_growth() const {
  const auto& p = coefficients_.params;
  const double sd = std::sqrt(static_cast<double>(coefficients_.d));
  const double sm = std::sqrt(static_cast<double>(std::min(coefficients_.d, coefficients_.d_prime)));
  const double umax = u_set_.max_norm();
  const double vmax = v_set_.max_norm();
  switch (coefficients_.family) {
    case CoefficientFamily::kConstant:
      return sd * std::abs(p[0]) + sm * std::abs(p[1]);
    case CoefficientFamily::kAffine:
      return sd * (std::abs(p[0]) + std::abs(p[2]) * umax + std::abs(p[3]) * vmax) +
             std::abs(p[1]) + sm * std::abs(p[4]);
    case CoefficientFamily::kBilinear:
      return sd * std::abs(p[0]) * umax * vmax + sm * std::abs(p[1]);
    case CoefficientFamily::kVolControl:
      return sd * std::abs(p[0]) * vmax + sm * (std::abs(p[1]) + std::abs(p[2]) * umax);
    case CoefficientFamily::kSeasonal:
      return sd * std::abs(p[0]) * umax * vmax + sm * std::abs(p[2]);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Coefficient evaluation

namespace {

// Drift component for state coordinate xi; identical across coordinates
// except through xi.
double drift_component(const CoefficientSpec& c, double t, double xi, const VectorXd& u,
                       const VectorXd& v) {
  const auto& p = c.params;
  switch (c.family) {
    case CoefficientFamily::kConstant:
      return p[0];
    case CoefficientFamily::kAffine:
      return p[0] + p[1] * xi + p[2] * u(0) + p[3] * v(0);
    case CoefficientFamily::kBilinear:
      return p[0] * u.dot(v);
    case CoefficientFamily::kVolControl:
      return p[0] * v(0);
    case CoefficientFamily::kSeasonal:
      return p[0] * u.dot(v) * std::cos(p[1] * t);
  }
  return 0.0;
}

double sigma_scale(const CoefficientSpec& c, const VectorXd& u) {
  const auto& p = c.params;
  switch (c.family) {
    case CoefficientFamily::kConstant:
      return p[1];
    case CoefficientFamily::kAffine:
      return p[4];
    case CoefficientFamily::kBilinear:
      return p[1];
    case CoefficientFamily::kVolControl:
      return p[1] + p[2] * std::abs(u(0));
    case CoefficientFamily::kSeasonal:
      return p[2];
  }
  return 0.0;
}

}  // namespace

Coefficients eval_coefficients(const ProblemSpec& spec, double t, const VectorXd& x,
                               std::size_t u, std::size_t v) {
  if (!(t >= 0.0 && t <= spec.horizon())) throw InvalidArgument("time outside [0, T]");
  if (u >= spec.u_set().size()) throw InvalidArgument("u action not in action set");
  if (v >= spec.v_set().size()) throw InvalidArgument("v action not in action set");
  const auto& c = spec.coefficients();
  if (x.size() != c.d) throw InvalidArgument("state dimension mismatch");
  const VectorXd& ua = spec.u_set()[u];
  const VectorXd& va = spec.v_set()[v];
  Coefficients out;
  out.drift.resize(c.d);
  for (int i = 0; i < c.d; ++i) out.drift(i) = drift_component(c, t, x(i), ua, va);
  out.diffusion = MatrixXd::Identity(c.d, c.d_prime) * sigma_scale(c, ua);
  return out;
}

Coefficients eval_coefficients(const ProblemSpec& spec, double t, const VectorXd& x,
                               const VectorXd& u, const VectorXd& v) {
  const auto iu = spec.u_set().find(u);
  const auto iv = spec.v_set().find(v);
  if (!iu) throw InvalidArgument("u action not in action set");
  if (!iv) throw InvalidArgument("v action not in action set");
  return eval_coefficients(spec, t, x, *iu, *iv);
}

ScalarCoefficients eval_scalar(const ProblemSpec& spec, double t, double x, std::size_t u,
                               std::size_t v) {
  const auto& c = spec.coefficients();
  const VectorXd& ua = spec.u_set()[u];
  const VectorXd& va = spec.v_set()[v];
  const double s = sigma_scale(c, ua);
  return {drift_component(c, t, x, ua, va), s * s};
}

// ---------------------------------------------------------------------------
// Assumption sampling

AssumptionReport validate_assumptions(const ProblemSpec& spec, double box_radius,
                                      std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw InvalidArgument("need at least one sample");
  if (!(box_radius > 0.0)) throw InvalidArgument("box radius must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> time_dist(0.0, spec.horizon());
  std::uniform_real_distribution<double> box(-box_radius, box_radius);
  std::uniform_int_distribution<std::size_t> pick_u(0, spec.u_set().size() - 1);
  std::uniform_int_distribution<std::size_t> pick_v(0, spec.v_set().size() - 1);

  const int d = spec.dimension();
  const int dp = spec.coefficients().d_prime;
  AssumptionReport r;
  r.samples = samples;
  r.declared_lipschitz = spec.declared_lipschitz(box_radius);
  r.declared_growth = spec.declared_growth();
  r.payoff_bound = spec.payoff().bound();

  VectorXd x(d), y(d);
  for (std::size_t s = 0; s < samples; ++s) {
    const double t = time_dist(rng);
    for (int i = 0; i < d; ++i) x(i) = box(rng);
    for (int i = 0; i < d; ++i) y(i) = box(rng);
    const std::size_t u = pick_u(rng);
    const std::size_t v = pick_v(rng);

    const Coefficients cx = eval_coefficients(spec, t, x, u, v);
    const Coefficients cy = eval_coefficients(spec, t, y, u, v);
    if (cx.drift.size() != d || cx.diffusion.rows() != d || cx.diffusion.cols() != dp) {
      r.shapes_ok = false;
    }
    if (!cx.drift.allFinite() || !cx.diffusion.allFinite()) r.all_finite = false;

    const double dist = (x - y).norm();
    if (dist > 0.0) {
      const double lip =
          ((cx.drift - cy.drift).norm() + (cx.diffusion - cy.diffusion).norm()) / dist;
      r.max_lipschitz_ratio = std::max(r.max_lipschitz_ratio, lip);
    }
    const double growth = (cx.drift.norm() + cx.diffusion.norm()) / (1.0 + x.norm());
    r.max_growth_ratio = std::max(r.max_growth_ratio, growth);

    const double gx = spec.payoff()(x);
    if (!std::isfinite(gx)) r.all_finite = false;
    r.max_abs_payoff = std::max(r.max_abs_payoff, std::abs(gx));

    const double px = spec.priority()(t, x);
    r.min_priority = std::min(r.min_priority, px);
    r.max_priority = std::max(r.max_priority, px);
  }

  constexpr double kRel = 1e-12;
  r.lipschitz_ok = r.max_lipschitz_ratio <= r.declared_lipschitz * (1.0 + kRel) + kRel;
  r.growth_ok = r.max_growth_ratio <= r.declared_growth * (1.0 + kRel) + kRel;
  r.payoff_ok = r.max_abs_payoff <= r.payoff_bound * (1.0 + kRel) + kRel;
  r.priority_ok = r.min_priority >= 0.0 && r.max_priority <= 1.0;
  return r;
}

ProblemSpec bilinear_benchmark(PrioritySpec priority, double start_state) {
  CoefficientSpec c{CoefficientFamily::kBilinear, {4.0, std::sqrt(2.0)}, 1, 1};
  PayoffSpec g{PayoffFamily::kCos, {1.0, 1.0, 0.0}};
  return ProblemSpec(c, g, std::move(priority), ActionSet::scalars({-1.0, 1.0}),
                     ActionSet::scalars({-1.0, 1.0}), 0.5, 0.0,
                     VectorXd::Constant(1, start_state));
}

}  // namespace isaacs
