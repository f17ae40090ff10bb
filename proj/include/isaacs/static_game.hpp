#pragma once

// One-period zero-sum game f(u, v) on finite action grids, with the two
// informational orders and the coin-tossed mixture of them.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "isaacs/errors.hpp"

namespace isaacs {

template <typename Scalar>
using LocalGameMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Response map: entry i is the responder's action index against opponent action i.
using ResponseMap = std::vector<Eigen::Index>;

template <typename Scalar>
struct LowerSolution {
  Scalar value;
  Eigen::Index u_star;
  ResponseMap beta_star;  // U-index -> V-index
};

template <typename Scalar>
struct UpperSolution {
  Scalar value;
  Eigen::Index v_star;
  ResponseMap alpha_star;  // V-index -> U-index
};

template <typename Scalar>
struct StaticSaddle {
  Scalar lower_value;
  Scalar upper_value;
  Eigen::Index u_star;
  Eigen::Index v_star;
  ResponseMap beta_star;
  ResponseMap alpha_star;
};

namespace detail {

template <typename Derived>
void require_nonempty(const Eigen::MatrixBase<Derived>& f) {
  if (f.rows() == 0 || f.cols() == 0) throw InvalidArgument("local game matrix is empty");
}

}  // namespace detail

/// sup_u inf_v f: v sees u. beta_star(i) = argmin_j f(i,j), then
/// u_star = argmax_i f(i, beta_star(i)); ties go to the lowest index.
template <typename Derived>
LowerSolution<typename Derived::Scalar> lower_value(const Eigen::MatrixBase<Derived>& f) {
  detail::require_nonempty(f);
  using Scalar = typename Derived::Scalar;
  LowerSolution<Scalar> out{Scalar(0), 0, ResponseMap(static_cast<std::size_t>(f.rows()))};
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < f.cols(); ++j) {
      if (f(i, j) < f(i, best)) best = j;
    }
    out.beta_star[i] = best;
    if (i == 0 || f(i, best) > out.value) {
      out.value = f(i, best);
      out.u_star = i;
    }
  }
  return out;
}

/// inf_v sup_u f: u sees v. Mirror image of lower_value.
template <typename Derived>
UpperSolution<typename Derived::Scalar> upper_value(const Eigen::MatrixBase<Derived>& f) {
  detail::require_nonempty(f);
  using Scalar = typename Derived::Scalar;
  UpperSolution<Scalar> out{Scalar(0), 0, ResponseMap(static_cast<std::size_t>(f.cols()))};
  for (Eigen::Index j = 0; j < f.cols(); ++j) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < f.rows(); ++i) {
      if (f(i, j) > f(best, j)) best = i;
    }
    out.alpha_star[j] = best;
    if (j == 0 || f(best, j) < out.value) {
      out.value = f(best, j);
      out.v_star = j;
    }
  }
  return out;
}

// Value-only variants for hot loops; same numbers as lower_value/upper_value.
template <typename Derived>
typename Derived::Scalar lower_value_only(const Eigen::MatrixBase<Derived>& f) {
  return f.rowwise().minCoeff().maxCoeff();
}

template <typename Derived>
typename Derived::Scalar upper_value_only(const Eigen::MatrixBase<Derived>& f) {
  return f.colwise().maxCoeff().minCoeff();
}

template <typename Derived>
StaticSaddle<typename Derived::Scalar> static_saddle(const Eigen::MatrixBase<Derived>& f) {
  auto lo = lower_value(f);
  auto up = upper_value(f);
  return {lo.value, up.value, lo.u_star, up.v_star, std::move(lo.beta_star),
          std::move(up.alpha_star)};
}

inline void require_probability(double prio) {
  if (!(prio >= 0.0 && prio <= 1.0)) throw InvalidArgument("priority must lie in [0, 1]");
}

/// prio f^- + (1 - prio) f^+.
template <typename Derived>
typename Derived::Scalar mixed_value(const Eigen::MatrixBase<Derived>& f, double prio) {
  require_probability(prio);
  return prio * lower_value(f).value + (1.0 - prio) * upper_value(f).value;
}

template <typename Scalar>
struct RepresentationCheck {
  Scalar supinf;
  Scalar infsup;
  Scalar residual;
};

namespace detail {

// All maps {0..domain-1} -> {0..range-1}, as base-`range` counters.
inline std::vector<ResponseMap> all_maps(Eigen::Index domain, Eigen::Index range) {
  std::vector<ResponseMap> maps;
  ResponseMap m(static_cast<std::size_t>(domain), 0);
  while (true) {
    maps.push_back(m);
    Eigen::Index k = 0;
    while (k < domain && ++m[k] == range) m[k++] = 0;
    if (k == domain) break;
  }
  return maps;
}

}  // namespace detail

inline constexpr Eigen::Index kMaxEnumeratedActions = 4;

/// Brute-force sup over (u, alpha) of inf over (v, beta) of
/// prio f(u, beta(u)) + (1 - prio) f(alpha(v), v), the reversed order, and
/// their distance from mixed_value. Limited to 4 x 4 games.
template <typename Derived>
RepresentationCheck<typename Derived::Scalar> representation_residual(
    const Eigen::MatrixBase<Derived>& f, double prio) {
  detail::require_nonempty(f);
  require_probability(prio);
  using Scalar = typename Derived::Scalar;
  const Eigen::Index nu = f.rows();
  const Eigen::Index nv = f.cols();
  if (nu > kMaxEnumeratedActions || nv > kMaxEnumeratedActions) {
    throw InvalidArgument("action sets too large for map enumeration (max 4 x 4)");
  }
  const auto alphas = detail::all_maps(nv, nu);  // V -> U
  const auto betas = detail::all_maps(nu, nv);   // U -> V

  // payoff(u, alpha; v, beta)
  auto payoff = [&](Eigen::Index u, const ResponseMap& alpha, Eigen::Index v,
                    const ResponseMap& beta) {
    return prio * f(u, beta[u]) + (1.0 - prio) * f(alpha[v], v);
  };

  Scalar supinf = -std::numeric_limits<Scalar>::infinity();
  for (Eigen::Index u = 0; u < nu; ++u) {
    for (const auto& alpha : alphas) {
      Scalar inner = std::numeric_limits<Scalar>::infinity();
      for (Eigen::Index v = 0; v < nv; ++v) {
        for (const auto& beta : betas) inner = std::min(inner, payoff(u, alpha, v, beta));
      }
      supinf = std::max(supinf, inner);
    }
  }
  Scalar infsup = std::numeric_limits<Scalar>::infinity();
  for (Eigen::Index v = 0; v < nv; ++v) {
    for (const auto& beta : betas) {
      Scalar inner = -std::numeric_limits<Scalar>::infinity();
      for (Eigen::Index u = 0; u < nu; ++u) {
        for (const auto& alpha : alphas) inner = std::max(inner, payoff(u, alpha, v, beta));
      }
      infsup = std::min(infsup, inner);
    }
  }
  const Scalar mixed = mixed_value(f, prio);
  return {supinf, infsup, std::max(std::abs(supinf - mixed), std::abs(infsup - mixed))};
}

// A player's pre-toss commitment: plain action plus counter-map.
struct PeriodChoice {
  Eigen::Index action;
  ResponseMap counter;
};

/// Plays one period: heads (coin < prio) means v sees u, so u's plain action
/// meets v's counter-map; tails means u's counter-map meets v's plain action.
template <typename Derived>
typename Derived::Scalar play_one_period(const Eigen::MatrixBase<Derived>& f, double prio,
                                         const PeriodChoice& u_choice,
                                         const PeriodChoice& v_choice, double coin) {
  detail::require_nonempty(f);
  require_probability(prio);
  if (!(coin >= 0.0 && coin < 1.0)) throw InvalidArgument("coin draw must lie in [0, 1)");
  const auto nu = f.rows();
  const auto nv = f.cols();
  auto in_range = [](Eigen::Index i, Eigen::Index n) { return i >= 0 && i < n; };
  if (!in_range(u_choice.action, nu) || !in_range(v_choice.action, nv) ||
      static_cast<Eigen::Index>(u_choice.counter.size()) != nv ||
      static_cast<Eigen::Index>(v_choice.counter.size()) != nu) {
    throw InvalidArgument("malformed period choice");
  }
  for (auto a : u_choice.counter) {
    if (!in_range(a, nu)) throw InvalidArgument("malformed counter-map for u");
  }
  for (auto b : v_choice.counter) {
    if (!in_range(b, nv)) throw InvalidArgument("malformed counter-map for v");
  }
  if (coin < prio) return f(u_choice.action, v_choice.counter[u_choice.action]);
  return f(u_choice.counter[v_choice.action], v_choice.action);
}

}  // namespace isaacs
