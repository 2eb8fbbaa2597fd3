#pragma once

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <type_traits>

namespace marchenko {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

// Cached n-point rule; safe to call concurrently.
const GaussRule& gauss_legendre(int n);

template <typename F>
auto integrate_fixed(const F& f, double a, double b, int n) {
  const GaussRule& rule = gauss_legendre(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  using R = std::decay_t<decltype(f(mid))>;
  R acc(0);
  for (int i = 0; i < n; ++i) acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return acc * half;
}

namespace detail {

template <typename F, typename R>
R adaptive_step(const F& f, double a, double b, R whole, double tol, int depth) {
  constexpr int kPoints = 20;
  const double mid = 0.5 * (a + b);
  const R left = integrate_fixed(f, a, mid, kPoints);
  const R right = integrate_fixed(f, mid, b, kPoints);
  const R split = left + right;
  const double diff = std::abs(split - whole);
  const double noise = 64.0 * 2.2e-16 * (std::abs(left) + std::abs(right));
  if (depth <= 0 || diff <= tol || diff <= noise) return split;
  return adaptive_step(f, a, mid, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, mid, b, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Gauss-Legendre with bisection. The tolerance is relative to the
// integral of |f| over [a, b] (floored by abs_tol).
template <typename F>
auto integrate_adaptive(const F& f, double a, double b, double rel_tol = 1e-12,
                        int max_depth = 40, double abs_tol = 1e-300) {
  using R = std::decay_t<decltype(f(a))>;
  const R whole = integrate_fixed(f, a, b, 20);
  const double scale = integrate_fixed([&](double t) { return std::abs(f(t)); }, a, b, 20);
  const double tol = std::max(rel_tol * scale, abs_tol);
  return detail::adaptive_step(f, a, b, whole, tol, max_depth);
}

}  // namespace marchenko
