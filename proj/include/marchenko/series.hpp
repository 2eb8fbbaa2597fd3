#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>

#include "marchenko/error.hpp"

namespace marchenko {

// Truncated Laurent series sum_{k >= lead} c_k x^k + O(x^order).
//
// Coefficients at exponents >= order are unknown, not zero, and every
// operation below propagates the order that is actually provable from its
// inputs.
template <typename Scalar>
class TruncatedSeries {
 public:
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  TruncatedSeries() = default;

  TruncatedSeries(int lead, Coeffs coeffs) : lead_(lead), coeffs_(std::move(coeffs)) {}

  // Polynomial with the given coefficients starting at `lead`, known to be
  // exact up to (but excluding) exponent `order`.
  TruncatedSeries(int lead, std::initializer_list<Scalar> coeffs, int order) : lead_(lead) {
    if (order < lead) order = lead;
    coeffs_ = Coeffs::Zero(order - lead);
    int k = 0;
    for (Scalar c : coeffs) {
      if (k < coeffs_.size()) coeffs_[k] = c;
      ++k;
    }
  }

  static TruncatedSeries zero(int order) {
    if (order <= 0) return TruncatedSeries(order, Coeffs());
    return TruncatedSeries(0, Coeffs::Zero(order));
  }

  static TruncatedSeries constant(Scalar c, int order) { return monomial(0, c, order); }

  static TruncatedSeries monomial(int exponent, Scalar c, int order) {
    if (order <= exponent) return TruncatedSeries(order, Coeffs());
    Coeffs v = Coeffs::Zero(order - exponent);
    v[0] = c;
    return TruncatedSeries(exponent, std::move(v));
  }

  int lead() const { return lead_; }
  int order() const { return lead_ + static_cast<int>(coeffs_.size()); }
  int size() const { return static_cast<int>(coeffs_.size()); }
  const Coeffs& coeffs() const { return coeffs_; }

  // Coefficient of x^exponent; zero below lead, an error at or beyond order.
  Scalar operator[](int exponent) const {
    if (exponent >= order()) {
      throw Error(ErrorCode::InvalidArgument,
                  "coefficient of x^" + std::to_string(exponent) + " is beyond the known order")
          .with_index(exponent);
    }
    if (exponent < lead_) return Scalar(0);
    return coeffs_[exponent - lead_];
  }

  // Exponent of the first nonzero known coefficient, or order() if none.
  int valuation() const {
    for (int k = 0; k < size(); ++k) {
      if (coeffs_[k] != Scalar(0)) return lead_ + k;
    }
    return order();
  }

  TruncatedSeries truncated(int new_order) const {
    const int o = std::min(order(), new_order);
    const int l = std::min(lead_, o);
    Coeffs v = Coeffs::Zero(o - l);
    for (int e = std::max(l, lead_); e < o; ++e) v[e - l] = coeffs_[e - lead_];
    return TruncatedSeries(l, std::move(v));
  }

  // Sum of the known terms at x.
  template <typename T>
  T evaluate(T x) const {
    T acc(0);
    for (int k = size() - 1; k >= 0; --k) acc = acc * x + T(coeffs_[k]);
    if (lead_ != 0) acc *= std::pow(x, lead_);
    return acc;
  }

 private:
  int lead_ = 0;
  Coeffs coeffs_;
};

template <typename Scalar>
TruncatedSeries<Scalar> add(const TruncatedSeries<Scalar>& a, const TruncatedSeries<Scalar>& b) {
  const int order = std::min(a.order(), b.order());
  const int lead = std::min({a.lead(), b.lead(), order});
  typename TruncatedSeries<Scalar>::Coeffs v =
      TruncatedSeries<Scalar>::Coeffs::Zero(order - lead);
  for (int e = lead; e < order; ++e) {
    v[e - lead] = (e >= a.lead() ? a[e] : Scalar(0)) + (e >= b.lead() ? b[e] : Scalar(0));
  }
  return TruncatedSeries<Scalar>(lead, std::move(v));
}

template <typename Scalar>
TruncatedSeries<Scalar> scale(const TruncatedSeries<Scalar>& a, Scalar c) {
  return TruncatedSeries<Scalar>(a.lead(), a.coeffs() * c);
}

template <typename Scalar>
TruncatedSeries<Scalar> subtract(const TruncatedSeries<Scalar>& a,
                                 const TruncatedSeries<Scalar>& b) {
  return add(a, scale(b, Scalar(-1)));
}

template <typename Scalar>
TruncatedSeries<Scalar> multiply(const TruncatedSeries<Scalar>& a,
                                 const TruncatedSeries<Scalar>& b) {
  const int lead = a.lead() + b.lead();
  const int order = std::min(a.order() + b.lead(), b.order() + a.lead());
  const int n = order - lead;
  typename TruncatedSeries<Scalar>::Coeffs v = TruncatedSeries<Scalar>::Coeffs::Zero(n);
  for (int i = 0; i < std::min(n, a.size()); ++i) {
    const int jmax = std::min(n - i, b.size());
    for (int j = 0; j < jmax; ++j) v[i + j] += a.coeffs()[i] * b.coeffs()[j];
  }
  return TruncatedSeries<Scalar>(lead, std::move(v));
}

// 1/f. The relative number of known terms is preserved.
template <typename Scalar>
TruncatedSeries<Scalar> reciprocal(const TruncatedSeries<Scalar>& f) {
  const int v = f.valuation();
  if (v >= f.order()) {
    throw Error(ErrorCode::InvalidArgument, "reciprocal of a series with no known nonzero term");
  }
  const int n = f.order() - v;
  auto c = [&](int k) { return f[v + k]; };
  typename TruncatedSeries<Scalar>::Coeffs g(n);
  g[0] = Scalar(1) / c(0);
  for (int k = 1; k < n; ++k) {
    Scalar acc(0);
    for (int j = 1; j <= k; ++j) acc += c(j) * g[k - j];
    g[k] = -acc / c(0);
  }
  return TruncatedSeries<Scalar>(-v, std::move(g));
}

// f(g(x)). Requires f to be a power series and g(0) = 0.
template <typename Scalar>
TruncatedSeries<Scalar> compose(const TruncatedSeries<Scalar>& f,
                                const TruncatedSeries<Scalar>& g) {
  using TS = TruncatedSeries<Scalar>;
  if (f.lead() < 0 && f.valuation() < 0) {
    throw Error(ErrorCode::InvalidArgument, "compose: outer series has a principal part");
  }
  for (int e = g.lead(); e <= 0 && e < g.order(); ++e) {
    if (g[e] != Scalar(0)) {
      throw Error(ErrorCode::InvalidArgument, "compose: inner series has a nonzero constant term")
          .with_index(e);
    }
  }
  if (g.order() <= 0) {
    throw Error(ErrorCode::InvalidArgument, "compose: inner constant term is unknown");
  }
  const int lg = std::max(1, g.valuation());
  const int og = g.order();
  const int lf = std::max(0, f.lead());
  const int of = f.order();

  long target = static_cast<long>(lg) * of;
  if (of > std::max(1, lf)) target = std::min<long>(target, static_cast<long>(std::max(1, lf) - 1) * lg + og);
  const int order = static_cast<int>(target);

  const TS inner = g.truncated(order);
  TS acc = TS::zero(order);
  for (int k = of - 1; k >= lf; --k) {
    acc = add(multiply(acc, inner).truncated(order), TS::constant(f[k], order));
  }
  if (lf > 0) {
    TS power = TS::constant(Scalar(1), order);
    for (int k = 0; k < lf; ++k) power = multiply(power, inner).truncated(order);
    acc = multiply(acc, power);
  }
  return acc.truncated(order);
}

// Compositional inverse: g with f(g(u)) = u. Requires f(0) = 0, f'(0) != 0.
template <typename Scalar>
TruncatedSeries<Scalar> revert(const TruncatedSeries<Scalar>& f) {
  using TS = TruncatedSeries<Scalar>;
  if (f.order() < 2) {
    throw Error(ErrorCode::InvalidArgument, "revert: the linear coefficient is unknown");
  }
  for (int e = f.lead(); e <= 0; ++e) {
    if (f[e] != Scalar(0)) {
      throw Error(ErrorCode::InvalidArgument, "revert: f(0) must vanish").with_index(e);
    }
  }
  if (f[1] == Scalar(0)) {
    throw Error(ErrorCode::InvalidArgument, "revert: f'(0) must be nonzero");
  }
  // Lagrange inversion: [u^n] g = (1/n) [w^{n-1}] (w / f(w))^n.
  const int order = f.order();
  typename TS::Coeffs q(order - 1);
  for (int k = 0; k < order - 1; ++k) q[k] = f[k + 1];
  const TS h = reciprocal(TS(0, q));
  typename TS::Coeffs out = TS::Coeffs::Zero(order - 1);
  TS power = TS::constant(Scalar(1), h.order());
  for (int n = 1; n < order; ++n) {
    power = multiply(power, h);
    out[n - 1] = power[n - 1] / Scalar(n);
  }
  return TS(1, std::move(out));
}

template <typename Scalar>
TruncatedSeries<Scalar> operator+(const TruncatedSeries<Scalar>& a,
                                  const TruncatedSeries<Scalar>& b) {
  return add(a, b);
}

template <typename Scalar>
TruncatedSeries<Scalar> operator-(const TruncatedSeries<Scalar>& a,
                                  const TruncatedSeries<Scalar>& b) {
  return subtract(a, b);
}

template <typename Scalar>
TruncatedSeries<Scalar> operator*(const TruncatedSeries<Scalar>& a,
                                  const TruncatedSeries<Scalar>& b) {
  return multiply(a, b);
}

using Series = TruncatedSeries<double>;

}  // namespace marchenko
