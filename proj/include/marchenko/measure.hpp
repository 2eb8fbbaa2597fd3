#pragma once

#include <Eigen/Core>

#include <complex>
#include <optional>
#include <vector>

#include "marchenko/quadrature.hpp"
#include "marchenko/setting.hpp"

namespace marchenko {

using cplx = std::complex<double>;

struct Atom {
  double t = 0.0;
  double w = 0.0;
};

// Density on [a, b] given by a Chebyshev series in the affine variable
// mapping [a, b] onto [-1, 1].
struct Piece {
  double a = 0.0;
  double b = 0.0;
  Eigen::VectorXd cheb;

  double density(double t) const;
};

// Finite positive measure made of atoms and piecewise Chebyshev densities.
struct Measure {
  std::vector<Atom> atoms;
  std::vector<Piece> pieces;

  bool empty() const { return atoms.empty() && pieces.empty(); }

  // Integral of f against the measure; adaptive quadrature on the pieces.
  template <typename F>
  auto integrate(const F& f, double rel_tol = 1e-12) const {
    using R = std::decay_t<decltype(f(0.0))>;
    R acc(0);
    for (const Atom& at : atoms) acc += at.w * f(at.t);
    for (const Piece& p : pieces) {
      acc += integrate_adaptive([&](double t) { return p.density(t) * f(t); }, p.a, p.b, rel_tol);
    }
    return acc;
  }
};

struct SupportInfo {
  double min = 0.0;
  double max = 0.0;
  double distance_to_zero = 0.0;
};

// Empty optional for the zero measure.
std::optional<SupportInfo> support_bounds(const Measure& mu);

// Checks positivity, disjointness and the support constraint of the setting;
// returns the measure unchanged on success.
Measure validate(Measure mu, const Setting& setting);

double total_mass(const Measure& mu);

// Generalized moment int t^n dmu(t); n may be negative.
double moment(const Measure& mu, int n);

// Cauchy transform int dmu(t) / (t - lam).
cplx cauchy(const Measure& mu, cplx lam);

}  // namespace marchenko
