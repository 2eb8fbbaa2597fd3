#pragma once

#include <Eigen/Core>

#include <utility>
#include <vector>

#include "marchenko/herglotz.hpp"
#include "marchenko/measure.hpp"

namespace marchenko {

// Coefficients a_n, b_n of (Ju)_n = a_n u_{n+1} + a_{n-1} u_{n-1} + b_n u_n
// for n_min <= n <= n_max.
struct JacobiWindow {
  int n_min = 0;
  int n_max = 0;
  Eigen::VectorXd a;
  Eigen::VectorXd b;
  double R = 2.0;

  // Free values (a = 1, b = 0) outside the window.
  double a_at(int n) const { return n < n_min || n > n_max ? 1.0 : a[n - n_min]; }
  double b_at(int n) const { return n < n_min || n > n_max ? 0.0 : b[n - n_min]; }
};

JacobiWindow free_window(int N, double R = 2.0);

// Moments of the spectral measure rho_+ or rho_-, with the boundary
// coefficients fixed by sigma.
struct AsymptoticMoments {
  Side side = Side::plus;
  Eigen::VectorXd mu;
  double a0 = 1.0;
  double b0 = 0.0;
  double a_minus1 = 1.0;
};

// mu_0..mu_K from the small-lambda expansion of F.
AsymptoticMoments rho_plus_moments(const Measure& sigma, const Setting& setting, int K);

// mu_0..mu_K of rho_-, via the same pipeline applied to the reflected data.
AsymptoticMoments rho_minus_moments(const Measure& sigma, const Setting& setting, int K);

// Monic recurrence p_{k+1} = (x - alpha_k) p_k - beta_k p_{k-1}, k = 0..n-1,
// with beta_0 the total mass. The half-line Jacobi coefficients are alpha_k
// on the diagonal and sqrt(beta_k), k >= 1, off the diagonal.
struct Recurrence {
  Eigen::VectorXd alpha;
  Eigen::VectorXd beta;
};

// Modified Chebyshev algorithm with monic Chebyshev polynomials on [-R, R]
// as the auxiliary family. Needs mu_0..mu_{2n-1}.
Recurrence moments_to_recurrence(const Eigen::VectorXd& mu, int n, double R);
Recurrence moments_to_recurrence(const AsymptoticMoments& m, int n, double R);

// Cholesky factorization of the raw Hankel matrix. Needs mu_0..mu_{2n}.
Recurrence hankel_recurrence(const Eigen::VectorXd& mu, int n);

struct DiscreteMeasure {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

// Quadrature discretization of rho_side: the absolutely continuous part on
// [-2, 2] on a graded mesh in the angle, plus the atoms outside [-2, 2].
DiscreteMeasure spectral_measure(const Measure& sigma, const Setting& setting, Side side);

// First n recurrence coefficients of a discrete measure (Gragg-Harrod
// rational Lanczos).
Recurrence lanczos(const DiscreteMeasure& d, int n);

// Whole-line window n in [-N, N] for an admissible sigma.
JacobiWindow reconstruct(const Measure& sigma, const Setting& setting, int N);

// m_side by backward continued fraction over the window, padded with `pad`
// free sites seeded by the exact free m-function.
cplx m_oracle(const JacobiWindow& J, cplx z, Side side, int pad = 200);

struct Prop311Report {
  bool passed = false;
  double worst_margin = 0.0;  // min over pairs of the log-distance to the bounds
  int worst_n = 0;
  std::vector<double> ratios;  // (a_{n+1}^2 - 1)/(a_n^2 - 1), n = n_min..n_max-1; NaN if skipped
  int skipped = 0;
};

inline constexpr double kProp311Floor = 1e-10;

// Checks r^2 < (a_{n+1}^2 - 1)/(a_n^2 - 1) < 1/r^2 on the resolved core: the
// pairs between the first and last site with a_n^2 - 1 >= floor. Pairs in the
// tails, where a_n^2 - 1 is lost to roundoff, are skipped.
Prop311Report prop311_check(const JacobiWindow& J, double r, double floor = kProp311Floor);

// Extreme eigenvalues of the finite window matrix; a diagnostic for ||J||.
std::pair<double, double> numerical_range(const JacobiWindow& J);

}  // namespace marchenko
