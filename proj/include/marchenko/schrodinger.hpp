#pragma once

#include <Eigen/Core>

#include <vector>

#include "marchenko/measure.hpp"

namespace marchenko {

// Moments sigma_0(x)..sigma_N(x) of the representing measure of the
// potential shifted by x.
struct MomentFlowState {
  double x = 0.0;
  Eigen::VectorXd s;
  int N = 0;
  double R = 1.0;
};

struct PotentialTrace {
  std::vector<double> xs;  // ascending, uniform spacing `step`
  std::vector<double> V;   // V = -2 sigma_0
  std::vector<Eigen::VectorXd> states;
  int N_used = 0;
  double R = 1.0;
  double step = 0.0;
  // Bound on the closure error over the trace; +inf where the geometric
  // tail diverges (|x| >= 1/R).
  double est_truncation_error = 0.0;
  // Largest |x| whose tail bound is at most 1e-8.
  double certified_radius = 0.0;
};

MomentFlowState init_flow(const Measure& sigma, int N, double R);

// sigma_0' = -2 sigma_1, sigma_n' = -2 sigma_{n+1} + sum_j sigma_j sigma_{n-1-j},
// closed by sigma_{N+1} = 0.
Eigen::VectorXd flow_derivative(const Eigen::VectorXd& s);
inline Eigen::VectorXd flow_derivative(const MomentFlowState& state) {
  return flow_derivative(state.s);
}

// Fourth-order Runge-Kutta with step doubling on [-x_max, x_max].
PotentialTrace integrate_flow(const Measure& sigma, int N, double R, double x_max, double step);

// Geometric tail 4 R^2 sum_{p > N} (p + 1) (R|x|)^p bounding |V_N(x) - V(x)|.
double truncation_tail_bound(int N, double R, double x);

// p(w) = sum_n sigma_n w^{n+1}.
cplx p_series(const Eigen::VectorXd& s, cplx w);

struct RiccatiPoint {
  double x = 0.0;
  cplx p;
};

// Integrates p' = -V + p^2 - (2/w) p from the series value at x = 0 along
// the trace grid, on [-x_max, x_max].
std::vector<RiccatiPoint> riccati_oracle(const PotentialTrace& trace, cplx w, double x_max);

struct MomentBoundsReport {
  bool passed = true;
  double worst_ratio = 0.0;  // max |sigma_n^{(p)}| / bound
  int worst_n = 0;
  int worst_p = 0;
  double min_sigma0 = 0.0;
};

// Checks |sigma_n| <= R^{n+2} and |sigma_n^{(p)}| <= R^{n+p+2} (n+1+p)!/(n+1)!
// for p <= p_max, with derivatives from repeated differentiation of the flow.
MomentBoundsReport moment_bounds_ok(const MomentFlowState& state, int p_max);

// Smallest eigenvalue of [sigma_{i+j}], i, j <= N/2, divided by R^{N+2}.
double hankel_min_eigenvalue(const Eigen::VectorXd& s, double R);

// sum_k C(N1+k, k) C(N2-k, p-k) == C(N1+N2+1, p) in exact integer arithmetic.
bool marchenko_sum_identity(int N1, int N2, int p);

}  // namespace marchenko
