#include "marchenko/schrodinger.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdint>
#include <optional>

#include "marchenko/herglotz.hpp"

namespace marchenko {
namespace {

Eigen::VectorXd rk4(const Eigen::VectorXd& y, double h) {
  const Eigen::VectorXd k1 = flow_derivative(y);
  const Eigen::VectorXd k2 = flow_derivative(y + 0.5 * h * k1);
  const Eigen::VectorXd k3 = flow_derivative(y + 0.5 * h * k2);
  const Eigen::VectorXd k4 = flow_derivative(y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void check_estmom(const Eigen::VectorXd& s, double R, double x) {
  double bound = R * R;
  for (Eigen::Index n = 0; n < s.size(); ++n, bound *= R) {
    if (!(std::abs(s[n]) <= bound * (1.0 + 1e-9))) {
      throw Error(ErrorCode::TruncationBlowup,
                  "moment bound |sigma_n| <= R^(n+2) violated; increase N or shrink x_max")
          .with_location(x)
          .with_index(static_cast<long>(n));
    }
  }
}

std::optional<std::uint64_t> binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) {
    // c * (n - k + i) is divisible by i at every step.
    std::uint64_t next;
    if (__builtin_mul_overflow(c, static_cast<std::uint64_t>(n - k + i), &next)) return std::nullopt;
    c = next / static_cast<std::uint64_t>(i);
  }
  return c;
}

}  // namespace

MomentFlowState init_flow(const Measure& sigma, int N, double R) {
  if (N < 4) throw Error(ErrorCode::InvalidArgument, "moment flow needs N >= 4").with_index(N);
  const Setting setting = Setting::schrodinger(R);
  const Measure valid = validate(sigma, setting);
  const AdmissibilityReport adm = admissible_continuous(valid, setting);
  if (!adm.passed) {
    throw Error(ErrorCode::AdmissibilityRequired, "1 + int dsigma/(t^2 - R^2) is negative")
        .with_location(adm.min_value);
  }
  MomentFlowState state;
  state.N = N;
  state.R = R;
  state.s.resize(N + 1);
  for (int n = 0; n <= N; ++n) state.s[n] = valid.empty() ? 0.0 : moment(valid, n);
  return state;
}

Eigen::VectorXd flow_derivative(const Eigen::VectorXd& s) {
  const Eigen::Index N = s.size() - 1;
  Eigen::VectorXd d(s.size());
  for (Eigen::Index n = 0; n <= N; ++n) {
    const double next = n < N ? s[n + 1] : 0.0;
    double conv = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) conv += s[j] * s[n - 1 - j];
    d[n] = -2.0 * next + conv;
  }
  return d;
}

double truncation_tail_bound(int N, double R, double x) {
  const double q = R * std::abs(x);
  if (q >= 1.0) return INFINITY;
  const int M = N + 1;
  return 4.0 * R * R * std::pow(q, M) * ((M + 1) - M * q) / ((1.0 - q) * (1.0 - q));
}

PotentialTrace integrate_flow(const Measure& sigma, int N, double R, double x_max, double step) {
  if (!(x_max > 0.0) || !(step > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "integrate_flow needs x_max > 0 and step > 0");
  }
  const MomentFlowState start = init_flow(sigma, N, R);
  const int steps = static_cast<int>(std::ceil(x_max / step - 1e-9));
  const double h = x_max / steps;

  auto march = [&](double dir) {
    std::vector<Eigen::VectorXd> path{start.s};
    Eigen::VectorXd y = start.s;
    for (int i = 1; i <= steps; ++i) {
      const Eigen::VectorXd full = rk4(y, dir * h);
      const Eigen::VectorXd half = rk4(rk4(y, 0.5 * dir * h), 0.5 * dir * h);
      double err = 0.0, scale = 1.0;
      for (Eigen::Index n = 0; n < y.size(); ++n, scale *= R) {
        err = std::max(err, std::abs(full[n] - half[n]) / std::max(1.0, scale));
      }
      const double x = dir * h * i;
      if (!(err <= 1e-6)) {
        throw Error(ErrorCode::StepTooLarge, "step-doubling error estimate exceeds 1e-6")
            .with_location(x);
      }
      y = half;
      check_estmom(y, R, x);
      path.push_back(y);
    }
    return path;
  };
  check_estmom(start.s, R, 0.0);
  const auto forward = march(1.0);
  const auto backward = march(-1.0);

  PotentialTrace trace;
  trace.N_used = N;
  trace.R = R;
  trace.step = h;
  for (int i = steps; i >= 1; --i) {
    trace.xs.push_back(-h * i);
    trace.states.push_back(backward[i]);
  }
  for (int i = 0; i <= steps; ++i) {
    trace.xs.push_back(h * i);
    trace.states.push_back(forward[i]);
  }
  for (const auto& s : trace.states) trace.V.push_back(-2.0 * s[0]);
  trace.est_truncation_error = truncation_tail_bound(N, R, x_max);

  double lo = 0.0, hi = 1.0 / R;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (truncation_tail_bound(N, R, mid) <= 1e-8 ? lo : hi) = mid;
  }
  trace.certified_radius = lo;
  return trace;
}

cplx p_series(const Eigen::VectorXd& s, cplx w) {
  cplx acc = 0.0;
  for (Eigen::Index n = s.size() - 1; n >= 0; --n) acc = (acc + s[n]) * w;
  return acc;
}

std::vector<RiccatiPoint> riccati_oracle(const PotentialTrace& trace, cplx w, double x_max) {
  if (!(std::abs(w) < 1.0 / trace.R) || w == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "riccati_oracle needs 0 < |w| < 1/R");
  }
  const int n = static_cast<int>(trace.xs.size());
  const int zero = n / 2;
  if (n < 7 || trace.xs[zero] != 0.0) {
    throw Error(ErrorCode::InvalidArgument, "trace must be symmetric about x = 0");
  }
  const double h = trace.step;
  const int reach = static_cast<int>(std::floor(x_max / h + 1e-9));
  if (reach > zero) throw Error(ErrorCode::InvalidArgument, "x_max exceeds the trace");

  // Six-point Lagrange interpolation of V on the uniform trace grid.
  auto potential = [&](double x) {
    const double u = (x - trace.xs.front()) / h;
    const int j = std::clamp(static_cast<int>(std::floor(u)) - 2, 0, n - 6);
    const double t = u - j;
    double acc = 0.0;
    for (int a = 0; a < 6; ++a) {
      double l = 1.0;
      for (int b = 0; b < 6; ++b)
        if (b != a) l *= (t - b) / (a - b);
      acc += l * trace.V[j + a];
    }
    return acc;
  };
  const double bound = 10.0 * trace.R;
  auto rhs = [&](double x, cplx p) { return -potential(x) + p * p - (2.0 / w) * p; };
  // Substeps keep h |2/w| small; the linear part is the stiff one.
  const int sub = std::max(1, static_cast<int>(std::ceil(h * 2.0 / std::abs(w) / 0.02)));

  std::vector<RiccatiPoint> fwd{{0.0, p_series(trace.states[zero], w)}};
  std::vector<RiccatiPoint> bwd;
  for (int dir : {1, -1}) {
    cplx p = fwd.front().p;
    const double hh = dir * h / sub;
    for (int k = 0; k < reach; ++k) {
      const int i1 = zero + dir * (k + 1);
      for (int m = 0; m < sub; ++m) {
        const double x = trace.xs[zero + dir * k] + m * hh;
        const cplx k1 = rhs(x, p);
        const cplx k2 = rhs(x + 0.5 * hh, p + 0.5 * hh * k1);
        const cplx k3 = rhs(x + 0.5 * hh, p + 0.5 * hh * k2);
        const cplx k4 = rhs(x + hh, p + hh * k3);
        p += hh / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      if (!(std::abs(p) <= bound)) {
        throw Error(ErrorCode::BlowUp, "Riccati solution left the analyticity domain")
            .with_location(trace.xs[i1]);
      }
      (dir > 0 ? fwd : bwd).push_back({trace.xs[i1], p});
    }
  }
  std::vector<RiccatiPoint> out(bwd.rbegin(), bwd.rend());
  out.insert(out.end(), fwd.begin(), fwd.end());
  return out;
}

MomentBoundsReport moment_bounds_ok(const MomentFlowState& state, int p_max) {
  const int N = static_cast<int>(state.s.size()) - 1;
  const double R = state.R;
  p_max = std::clamp(p_max, 0, N);
  // D[p][n] = sigma_n^{(p)}, valid for n <= N - p.
  std::vector<Eigen::VectorXd> D{state.s};
  for (int p = 0; p < p_max; ++p) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(N + 1);
    for (int n = 0; n <= N - p - 1; ++n) {
      double acc = -2.0 * D[p][n + 1];
      double binom = 1.0;
      for (int q = 0; q <= p; ++q) {
        double conv = 0.0;
        for (int j = 0; j < n; ++j) conv += D[q][j] * D[p - q][n - 1 - j];
        acc += binom * conv;
        binom = binom * (p - q) / (q + 1);
      }
      next[n] = acc;
    }
    D.push_back(next);
  }
  MomentBoundsReport rep;
  rep.min_sigma0 = state.s.size() > 0 ? state.s[0] : 0.0;
  for (int p = 0; p <= p_max; ++p) {
    for (int n = 0; n <= N - p; ++n) {
      // R^{n+p+2} (n+1+p)! / (n+1)!
      double bound = std::pow(R, n + p + 2);
      for (int k = n + 2; k <= n + 1 + p; ++k) bound *= k;
      const double ratio = std::abs(D[p][n]) / bound;
      if (ratio > rep.worst_ratio) {
        rep.worst_ratio = ratio;
        rep.worst_n = n;
        rep.worst_p = p;
      }
    }
  }
  rep.passed = rep.worst_ratio <= 1.0 + 1e-9 && rep.min_sigma0 >= -1e-9;
  return rep;
}

double hankel_min_eigenvalue(const Eigen::VectorXd& s, double R) {
  const Eigen::Index m = (s.size() - 1) / 2 + 1;
  Eigen::MatrixXd H(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) H(i, j) = s[i + j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() / std::pow(R, static_cast<double>(s.size() + 1));
}

bool marchenko_sum_identity(int N1, int N2, int p) {
  if (N1 < 1 || p < 0 || N2 < p) {
    throw Error(ErrorCode::InvalidArgument, "identity needs N1 >= 1 and N2 >= p >= 0");
  }
  std::uint64_t lhs = 0;
  for (int k = 0; k <= p; ++k) {
    const auto c1 = binomial(N1 + k, k), c2 = binomial(N2 - k, p - k);
    if (!c1 || !c2) throw Error(ErrorCode::InvalidArgument, "binomial overflow");
    std::uint64_t term;
    if (__builtin_mul_overflow(*c1, *c2, &term) || __builtin_add_overflow(lhs, term, &lhs)) {
      throw Error(ErrorCode::InvalidArgument, "binomial overflow");
    }
  }
  const auto rhs = binomial(N1 + N2 + 1, p);
  if (!rhs) throw Error(ErrorCode::InvalidArgument, "binomial overflow");
  return lhs == *rhs;
}

}  // namespace marchenko
