#include "marchenko/jacobi.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "marchenko/series.hpp"

namespace marchenko {
namespace {

double moment_or_zero(const Measure& sigma, int n) { return sigma.empty() ? 0.0 : moment(sigma, n); }

// Taylor coefficients lam + sum_{k>=2} f_k lam^k of a function of the F
// type, turned into moments of the measure of m(z) = F(lam(z)).
Eigen::VectorXd moments_from_taylor(const Series& F, int K) {
  const int order = K + 2;
  // u = 1/phi(lam) = -lam/(1 + lam^2).
  Series::Coeffs u = Series::Coeffs::Zero(order - 1);
  for (int k = 0; k < u.size(); k += 2) u[k] = (k / 2) % 2 == 0 ? -1.0 : 1.0;
  const Series lam_of_u = revert(Series(1, u));
  const Series m = compose(F, lam_of_u);
  Eigen::VectorXd mu(K + 1);
  for (int k = 0; k <= K; ++k) mu[k] = -m[k + 1];
  return mu;
}

void check_unit_mass(const Eigen::VectorXd& mu) {
  if (std::abs(mu[0] - 1.0) > 1e-10) {
    throw Error(ErrorCode::MomentMismatch, "spectral measure does not have unit mass")
        .with_location(mu[0]);
  }
}

struct Boundary {
  double a0, b0, a_minus1;
};

Boundary boundary_coefficients(const Measure& sigma) {
  const double sm1 = moment_or_zero(sigma, -1);
  const double sm2 = moment_or_zero(sigma, -2);
  const double s0 = moment_or_zero(sigma, 0);
  if (!(sm2 < 1.0)) {
    throw Error(ErrorCode::InadmissibleSigma, "sigma_{-2} >= 1 leaves a_0 undefined")
        .with_location(sm2);
  }
  if (!(1.0 - sm2 + s0 > 0.0)) {
    throw Error(ErrorCode::InadmissibleSigma, "1 - sigma_{-2} + sigma_0 must be positive");
  }
  const double a0sq = 1.0 / (1.0 - sm2);
  return {std::sqrt(a0sq), -sm1 * a0sq, std::sqrt(1.0 + s0 * a0sq)};
}

void require_jacobi(const Setting& setting) {
  if (setting.kind != SettingKind::jacobi) {
    throw Error(ErrorCode::InvalidArgument, "operation needs the jacobi setting");
  }
}

// Stable forms of t^2 - 2 t cos(theta) + 1.
double circle_distance_sq(double t, double theta) {
  if (t >= 0.0) {
    const double s = std::sin(0.5 * theta);
    return (t - 1.0) * (t - 1.0) + 4.0 * t * s * s;
  }
  const double c = std::cos(0.5 * theta);
  return (t + 1.0) * (t + 1.0) - 4.0 * t * c * c;
}

}  // namespace

JacobiWindow free_window(int N, double R) {
  JacobiWindow J;
  J.n_min = -N;
  J.n_max = N;
  J.a = Eigen::VectorXd::Ones(2 * N + 1);
  J.b = Eigen::VectorXd::Zero(2 * N + 1);
  J.R = R;
  return J;
}

AsymptoticMoments rho_plus_moments(const Measure& sigma, const Setting& setting, int K) {
  require_jacobi(setting);
  Series::Coeffs f = Series::Coeffs::Zero(K + 2);
  f[0] = 1.0;
  for (int k = 2; k < K + 2; ++k) f[k - 1] = moment_or_zero(sigma, -k - 1);
  AsymptoticMoments out;
  out.side = Side::plus;
  out.mu = moments_from_taylor(Series(1, f), K);
  // rho_+ exists for half-line data too; the boundary values need sigma_{-2} < 1.
  out.a0 = out.b0 = out.a_minus1 = std::numeric_limits<double>::quiet_NaN();
  if (moment_or_zero(sigma, -2) < 1.0) {
    const Boundary bc = boundary_coefficients(sigma);
    out.a0 = bc.a0;
    out.b0 = bc.b0;
    out.a_minus1 = bc.a_minus1;
  }
  check_unit_mass(out.mu);
  return out;
}

AsymptoticMoments rho_minus_moments(const Measure& sigma, const Setting& setting, int K) {
  require_jacobi(setting);
  const Boundary bc = boundary_coefficients(sigma);
  // Reflected data: kappa + sum_{k>=2} c sigma_{k-1} kappa^k.
  const double c = bc.a0 * bc.a0 / (bc.a_minus1 * bc.a_minus1);
  Series::Coeffs f = Series::Coeffs::Zero(K + 2);
  f[0] = 1.0;
  for (int k = 2; k < K + 2; ++k) f[k - 1] = c * moment_or_zero(sigma, k - 1);
  AsymptoticMoments out;
  out.side = Side::minus;
  out.mu = moments_from_taylor(Series(1, f), K);
  out.a0 = bc.a0;
  out.b0 = bc.b0;
  out.a_minus1 = bc.a_minus1;
  check_unit_mass(out.mu);
  return out;
}

Recurrence moments_to_recurrence(const Eigen::VectorXd& mu, int n, double R) {
  if (n < 1 || mu.size() < 2 * n) {
    throw Error(ErrorCode::InvalidArgument, "modified Chebyshev needs 2n moments");
  }
  const int m = 2 * n;
  // Auxiliary monic Chebyshev recurrence on [-R, R].
  Eigen::VectorXd aux_b(m);
  aux_b[0] = 0.0;
  for (int l = 1; l < m; ++l) aux_b[l] = l == 1 ? 0.5 * R * R : 0.25 * R * R;

  // Modified moments nu_l = int pi_l d(mu) from the power coefficients.
  Eigen::VectorXd nu(m);
  Eigen::VectorXd prev = Eigen::VectorXd::Zero(m), cur = Eigen::VectorXd::Zero(m);
  cur[0] = 1.0;
  for (int l = 0; l < m; ++l) {
    nu[l] = cur.dot(mu.head(m));
    Eigen::VectorXd next = Eigen::VectorXd::Zero(m);
    for (int j = 0; j + 1 < m; ++j) next[j + 1] = cur[j];
    next -= aux_b[l] * prev;
    prev = cur;
    cur = next;
  }

  Recurrence rec{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  Eigen::MatrixXd sig = Eigen::MatrixXd::Zero(n + 1, m + 1);  // row k+1 holds sigma_{k,.}
  for (int l = 0; l < m; ++l) sig(1, l) = nu[l];
  rec.alpha[0] = nu[1] / nu[0];
  rec.beta[0] = nu[0];
  for (int k = 1; k < n; ++k) {
    for (int l = k; l < m - k; ++l) {
      const double t1 = sig(k, l + 1);
      const double t2 = rec.alpha[k - 1] * sig(k, l);
      const double t3 = rec.beta[k - 1] * sig(k - 1, l);
      const double t4 = aux_b[l] * sig(k, l - 1);
      sig(k + 1, l) = t1 - t2 - t3 + t4;
      if (l == k) {
        const double scale = std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4);
        if (!(sig(k + 1, k) > 1e-10 * scale)) {
          throw Error(ErrorCode::HankelBreakdown, "moment matrix is not positive definite")
              .with_index(k + 1);
        }
      }
    }
    rec.alpha[k] = sig(k + 1, k + 1) / sig(k + 1, k) - sig(k, k) / sig(k, k - 1);
    rec.beta[k] = sig(k + 1, k) / sig(k, k - 1);
  }
  return rec;
}

Recurrence moments_to_recurrence(const AsymptoticMoments& m, int n, double R) {
  return moments_to_recurrence(m.mu, n, R);
}

Recurrence hankel_recurrence(const Eigen::VectorXd& mu, int n) {
  if (n < 1 || mu.size() < 2 * n + 1) {
    throw Error(ErrorCode::InvalidArgument, "Hankel recurrence needs 2n + 1 moments");
  }
  Eigen::MatrixXd H(n + 1, n + 1);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) H(i, j) = mu[i + j];
  // Upper Cholesky factor H = U^T U, pivot by pivot to report the failing one.
  Eigen::MatrixXd U = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) {
    const double d = H(i, i) - U.col(i).head(i).squaredNorm();
    if (!(d > 1e-14 * std::abs(H(i, i)))) {
      throw Error(ErrorCode::HankelBreakdown, "Hankel matrix is not positive definite")
          .with_index(i + 1);
    }
    U(i, i) = std::sqrt(d);
    for (int j = i + 1; j <= n; ++j) {
      U(i, j) = (H(i, j) - U.col(i).head(i).dot(U.col(j).head(i))) / U(i, i);
    }
  }
  Recurrence rec{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (int j = 0; j < n; ++j) {
    rec.alpha[j] = U(j, j + 1) / U(j, j) - (j > 0 ? U(j - 1, j) / U(j - 1, j - 1) : 0.0);
    rec.beta[j] = j == 0 ? mu[0] : std::pow(U(j, j) / U(j - 1, j - 1), 2);
  }
  return rec;
}

DiscreteMeasure spectral_measure(const Measure& sigma, const Setting& setting, Side side) {
  require_jacobi(setting);
  const double sm2 = moment_or_zero(sigma, -2);
  double c = 1.0;
  if (side == Side::minus) {
    const Boundary bc = boundary_coefficients(sigma);
    c = bc.a0 * bc.a0 / (bc.a_minus1 * bc.a_minus1);
  }

  std::vector<double> nodes, weights;
  auto push = [&](double x, double w) {
    if (w > 0.0) {
      nodes.push_back(x);
      weights.push_back(w);
    }
  };

  // Absolutely continuous part, x = -2 cos(theta), on panels graded
  // geometrically towards both band edges.
  constexpr int kLevels = 40;
  constexpr int kPanelNodes = 16;
  std::vector<double> breaks = {0.0};
  for (int k = kLevels; k >= 1; --k) breaks.push_back(0.5 * std::numbers::pi * std::ldexp(1.0, -k));
  breaks.push_back(0.5 * std::numbers::pi);
  for (int k = 1; k <= kLevels; ++k)
    breaks.push_back(std::numbers::pi - 0.5 * std::numbers::pi * std::ldexp(1.0, -k));
  breaks.push_back(std::numbers::pi);
  const GaussRule& rule = gauss_legendre(kPanelNodes);
  // Wide panels are split so that trigonometric polynomials of degree ~200
  // stay resolved.
  constexpr double kMaxWidth = std::numbers::pi / 96.0;
  std::vector<double> fine = {0.0};
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const int parts = static_cast<int>(std::ceil((breaks[p + 1] - breaks[p]) / kMaxWidth));
    for (int q = 1; q <= parts; ++q) fine.push_back(breaks[p] + (breaks[p + 1] - breaks[p]) * q / parts);
  }
  for (std::size_t p = 0; p + 1 < fine.size(); ++p) {
    const double lo = fine[p], hi = fine[p + 1];
    for (int i = 0; i < kPanelNodes; ++i) {
      const double theta = 0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.nodes[i];
      const double integral =
          sigma.integrate([&](double t) { return 1.0 / circle_distance_sq(t, theta); });
      const double s = std::sin(theta);
      const double density = 2.0 * s * s / std::numbers::pi * c * (1.0 - sm2 + integral);
      push(-2.0 * std::cos(theta), 0.5 * (hi - lo) * rule.weights[i] * density);
    }
  }

  // Point masses at phi(t) for the part of sigma inside (plus) or outside
  // (minus) the unit circle.
  auto inside = [&](double t) { return side == Side::plus ? std::abs(t) < 1.0 : std::abs(t) > 1.0; };
  auto mass_factor = [&](double t) {
    return side == Side::plus ? 1.0 / (t * t) - 1.0 : c * (1.0 - 1.0 / (t * t));
  };
  for (const Atom& at : sigma.atoms) {
    if (inside(at.t)) push(-(at.t + 1.0 / at.t), at.w * mass_factor(at.t));
  }
  const GaussRule& prule = gauss_legendre(32);
  for (const Piece& piece : sigma.pieces) {
    double lo = piece.a, hi = piece.b;
    if (side == Side::plus) {
      lo = std::max(lo, -1.0);
      hi = std::min(hi, 1.0);
    } else if (lo > -1.0 && hi < 1.0) {
      continue;
    } else if (lo < -1.0 && hi > 1.0) {
      throw Error(ErrorCode::SupportViolation, "density piece straddles both band edges");
    } else if (hi <= 1.0) {
      hi = std::min(hi, -1.0);
    } else {
      lo = std::max(lo, 1.0);
    }
    if (!(lo < hi)) continue;
    constexpr int kPanels = 8;
    for (int q = 0; q < kPanels; ++q) {
      const double pl = lo + (hi - lo) * q / kPanels, ph = lo + (hi - lo) * (q + 1) / kPanels;
      for (int i = 0; i < 32; ++i) {
        const double t = 0.5 * (pl + ph) + 0.5 * (ph - pl) * prule.nodes[i];
        push(-(t + 1.0 / t), 0.5 * (ph - pl) * prule.weights[i] * piece.density(t) * mass_factor(t));
      }
    }
  }

  DiscreteMeasure d{Eigen::Map<Eigen::VectorXd>(nodes.data(), static_cast<Eigen::Index>(nodes.size())),
                    Eigen::Map<Eigen::VectorXd>(weights.data(), static_cast<Eigen::Index>(weights.size()))};
  const double mass = d.weights.sum();
  if (std::abs(mass - 1.0) > 1e-9) {
    throw Error(ErrorCode::MomentMismatch, "discretized spectral measure does not have unit mass")
        .with_location(mass);
  }
  return d;
}

Recurrence lanczos(const DiscreteMeasure& d, int n) {
  const Eigen::Index M = d.nodes.size();
  if (n < 1 || n > M) throw Error(ErrorCode::InvalidArgument, "lanczos needs 1 <= n <= #nodes");
  Eigen::VectorXd p0 = d.nodes;
  Eigen::VectorXd p1 = Eigen::VectorXd::Zero(M);
  p1[0] = d.weights[0];
  for (Eigen::Index k = 0; k + 1 < M; ++k) {
    double pn = d.weights[k + 1];
    double gam = 1.0, sig = 0.0, t = 0.0;
    const double xlam = d.nodes[k + 1];
    for (Eigen::Index l = 0; l <= k + 1; ++l) {
      const double rho = p1[l] + pn;
      const double tmp = gam * rho;
      const double tsig = sig;
      if (rho <= 0.0) {
        gam = 1.0;
        sig = 0.0;
      } else {
        gam = p1[l] / rho;
        sig = pn / rho;
      }
      const double tk = sig * (p0[l] - xlam) - gam * t;
      p0[l] -= tk - t;
      t = tk;
      pn = sig <= 0.0 ? tsig * p1[l] : t * t / sig;
      p1[l] = tmp;
    }
  }
  return Recurrence{p0.head(n), p1.head(n)};
}

JacobiWindow reconstruct(const Measure& sigma_in, const Setting& setting, int N) {
  require_jacobi(setting);
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "window size N must be positive");
  const Measure sigma = validate(sigma_in, setting);
  const AdmissibilityReport adm = admissible_discrete(sigma, setting);
  if (!adm.passed) {
    throw Error(ErrorCode::AdmissibilityRequired, "sigma violates the boundary positivity condition")
        .with_location(adm.argmin);
  }
  const AsymptoticMoments minus_m = rho_minus_moments(sigma, setting, 8);
  const Recurrence plus = lanczos(spectral_measure(sigma, setting, Side::plus), N + 1);
  const Recurrence minus = lanczos(spectral_measure(sigma, setting, Side::minus), N + 1);

  // Low-order cross-check against the series moments.
  constexpr int kCheck = 4;
  const AsymptoticMoments plus_m = rho_plus_moments(sigma, setting, 2 * kCheck);
  for (const auto& [rec, mom] : {std::pair{&plus, &plus_m}, std::pair{&minus, &minus_m}}) {
    const Recurrence ref = moments_to_recurrence(*mom, kCheck, setting.R);
    for (int k = 0; k < kCheck; ++k) {
      const double da = std::abs(ref.alpha[k] - rec->alpha[k]);
      const double db = std::abs(ref.beta[k] - rec->beta[k]);
      if (da > 1e-6 * (1.0 + std::abs(ref.alpha[k])) || db > 1e-6 * (1.0 + ref.beta[k])) {
        throw Error(ErrorCode::MomentMismatch,
                    "series moments and discretized spectral measure disagree")
            .with_index(k);
      }
    }
  }

  JacobiWindow J;
  J.n_min = -N;
  J.n_max = N;
  J.R = setting.R;
  J.a.resize(2 * N + 1);
  J.b.resize(2 * N + 1);
  for (int n = -N; n <= N; ++n) {
    const int i = n + N;
    if (n >= 1) {
      J.a[i] = std::sqrt(plus.beta[n]);
      J.b[i] = plus.alpha[n - 1];
    } else if (n == 0) {
      J.a[i] = minus_m.a0;
      J.b[i] = minus_m.b0;
    } else {
      J.a[i] = n == -1 ? minus_m.a_minus1 : std::sqrt(minus.beta[-n - 1]);
      J.b[i] = minus.alpha[-n - 1];
    }
    if (!(J.a[i] >= 1.0 - 1e-9)) {
      throw Error(ErrorCode::NonConvergent, "reconstructed a_n fell below 1").with_index(n);
    }
  }
  return J;
}

cplx m_oracle(const JacobiWindow& J, cplx z, Side side, int pad) {
  // Decaying free solution ratio: r^2 - z r + 1 = 0 with |r| < 1.
  const cplx s = std::sqrt(z * z - 4.0);
  const cplx big = std::abs(z + s) >= std::abs(z - s) ? 0.5 * (z + s) : 0.5 * (z - s);
  const cplx r_free = 1.0 / big;
  if (side == Side::plus) {
    cplx r = r_free;
    for (int n = J.n_max + pad; n >= 1; --n) r = J.a_at(n - 1) / (z - J.b_at(n) - J.a_at(n) * r);
    return -r / J.a_at(0);
  }
  cplx q = r_free;
  for (int n = J.n_min - pad; n <= 0; ++n) q = J.a_at(n) / (z - J.b_at(n) - J.a_at(n - 1) * q);
  return 1.0 / (J.a_at(0) * q);
}

Prop311Report prop311_check(const JacobiWindow& J, double r, double floor) {
  bool all_free = true;
  for (Eigen::Index i = 0; i < J.a.size(); ++i) {
    if (std::abs(J.a[i] - 1.0) > 1e-9) all_free = false;
  }
  if (all_free) throw Error(ErrorCode::FreeOperator, "window is free; the ratio test does not apply");
  Prop311Report rep;
  rep.passed = true;
  rep.worst_margin = INFINITY;
  const double lo = r * r, hi = 1.0 / (r * r);
  int first = J.n_max + 1, last = J.n_min - 1;
  for (int n = J.n_min; n <= J.n_max; ++n) {
    if (J.a_at(n) * J.a_at(n) - 1.0 >= floor) {
      first = std::min(first, n);
      last = n;
    }
  }
  for (int n = J.n_min; n < J.n_max; ++n) {
    const double an = J.a_at(n), an1 = J.a_at(n + 1);
    if (n < first || n + 1 > last) {
      rep.ratios.push_back(NAN);
      ++rep.skipped;
      continue;
    }
    const double ratio = (an1 * an1 - 1.0) / (an * an - 1.0);
    rep.ratios.push_back(ratio);
    const bool ok = std::isfinite(ratio) && ratio > lo && ratio < hi;
    const double margin = ok ? std::min(std::log(ratio / lo), std::log(hi / ratio)) : -INFINITY;
    if (!ok) rep.passed = false;
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.worst_n = n;
    }
  }
  return rep;
}

std::pair<double, double> numerical_range(const JacobiWindow& J) {
  const Eigen::Index n = J.a.size();
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    T(i, i) = J.b[i];
    if (i + 1 < n) T(i, i + 1) = T(i + 1, i) = J.a[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

}  // namespace marchenko
