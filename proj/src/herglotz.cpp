#include "marchenko/herglotz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace marchenko {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_off_support(const Measure& sigma, cplx lam) {
  if (lam.imag() != 0.0) return;
  const double x = lam.real();
  for (const Atom& at : sigma.atoms) {
    if (at.t == x) throw Error(ErrorCode::OnSupport, "evaluation point on an atom").with_location(x);
  }
  for (const Piece& p : sigma.pieces) {
    if (x >= p.a && x <= p.b) {
      throw Error(ErrorCode::OnSupport, "evaluation point on a density piece").with_location(x);
    }
  }
}

double negative_moment(const Measure& sigma, int n) {
  return sigma.empty() ? 0.0 : moment(sigma, n);
}

// Integral of 1/((t - c s)(t - c/s)) against sigma, with c = +-1. A zero
// denominator at an atom is reached from the side where the product is
// negative, hence the -inf.
double boundary_integral(const Measure& sigma, double s, double c) {
  double acc = 0.0;
  for (const Atom& at : sigma.atoms) {
    const double den = (at.t - c * s) * (at.t - c / s);
    if (den == 0.0) return -kInf;
    acc += at.w / den;
  }
  for (const Piece& p : sigma.pieces) {
    acc += integrate_adaptive(
        [&](double t) { return p.density(t) / ((t - c * s) * (t - c / s)); }, p.a, p.b);
  }
  return acc;
}

// Branch of log(t - z) continuous in t for z in the closed upper half plane.
cplx log_shift(double t, cplx z) {
  const double y = z.imag() > 0.0 ? -z.imag() : -0.0;
  return {std::log(std::abs(cplx(t - z.real(), y))), std::atan2(y, t - z.real())};
}

cplx krein_primitive(double t, cplx z) {
  if (t == kInf) return 0.0;
  if (t == -kInf) return cplx(0.0, -std::numbers::pi);
  return log_shift(t, z) - 0.5 * std::log1p(t * t);
}

}  // namespace

cplx f_discrete(const Measure& sigma, cplx lam) {
  require_off_support(sigma, lam);
  const double sm1 = negative_moment(sigma, -1), sm2 = negative_moment(sigma, -2);
  return -sm1 + (1.0 - sm2) * lam + cauchy(sigma, lam);
}

cplx f_continuous(const Measure& sigma, cplx lam) {
  require_off_support(sigma, lam);
  return lam + cauchy(sigma, lam);
}

cplx phi(const Setting& setting, cplx lam) {
  if (setting.kind == SettingKind::jacobi) return -lam - 1.0 / lam;
  return -lam * lam;
}

cplx phi_inv(const Setting& setting, cplx z, Branch branch) {
  if (z.imag() == 0.0) {
    throw Error(ErrorCode::BranchAmbiguity, "phi_inv needs a nonreal argument")
        .with_location(z.real());
  }
  if (setting.kind == SettingKind::jacobi) {
    const cplx s = std::sqrt(z * z - 4.0);
    const cplx r1 = 0.5 * (-z + s), r2 = 0.5 * (-z - s);
    const cplx big = std::abs(r1) >= std::abs(r2) ? r1 : r2;
    return branch == Branch::upper ? 1.0 / big : big;
  }
  const cplx s = std::sqrt(-z);
  return branch == Branch::upper ? -s : s;
}

cplx phi_inv_boundary(const Setting& setting, double x) {
  if (setting.kind == SettingKind::jacobi) {
    if (std::abs(x) < 2.0) return {-0.5 * x, 0.5 * std::sqrt(4.0 - x * x)};
    const double big = 0.5 * (-x - std::copysign(std::sqrt(x * x - 4.0), x));
    return 1.0 / big;
  }
  if (x > 0.0) return {0.0, std::sqrt(x)};
  return -std::sqrt(-x);
}

FFunction::FFunction(Measure sigma, const Setting& setting)
    : sigma_(std::move(sigma)), setting_(setting) {
  if (setting_.kind == SettingKind::jacobi) {
    sigma_m1_ = negative_moment(sigma_, -1);
    sigma_m2_ = negative_moment(sigma_, -2);
  }
}

cplx FFunction::operator()(cplx lam) const {
  require_off_support(sigma_, lam);
  const cplx c = cauchy(sigma_, lam);
  if (setting_.kind == SettingKind::jacobi) return -sigma_m1_ + (1.0 - sigma_m2_) * lam + c;
  return lam + c;
}

cplx FFunction::m(cplx z, Side side) const {
  const cplx up = z.imag() == 0.0 ? phi_inv_boundary(setting_, z.real())
                                  : phi_inv(setting_, z, Branch::upper);
  if (side == Side::plus) return (*this)(up);
  const cplx low = setting_.kind == SettingKind::jacobi ? 1.0 / up : -up;
  return -std::conj((*this)(std::conj(low)));
}

cplx FFunction::h(cplx lam) const {
  if (setting_.kind == SettingKind::jacobi) {
    if (lam == 0.0) throw Error(ErrorCode::InvalidArgument, "h is singular at lambda = 0");
    const cplx inv = 1.0 / lam;
    require_off_support(sigma_, lam);
    require_off_support(sigma_, inv);
    const cplx integral =
        sigma_.integrate([&](double t) { return 1.0 / ((t - lam) * (t - inv)); });
    return (lam - inv) * (1.0 - sigma_m2_ + integral);
  }
  require_off_support(sigma_, lam);
  require_off_support(sigma_, -lam);
  const cplx integral = sigma_.integrate([&](double t) { return 1.0 / (t * t - lam * lam); });
  return 2.0 * lam * (1.0 + integral);
}

cplx m_value(const Measure& sigma, const Setting& setting, cplx z, Side side) {
  return FFunction(sigma, setting).m(z, side);
}

cplx h_fn(const Measure& sigma, const Setting& setting, cplx lam) {
  return FFunction(sigma, setting).h(lam);
}

double boundary_function(const Measure& sigma, double E) {
  if (!(std::abs(E) > 2.0)) {
    throw Error(ErrorCode::InvalidArgument, "boundary function needs |E| > 2").with_location(E);
  }
  // E = -c (s + 1/s) with s in (0, 1).
  const double c = E < 0.0 ? 1.0 : -1.0;
  const double a = std::abs(E);
  const double s = 2.0 / (a + std::sqrt(a * a - 4.0));
  return 1.0 - negative_moment(sigma, -2) + boundary_integral(sigma, s, c);
}

AdmissibilityReport admissible_discrete(const Measure& sigma, const Setting& setting, int grid) {
  if (setting.kind != SettingKind::jacobi) {
    throw Error(ErrorCode::InvalidArgument, "admissible_discrete needs the jacobi setting");
  }
  AdmissibilityReport report;
  report.heuristic = true;
  report.min_value = kInf;
  const double base = 1.0 - negative_moment(sigma, -2);
  const double r = setting.r;
  auto value = [&](double s, double c) { return base + boundary_integral(sigma, s, c); };
  auto energy = [](double s, double c) { return -c * (s + 1.0 / s); };

  for (double c : {1.0, -1.0}) {
    double ray_min = kInf;
    int ray_arg = 1;
    for (int k = 1; k <= grid; ++k) {
      const double s = k == grid ? r : r * k / grid;
      const double v = value(s, c);
      report.samples.push_back({energy(s, c), v});
      if (v < ray_min) {
        ray_min = v;
        ray_arg = k;
      }
    }
    double best_s = ray_arg == grid ? r : r * ray_arg / grid;
    if (std::isfinite(ray_min)) {
      // Golden-section refinement between the neighbours of the grid minimum.
      double lo = r * (ray_arg - 1) / grid, hi = std::min(r, r * (ray_arg + 1) / grid);
      lo = std::max(lo, 1e-3 * r / grid);
      const double g = 0.5 * (std::sqrt(5.0) - 1.0);
      double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
      double f1 = value(x1, c), f2 = value(x2, c);
      for (int it = 0; it < 80 && hi - lo > 1e-15 * r; ++it) {
        if (f1 < f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - g * (hi - lo);
          f1 = value(x1, c);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + g * (hi - lo);
          f2 = value(x2, c);
        }
      }
      if (f1 < ray_min) {
        ray_min = f1;
        best_s = x1;
      }
      if (f2 < ray_min) {
        ray_min = f2;
        best_s = x2;
      }
    }
    if (ray_min < report.min_value) {
      report.min_value = ray_min;
      report.argmin = energy(best_s, c);
    }
  }
  report.passed = report.min_value > 1e-12;
  return report;
}

AdmissibilityReport admissible_continuous(const Measure& sigma, const Setting& setting) {
  if (setting.kind != SettingKind::schrodinger) {
    throw Error(ErrorCode::InvalidArgument, "admissible_continuous needs the schrodinger setting");
  }
  const double R2 = setting.R * setting.R;
  const double v = 1.0 + sigma.integrate([&](double t) { return 1.0 / (t * t - R2); });
  AdmissibilityReport report;
  report.min_value = v;
  report.argmin = setting.R;
  report.samples.push_back({setting.R, v});
  report.passed = v >= -1e-12;
  return report;
}

std::vector<double> boundary_roots(const Measure& sigma) {
  const double base = 1.0 - negative_moment(sigma, -2);
  std::vector<double> roots;
  constexpr int kGrid = 20000;

  for (double c : {1.0, -1.0}) {
    // The integrand is singular where c s or c/s meets a density piece.
    auto blocked = [&](double s) {
      for (const Piece& p : sigma.pieces) {
        for (double t : {c * s, c / s}) {
          if (t >= p.a && t <= p.b) return true;
        }
      }
      return false;
    };
    auto value = [&](double s) { return base + boundary_integral(sigma, s, c); };
    double s_prev = 1.0 / kGrid;
    double v_prev = value(s_prev);
    for (int k = 2; k < kGrid; ++k) {
      const double s = static_cast<double>(k) / kGrid;
      const double v = value(s);
      const bool usable = !blocked(s) && !blocked(s_prev);
      if (usable && std::isfinite(v) && std::isfinite(v_prev) && (v_prev < 0.0) != (v < 0.0)) {
        double lo = s_prev, hi = s, flo = v_prev;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (mid <= lo || mid >= hi) break;
          const double fm = value(mid);
          if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        const double root = 0.5 * (lo + hi);
        if (std::abs(value(root)) < 1e-6) roots.push_back(-c * (root + 1.0 / root));
      }
      s_prev = s;
      v_prev = v;
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

cplx herglotz_exp(std::span<const KreinStep> xi, double C, cplx z) {
  if (!(C > 0.0)) throw Error(ErrorCode::InvalidArgument, "herglotz_exp needs C > 0");
  cplx exponent = 0.0;
  for (const KreinStep& step : xi) {
    if (step.value == 0.0) continue;
    if (!(step.a < step.b)) throw Error(ErrorCode::InvalidArgument, "Krein step with a >= b");
    exponent += step.value * (krein_primitive(step.b, z) - krein_primitive(step.a, z));
  }
  return C * std::exp(exponent);
}

DensityEstimate stieltjes_density(const FFunction& F, Side side, double x,
                                  std::span<const double> etas, double tol) {
  const std::size_t n = etas.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "empty eta schedule");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(etas[i] > 0.0) || (i > 0 && !(etas[i] < etas[i - 1]))) {
      throw Error(ErrorCode::InvalidArgument, "eta schedule must be positive and decreasing");
    }
  }
  // Neville table for the polynomial in eta through the samples, at eta = 0.
  std::vector<std::vector<double>> T(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    T[i][0] = F.m(cplx(x, etas[i]), side).imag() / std::numbers::pi;
    for (std::size_t j = 1; j <= i; ++j) {
      T[i][j] = (etas[i] * T[i - 1][j - 1] - etas[i - j] * T[i][j - 1]) / (etas[i] - etas[i - j]);
    }
  }
  DensityEstimate est;
  est.value = T[n - 1][n - 1];
  est.error = n > 1 ? std::abs(T[n - 1][n - 1] - T[n - 1][n - 2]) : INFINITY;
  if (n > 1 && est.error > 100.0 * tol) {
    throw Error(ErrorCode::NonConvergent, "Stieltjes extrapolation did not settle")
        .with_location(x);
  }
  return est;
}

DensityEstimate stieltjes_density(const Measure& sigma, const Setting& setting, Side side,
                                  double x, std::span<const double> etas, double tol) {
  return stieltjes_density(FFunction(sigma, setting), side, x, etas, tol);
}

double reflectionless_residual(const Measure& sigma, const Setting& setting,
                               std::span<const double> grid, double eta) {
  const FFunction F(sigma, setting);
  double worst = 0.0;
  for (double x : grid) {
    const cplx z(x, eta);
    worst = std::max(worst, std::abs(F.m(z, Side::plus) + std::conj(F.m(z, Side::minus))));
  }
  return worst;
}

}  // namespace marchenko
