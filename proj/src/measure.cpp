#include "marchenko/measure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace marchenko {

double Piece::density(double t) const {
  const double x = (2.0 * t - a - b) / (b - a);
  double b1 = 0.0, b2 = 0.0;
  for (Eigen::Index k = cheb.size() - 1; k >= 1; --k) {
    const double b0 = 2.0 * x * b1 - b2 + cheb[k];
    b2 = b1;
    b1 = b0;
  }
  return (cheb.size() > 0 ? cheb[0] : 0.0) + x * b1 - b2;
}

std::optional<SupportInfo> support_bounds(const Measure& mu) {
  if (mu.empty()) return std::nullopt;
  SupportInfo s{INFINITY, -INFINITY, INFINITY};
  for (const Atom& at : mu.atoms) {
    s.min = std::min(s.min, at.t);
    s.max = std::max(s.max, at.t);
    s.distance_to_zero = std::min(s.distance_to_zero, std::abs(at.t));
  }
  for (const Piece& p : mu.pieces) {
    s.min = std::min(s.min, p.a);
    s.max = std::max(s.max, p.b);
    const double d = (p.a <= 0.0 && p.b >= 0.0) ? 0.0 : std::min(std::abs(p.a), std::abs(p.b));
    s.distance_to_zero = std::min(s.distance_to_zero, d);
  }
  return s;
}

namespace {

bool inside_allowed(double lo, double hi, const Setting& setting) {
  const double margin = 1e-9 * setting.R;
  if (setting.kind == SettingKind::schrodinger) {
    return lo > -setting.R + margin && hi < setting.R - margin;
  }
  const double r = setting.r, inv = 1.0 / setting.r;
  const bool right = lo > r + margin && hi < inv - margin;
  const bool left = lo > -inv + margin && hi < -r - margin;
  return right || left;
}

std::string describe(const Atom& at) {
  return "atom (t=" + std::to_string(at.t) + ", w=" + std::to_string(at.w) + ")";
}

std::string describe(const Piece& p) {
  return "piece [" + std::to_string(p.a) + ", " + std::to_string(p.b) + "]";
}

}  // namespace

Measure validate(Measure mu, const Setting& setting) {
  for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
    const Atom& at = mu.atoms[i];
    if (!std::isfinite(at.t) || !std::isfinite(at.w)) {
      throw Error(ErrorCode::InvalidArgument, describe(at) + " is not finite")
          .with_index(static_cast<long>(i));
    }
    if (!(at.w > 0.0)) {
      throw Error(ErrorCode::NegativeWeight, describe(at) + " has nonpositive weight")
          .with_index(static_cast<long>(i))
          .with_location(at.t);
    }
    if (!inside_allowed(at.t, at.t, setting)) {
      throw Error(ErrorCode::SupportViolation, describe(at) + " lies outside the allowed support")
          .with_index(static_cast<long>(i))
          .with_location(at.t);
    }
  }
  for (std::size_t i = 0; i < mu.pieces.size(); ++i) {
    const Piece& p = mu.pieces[i];
    if (!(p.a < p.b) || !std::isfinite(p.a) || !std::isfinite(p.b) || p.cheb.size() == 0) {
      throw Error(ErrorCode::InvalidArgument, describe(p) + " is degenerate")
          .with_index(static_cast<long>(i));
    }
    if (!inside_allowed(p.a, p.b, setting)) {
      throw Error(ErrorCode::SupportViolation, describe(p) + " lies outside the allowed support")
          .with_index(static_cast<long>(i))
          .with_location(p.a);
    }
    const int samples = std::max<int>(32, 4 * static_cast<int>(p.cheb.size()));
    for (int k = 0; k < samples; ++k) {
      const double x = std::cos(M_PI * (k + 0.5) / samples);
      const double t = 0.5 * (p.a + p.b) + 0.5 * (p.b - p.a) * x;
      if (p.density(t) < 0.0) {
        throw Error(ErrorCode::NegativeWeight, describe(p) + " has a negative density sample")
            .with_index(static_cast<long>(i))
            .with_location(t);
      }
    }
  }
  std::vector<Piece> sorted = mu.pieces;
  std::sort(sorted.begin(), sorted.end(), [](const Piece& x, const Piece& y) { return x.a < y.a; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].a < sorted[i - 1].b) {
      throw Error(ErrorCode::SupportViolation,
                  describe(sorted[i]) + " overlaps " + describe(sorted[i - 1]))
          .with_location(sorted[i].a);
    }
  }
  for (const Atom& at : mu.atoms) {
    for (const Piece& p : mu.pieces) {
      if (at.t >= p.a && at.t <= p.b) {
        throw Error(ErrorCode::SupportViolation, describe(at) + " lies on " + describe(p))
            .with_location(at.t);
      }
    }
  }
  return mu;
}

double total_mass(const Measure& mu) { return moment(mu, 0); }

double moment(const Measure& mu, int n) {
  if (n < 0) {
    const auto s = support_bounds(mu);
    if (s && s->distance_to_zero == 0.0) {
      throw Error(ErrorCode::NegativeMomentAtZero,
                  "negative moment of a measure whose support reaches 0")
          .with_index(n);
    }
  }
  double acc = 0.0;
  for (const Atom& at : mu.atoms) acc += at.w * std::pow(at.t, n);
  for (const Piece& p : mu.pieces) {
    auto f = [&](double t) { return p.density(t) * std::pow(t, n); };
    if (n >= 0) {
      // Exact for polynomial density times t^n.
      const int points = (n + static_cast<int>(p.cheb.size())) / 2 + 8;
      acc += integrate_fixed(f, p.a, p.b, points);
    } else {
      acc += integrate_adaptive(f, p.a, p.b);
    }
  }
  return acc;
}

cplx cauchy(const Measure& mu, cplx lam) {
  if (lam.imag() == 0.0) {
    for (const Atom& at : mu.atoms) {
      if (at.t == lam.real()) {
        throw Error(ErrorCode::OnSupport, "Cauchy transform evaluated at an atom")
            .with_location(at.t);
      }
    }
    for (const Piece& p : mu.pieces) {
      if (lam.real() >= p.a && lam.real() <= p.b) {
        throw Error(ErrorCode::OnSupport, "Cauchy transform evaluated on a density piece")
            .with_location(lam.real());
      }
    }
  }
  return mu.integrate([&](double t) { return 1.0 / (t - lam); });
}

}  // namespace marchenko
