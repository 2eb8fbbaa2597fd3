#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "marchenko/jacobi.hpp"
#include "support.hpp"

using namespace marchenko;
using namespace marchenko::testing;

namespace {

const cplx I(0.0, 1.0);

std::vector<cplx> z_grid() {
  std::vector<cplx> zs;
  for (double re : {-3.0, -1.5, 0.0, 1.5, 3.0})
    for (double im : {0.5, 1.0, 2.0, 4.0, 8.0}) zs.emplace_back(re, im);
  return zs;
}

double oracle_error(const JacobiWindow& J, const Measure& sigma, const Setting& setting) {
  const FFunction F(sigma, setting);
  double worst = 0.0;
  for (cplx z : z_grid())
    for (Side side : {Side::plus, Side::minus})
      worst = std::max(worst, std::abs(m_oracle(J, z, side) - F.m(z, side)));
  return worst;
}

Measure soliton(double eps) { return atoms({{1.0, 1.0 - eps}}); }

Setting soliton_setting(double eps) { return Setting::jacobi(2.0 + 1.0 / eps); }

// Two atoms with t near +-1, weights small enough to stay admissible.
Measure random_two_atoms(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Measure m;
  for (int j = 0; j < 2; ++j) {
    const double t = std::exp(-0.1 + 0.2 * U(rng)) * (U(rng) < 0.5 ? -1.0 : 1.0);
    m.atoms.push_back({t, 0.002 + 0.018 * U(rng)});
  }
  return m;
}

Setting covering_setting(const Measure& m) {
  double R = 2.0;
  for (const Atom& a : m.atoms) R = std::max(R, std::abs(a.t) + 1.0 / std::abs(a.t));
  for (double E : boundary_roots(m)) R = std::max(R, std::abs(E));
  return Setting::jacobi(1.01 * R);
}

}  // namespace

TEST_CASE("free window and free reconstruction") {
  const JacobiWindow J = free_window(10);
  CHECK(J.n_min == -10);
  CHECK(J.n_max == 10);
  const JacobiWindow R = reconstruct(Measure{}, Setting::jacobi(2.0), 10);
  for (int n = -10; n <= 10; ++n) {
    CHECK(std::abs(R.a_at(n) - 1.0) <= 1e-9);
    CHECK(std::abs(R.b_at(n)) <= 1e-9);
  }
  CHECK(R.a_at(100) == 1.0);
  CHECK(R.b_at(-100) == 0.0);
}

TEST_CASE("rho_plus_moments") {
  const Setting jac = Setting::jacobi(2.0);
  const AsymptoticMoments free = rho_plus_moments(Measure{}, jac, 8);
  const double catalan[] = {1, 0, 1, 0, 2, 0, 5, 0, 14};
  for (int k = 0; k <= 8; ++k) CHECK(free.mu[k] == doctest::Approx(catalan[k]).epsilon(1e-14));

  // Quadrature of the closed-form density (1/2pi) sqrt((2 - x)/(2 + x)) with
  // x = -2 cos(theta), where it becomes (1 + cos(theta))/pi.
  const AsymptoticMoments d1 = rho_plus_moments(atoms({{1.0, 1.0}}), jac, 8);
  for (int k = 0; k <= 8; ++k) {
    const double mu = integrate_fixed(
        [&](double th) { return std::pow(-2.0 * std::cos(th), k) * (1.0 + std::cos(th)) / std::numbers::pi; },
        0.0, std::numbers::pi, 40);
    CHECK(d1.mu[k] == doctest::Approx(mu).epsilon(1e-12).scale(1.0));
  }
  CHECK(rho_plus_moments(soliton(0.25), soliton_setting(0.25), 6).mu[0] ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("rho_minus_moments") {
  const AsymptoticMoments free = rho_minus_moments(Measure{}, Setting::jacobi(2.0), 6);
  CHECK(free.a0 == 1.0);
  CHECK(free.b0 == 0.0);
  CHECK(free.a_minus1 == 1.0);
  CHECK(free.mu[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(free.mu[2] == doctest::Approx(1.0).epsilon(1e-14));

  const AsymptoticMoments s = rho_minus_moments(soliton(0.25), soliton_setting(0.25), 6);
  CHECK(s.a0 == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s.b0 == doctest::Approx(-3.0).epsilon(1e-15));
  CHECK(s.a_minus1 == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s.mu[0] == doctest::Approx(1.0).epsilon(1e-10));

  CHECK(code_of([] { rho_minus_moments(atoms({{1.0, 1.0}}), Setting::jacobi(2.0), 4); }) ==
        ErrorCode::InadmissibleSigma);
}

TEST_CASE("moments_to_recurrence") {
  Eigen::VectorXd catalan = Eigen::VectorXd::Zero(60);
  catalan[0] = 1.0;
  for (int k = 1; 2 * k < 60; ++k) catalan[2 * k] = catalan[2 * k - 2] * 2.0 * (2 * k - 1) / (k + 1);
  const Recurrence rec = moments_to_recurrence(catalan, 30, 2.0);
  for (int k = 0; k < 30; ++k) {
    CHECK(std::abs(rec.alpha[k]) <= 1e-9);
    CHECK(std::abs(rec.beta[k] - 1.0) <= 1e-9);
  }

  Eigen::VectorXd single(8);
  for (int k = 0; k < 8; ++k) single[k] = std::pow(0.7, k);
  try {
    moments_to_recurrence(single, 3, 2.0);
    FAIL("expected HankelBreakdown");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::HankelBreakdown);
    CHECK(e.index() == 2);
  }
}

TEST_CASE("hankel_recurrence agrees with the modified Chebyshev algorithm at low order") {
  const AsymptoticMoments m = rho_plus_moments(atoms({{0.9, 0.1}, {-1.1, 0.05}}), Setting::jacobi(2.5), 14);
  const Recurrence cheb = moments_to_recurrence(m, 6, 2.5);
  const Recurrence chol = hankel_recurrence(m.mu, 6);
  for (int k = 0; k < 6; ++k) {
    CHECK(cheb.alpha[k] == doctest::Approx(chol.alpha[k]).epsilon(1e-8).scale(1.0));
    CHECK(cheb.beta[k] == doctest::Approx(chol.beta[k]).epsilon(1e-8));
  }
}

TEST_CASE("lanczos reproduces the Legendre recurrence") {
  const GaussRule& g = gauss_legendre(40);
  const Recurrence rec = lanczos(DiscreteMeasure{g.nodes, g.weights}, 30);
  CHECK(rec.beta[0] == doctest::Approx(2.0).epsilon(1e-14));
  for (int k = 1; k < 30; ++k) {
    CHECK(std::abs(rec.alpha[k]) <= 1e-14);
    CHECK(rec.beta[k] == doctest::Approx(k * k / (4.0 * k * k - 1.0)).epsilon(1e-13));
  }
}

TEST_CASE("reconstruct the soliton") {
  for (double eps : {0.5, 0.25, 0.1}) {
    const JacobiWindow J = reconstruct(soliton(eps), soliton_setting(eps), 10);
    CHECK(J.a_at(0) == doctest::Approx(1.0 / std::sqrt(eps)).epsilon(1e-12));
    CHECK(oracle_error(J, soliton(eps), soliton_setting(eps)) <= 1e-6);
  }
  const JacobiWindow J = reconstruct(soliton(0.25), soliton_setting(0.25), 10);
  CHECK(J.a_at(-1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(J.b_at(0) == doctest::Approx(-3.0).epsilon(1e-12));
  const cplx m = m_value(soliton(0.25), soliton_setting(0.25), I, Side::plus);
  CHECK(std::abs(m_oracle(J, I, Side::plus) - m) <= 1e-6);
}

// Frozen after the oracle fixed the placement of the rho_- coefficients on
// negative sites. The window is reflection symmetric about the eigenvector
// peak: a_n = a_{-n-1}, b_n = b_{-n}.
TEST_CASE("index convention regression on the soliton") {
  const JacobiWindow J = reconstruct(soliton(0.25), soliton_setting(0.25), 10);
  const double a[] = {1.0001811211413396, 1.0041465278073081, 1.0897247358851696, 2.0,
                      2.0, 1.0897247358851696, 1.0041465278073081, 1.0001811211413396};
  const double b[] = {-7.5612460932811254e-05, -0.0017351069982634629, -0.039473684210526237,
                      -0.75, -3.0, -0.75, -0.039473684210526237, -0.0017351069982634629,
                      -7.5612460932811254e-05};
  for (int n = -4; n <= 3; ++n) CHECK(J.a_at(n) == doctest::Approx(a[n + 4]).epsilon(1e-10));
  for (int n = -4; n <= 4; ++n) CHECK(J.b_at(n) == doctest::Approx(b[n + 4]).epsilon(1e-10).scale(1e-6));

  // Moving the left half by one site breaks the oracle.
  JacobiWindow shifted = J;
  for (int n = J.n_min; n < -1; ++n) shifted.a[n - J.n_min] = J.a_at(n + 1);
  CHECK(oracle_error(shifted, soliton(0.25), soliton_setting(0.25)) > 1e-3);
}

TEST_CASE("reconstruct needs an admissible sigma") {
  CHECK(code_of([] { reconstruct(atoms({{1.0, 1.0}}), Setting::jacobi(2.0), 5); }) ==
        ErrorCode::SupportViolation);
  CHECK(code_of([] { reconstruct(atoms({{1.0, 1.0}}), Setting::jacobi(2.5), 5); }) ==
        ErrorCode::AdmissibilityRequired);
  CHECK(code_of([] { reconstruct(soliton(0.25), Setting::jacobi(5.0), 5); }) ==
        ErrorCode::AdmissibilityRequired);
}

TEST_CASE("m_oracle on the free window") {
  const JacobiWindow J = free_window(5);
  CHECK(std::abs(m_oracle(J, 2.0 * I, Side::plus) - (std::sqrt(2.0) - 1.0) * I) <= 1e-14);
  CHECK(std::abs(m_oracle(J, 2.0 * I, Side::minus) - (std::sqrt(2.0) + 1.0) * I) <= 1e-14);
  CHECK(std::abs(m_oracle(J, cplx(0.3, 0.1), Side::plus) -
                 m_value(Measure{}, Setting::jacobi(2.0), cplx(0.3, 0.1), Side::plus)) <= 1e-12);
}

TEST_CASE("prop311_check") {
  const JacobiWindow J = reconstruct(soliton(0.25), Setting::jacobi(5.01), 20);
  const Prop311Report own = prop311_check(J, Setting::jacobi(5.01).r);
  CHECK(own.passed);
  CHECK(own.worst_margin > 0.0);
  CHECK(own.skipped > 0);
  // At r from R = 5 the tail ratios tend to r^2 itself, so only the core
  // where a_n^2 - 1 carries enough digits is decidable.
  const Prop311Report edge = prop311_check(J, Setting::jacobi(5.0).r, 1e-5);
  CHECK(edge.passed);
  CHECK(edge.worst_margin > 0.0);

  CHECK(code_of([] { prop311_check(free_window(5), 0.5); }) == ErrorCode::FreeOperator);

  JacobiWindow edited = free_window(3);
  edited.a.setConstant(2.0);
  edited.a[1 - edited.n_min] = 1.0;
  CHECK_FALSE(prop311_check(edited, 0.5).passed);
}

TEST_CASE("numerical_range of the free window lies in [-2, 2]") {
  const auto [lo, hi] = numerical_range(free_window(20));
  CHECK(lo >= -2.0);
  CHECK(hi <= 2.0);
  CHECK(hi > 1.9);
}

TEST_CASE("reconstruct with a density piece") {
  Measure sigma = atoms({{-0.6, 0.05}});
  sigma.pieces.push_back(piece(0.6, 0.9, {0.2, 0.05}));
  const Setting setting = Setting::jacobi(2.6);
  double prev = INFINITY;
  for (int N : {10, 15, 20, 25, 30}) {
    const double err = oracle_error(reconstruct(sigma, setting, N), sigma, setting);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev <= 1e-6);
}

TEST_CASE("property: random two-atom reconstructions") {
  std::mt19937_64 rng(2024);
  int tested = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const Measure sigma = random_two_atoms(rng);
    const Setting setting = covering_setting(sigma);
    if (!admissible_discrete(sigma, setting).passed) continue;
    ++tested;
    const JacobiWindow J = reconstruct(sigma, setting, 20);
    const double sm2 = moment(sigma, -2), s0 = moment(sigma, 0);
    const double r2 = setting.r * setting.r;
    CHECK(prop311_check(J, setting.r).passed);
    CHECK(std::abs(J.a_at(0) * J.a_at(0) - 1.0 / (1.0 - sm2)) <= 1e-12);
    CHECK(std::abs(s0 - (J.a_at(-1) * J.a_at(-1) - 1.0) / (J.a_at(0) * J.a_at(0))) <= 1e-12);
    CHECK(1.0 - sm2 + s0 > 0.0);
    CHECK(r2 * s0 < sm2);
    CHECK(sm2 < s0 / r2);
    for (int n = J.n_min; n <= J.n_max; ++n) CHECK(J.a_at(n) > 1.0);
  }
  CHECK(tested >= 30);
}
