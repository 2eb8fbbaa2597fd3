#include <doctest.h>

#include <random>

#include "marchenko/measure.hpp"
#include "support.hpp"

using namespace marchenko;
using namespace marchenko::testing;

TEST_CASE("gauss rules integrate polynomials exactly") {
  for (int n : {1, 2, 5, 20, 64}) {
    const GaussRule& g = gauss_legendre(n);
    CHECK(g.weights.sum() == doctest::Approx(2.0).epsilon(1e-14));
    for (int k = 0; k < 2 * n; k += 2) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += g.weights[i] * std::pow(g.nodes[i], k);
      CHECK(s == doctest::Approx(2.0 / (k + 1)).epsilon(1e-13));
    }
  }
}

TEST_CASE("adaptive quadrature handles a near-singular integrand") {
  const double eps = 1e-6;
  const double v = integrate_adaptive([&](double t) { return eps / (t * t + eps * eps); }, -1.0, 1.0);
  CHECK(v == doctest::Approx(2.0 * std::atan(1.0 / eps)).epsilon(1e-11));
}

TEST_CASE("validate") {
  CHECK_NOTHROW(validate(Measure{}, Setting::jacobi(2.0)));
  const Setting s4 = Setting::jacobi(4.0);
  CHECK(s4.r == doctest::Approx(2.0 - std::sqrt(3.0)).epsilon(1e-15));
  CHECK(s4.r + 1.0 / s4.r == doctest::Approx(4.0).epsilon(1e-15));
  CHECK_NOTHROW(validate(atoms({{1.0, 0.75}}), s4));
  CHECK(code_of([] { validate(atoms({{2.5, 1.0}}), Setting::schrodinger(2.0)); }) ==
        ErrorCode::SupportViolation);
  CHECK(code_of([] { validate(atoms({{0.5, -1.0}}), Setting::schrodinger(2.0)); }) ==
        ErrorCode::NegativeWeight);
  CHECK(code_of([] { Setting::jacobi(1.5); }) == ErrorCode::BadR);
  CHECK(code_of([] { Setting::schrodinger(0.0); }) == ErrorCode::BadR);
  // Endpoint atoms are excluded.
  CHECK(code_of([&] { validate(atoms({{s4.r, 1.0}}), s4); }) == ErrorCode::SupportViolation);
  CHECK(code_of([] { validate(atoms({{2.0, 1.0}}), Setting::schrodinger(2.0)); }) ==
        ErrorCode::SupportViolation);
  // Pieces must stay inside one component and avoid each other and atoms.
  CHECK(code_of([&] { validate(Measure{{}, {piece(-1.0, 1.0, {1.0})}}, s4); }) ==
        ErrorCode::SupportViolation);
  CHECK(code_of([] {
          validate(Measure{{}, {piece(0.0, 1.0, {1.0}), piece(0.5, 1.5, {1.0})}},
                   Setting::schrodinger(2.0));
        }) == ErrorCode::SupportViolation);
  CHECK(code_of([] {
          validate(Measure{{{0.5, 1.0}}, {piece(0.0, 1.0, {1.0})}}, Setting::schrodinger(2.0));
        }) == ErrorCode::SupportViolation);
  CHECK(code_of([] {
          validate(Measure{{}, {piece(0.0, 1.0, {0.0, 1.0})}}, Setting::schrodinger(2.0));
        }) == ErrorCode::NegativeWeight);
}

TEST_CASE("moments") {
  CHECK(moment(atoms({{1.0, 0.75}}), -2) == 0.75);
  CHECK(moment(atoms({{1.0, 0.75}}), 0) == 0.75);
  CHECK(moment(atoms({{-2.0, 1.0}, {2.0, 1.0}}), 1) == 0.0);
  CHECK(code_of([] { moment(Measure{{}, {piece(-0.5, 0.5, {1.0})}}, -1); }) ==
        ErrorCode::NegativeMomentAtZero);

  // Density 1 + x on [0.3, 0.6] in the affine variable x.
  const Measure m{{}, {piece(0.3, 0.6, {1.0, 1.0})}};
  // Closed form: density = (2t - 0.9)/0.3 + 1 = (2t - 0.6)/0.3.
  auto exact = [](int n) {
    const double a = 0.3, b = 0.6;
    auto prim = [&](double t) {
      return (2.0 * std::pow(t, n + 2) / (n + 2) - 0.6 * std::pow(t, n + 1) / (n + 1)) / 0.3;
    };
    return prim(b) - prim(a);
  };
  for (int n : {0, 1, 2, 5, 9}) CHECK(moment(m, n) == doctest::Approx(exact(n)).epsilon(1e-12));
  CHECK(moment(m, -1) == doctest::Approx((2.0 * 0.3 - 0.6 * std::log(2.0)) / 0.3).epsilon(1e-12));
}

TEST_CASE("cauchy transform") {
  const Measure d1 = atoms({{1.0, 1.0}});
  CHECK(std::abs(cauchy(d1, 0.0) - 1.0) < 1e-15);
  CHECK(std::abs(cauchy(d1, cplx(0, 0.5)) - cplx(0.8, 0.4)) < 1e-15);
  CHECK(std::abs(cauchy(Measure{}, cplx(0.3, 0.1))) == 0.0);
  CHECK(code_of([&] { cauchy(d1, 1.0); }) == ErrorCode::OnSupport);
  CHECK(code_of([] { cauchy(Measure{{}, {piece(0.0, 1.0, {1.0})}}, 0.5); }) ==
        ErrorCode::OnSupport);

  // Uniform density on [0, 1]: int dt/(t - z) = log((1 - z)/(-z)).
  const Measure u{{}, {piece(0.0, 1.0, {1.0})}};
  for (cplx z : {cplx(0.5, 1e-3), cplx(2.0, 0.5), cplx(-1.0, -2.0)}) {
    const cplx exact = std::log(1.0 - z) - std::log(-z);
    CHECK(std::abs(cauchy(u, z) - exact) < 1e-11 * std::abs(exact));
  }
}

TEST_CASE("support bounds") {
  CHECK(!support_bounds(Measure{}).has_value());
  auto s = support_bounds(atoms({{1.0, 0.5}}));
  CHECK(s->min == 1.0);
  CHECK(s->max == 1.0);
  CHECK(s->distance_to_zero == 1.0);
  s = support_bounds(atoms({{-0.5, 1.0}, {3.0, 1.0}}));
  CHECK(s->min == -0.5);
  CHECK(s->max == 3.0);
  CHECK(s->distance_to_zero == 0.5);
  s = support_bounds(Measure{{}, {piece(0.3, 0.6, {1.0})}});
  CHECK(s->min == 0.3);
  CHECK(s->max == 0.6);
  CHECK(s->distance_to_zero == 0.3);
}

namespace {

Measure random_measure(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(-3.0, 3.0), wt(0.01, 2.0), coef(0.0, 0.3);
  std::uniform_int_distribution<int> natoms(0, 4);
  Measure m;
  const int n = natoms(rng);
  for (int i = 0; i < n; ++i) {
    double t = pos(rng);
    if (std::abs(t) < 0.2) t += 0.5;
    m.atoms.push_back({t, wt(rng)});
  }
  if (rng() % 2) {
    m.pieces.push_back(piece(3.5, 4.0, {1.0, coef(rng), coef(rng)}));
  }
  if (m.empty()) m.atoms.push_back({1.0, 1.0});
  return m;
}

}  // namespace

TEST_CASE("property: moment bounds and monotone mass") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    Measure m = random_measure(rng);
    const auto s = *support_bounds(m);
    const double mass = moment(m, 0);
    const double far = std::max(std::abs(s.min), std::abs(s.max));
    for (int n = 1; n <= 8; ++n) {
      CHECK(std::abs(moment(m, n)) <= mass * std::pow(far, n) * (1 + 1e-12));
      CHECK(std::abs(moment(m, -n)) <= mass * std::pow(s.distance_to_zero, -n) * (1 + 1e-12));
    }
    m.atoms.push_back({-1.0 - 0.5 * trial / 100.0, 0.1});
    CHECK(moment(m, 0) > mass);
  }
}

TEST_CASE("property: Herglotz positivity and conjugate symmetry of the Cauchy transform") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> re(-5.0, 5.0), im(1e-3, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Measure m = random_measure(rng);
    for (int k = 0; k < 10; ++k) {
      const cplx z(re(rng), im(rng));
      const cplx c = cauchy(m, z);
      CHECK(c.imag() > 0.0);
      const cplx cc = cauchy(m, std::conj(z));
      CHECK(std::abs(cc - std::conj(c)) <= 1e-14 * std::abs(c));
    }
  }
}
