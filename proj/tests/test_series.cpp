#include <doctest.h>

#include <random>
#include <vector>

#include "marchenko/series.hpp"

using marchenko::Error;
using marchenko::Series;

namespace {

Series poly(int lead, std::vector<double> c, int order) {
  Series::Coeffs v = Series::Coeffs::Zero(order - lead);
  for (std::size_t k = 0; k < c.size() && static_cast<int>(k) < v.size(); ++k) v[k] = c[k];
  return Series(lead, v);
}

// Naive product of two coefficient lists, both starting at exponent 0.
std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

}  // namespace

TEST_CASE("add") {
  const Series s = poly(0, {1, 1}, 5) + poly(0, {1, -1}, 3);
  CHECK(s.order() == 3);
  CHECK(s[0] == 2);
  CHECK(s[1] == 0);
  CHECK(s[2] == 0);

  const Series a = poly(-1, {1, 0, 1}, 4);
  const Series same = a + Series::zero(10);
  CHECK(same.order() == a.order());
  for (int e = -1; e < 4; ++e) CHECK(same[e] == a[e]);

  const Series laurent = poly(-1, {1, 0, 1}, 4) + poly(1, {1}, 4);
  CHECK(laurent.lead() == -1);
  CHECK(laurent[-1] == 1);
  CHECK(laurent[0] == 0);
  CHECK(laurent[1] == 2);
  CHECK_THROWS_AS(laurent[4], Error);
}

TEST_CASE("multiply") {
  const Series d = poly(0, {1, 1}, 6) * poly(0, {1, -1}, 6);
  CHECK(d.order() == 6);
  CHECK(d[0] == 1);
  CHECK(d[1] == 0);
  CHECK(d[2] == -1);
  for (int e = 3; e < 6; ++e) CHECK(d[e] == 0);

  const Series one = poly(-1, {1}, 5) * poly(1, {1}, 5);
  CHECK(one.lead() == 0);
  CHECK(one.order() == 4);
  CHECK(one[0] == 1);
  CHECK(one[3] == 0);

  const Series sq = poly(0, {1, 1, 1}, 5) * poly(0, {1, 1, 1}, 5);
  const double expected[] = {1, 2, 3, 2, 1};
  for (int e = 0; e < 5; ++e) CHECK(sq[e] == expected[e]);
}

TEST_CASE("multiply order is limited by the least known factor") {
  const Series p = poly(0, {1, 2}, 3) * poly(2, {1}, 10);
  CHECK(p.lead() == 2);
  CHECK(p.order() == 5);
}

TEST_CASE("reciprocal") {
  const Series g = marchenko::reciprocal(poly(0, {1, -1}, 8));
  CHECK(g.order() == 8);
  for (int e = 0; e < 8; ++e) CHECK(g[e] == 1);

  const Series inv_u = marchenko::reciprocal(poly(1, {1}, 6));
  CHECK(inv_u.lead() == -1);
  CHECK(inv_u[-1] == 1);
  for (int e = 0; e < inv_u.order(); ++e) CHECK(inv_u[e] == 0);

  const Series h = marchenko::reciprocal(poly(0, {2, 1}, 10));
  CHECK(h[0] == doctest::Approx(0.5));
  CHECK(h[1] == doctest::Approx(-0.25));
  CHECK(h[2] == doctest::Approx(0.125));
  const Series back = h * poly(0, {2, 1}, 10);
  CHECK(back[0] == doctest::Approx(1.0));
  for (int e = 1; e < back.order(); ++e) CHECK(std::abs(back[e]) < 1e-15);

  CHECK_THROWS_AS(marchenko::reciprocal(Series::zero(5)), Error);
}

TEST_CASE("compose") {
  const Series g = poly(1, {1, 3, -2, 0.5}, 7);
  const Series id = marchenko::compose(poly(1, {1}, 20), g);
  CHECK(id.order() == g.order());
  for (int e = 0; e < g.order(); ++e) CHECK(id[e] == g[e]);

  std::vector<double> geometric(8, 1.0);
  const Series f = poly(0, geometric, 8);
  const Series c = marchenko::compose(f, poly(2, {1}, 30));
  CHECK(c.order() == 16);
  for (int e = 0; e < 16; ++e) CHECK(c[e] == (e % 2 == 0 ? 1 : 0));

  const Series flip = marchenko::compose(poly(1, {1, 1}, 20), poly(1, {-1}, 20));
  CHECK(flip[1] == -1);
  CHECK(flip[2] == 1);
  for (int e = 3; e < flip.order(); ++e) CHECK(flip[e] == 0);

  CHECK_THROWS_AS(marchenko::compose(f, poly(0, {1, 1}, 5)), Error);
}

TEST_CASE("revert") {
  const Series id = marchenko::revert(poly(1, {1}, 10));
  CHECK(id[1] == 1);
  for (int e = 2; e < 10; ++e) CHECK(id[e] == 0);

  // u = -lambda / (1 + lambda^2) as a series in lambda.
  const Series u = poly(1, {-1, 0, 1, 0, -1, 0, 1, 0, -1}, 10);
  const Series g = marchenko::revert(u);
  CHECK(g[1] == doctest::Approx(-1));
  CHECK(g[2] == doctest::Approx(0));
  CHECK(g[3] == doctest::Approx(-1));
  CHECK(g[5] == doctest::Approx(-2));
  CHECK(g[7] == doctest::Approx(-5));
  const Series back = marchenko::compose(u, g);
  CHECK(back[1] == doctest::Approx(1));
  for (int e = 2; e < back.order(); ++e) CHECK(std::abs(back[e]) < 1e-13);

  const Series half = marchenko::revert(poly(1, {2}, 6));
  CHECK(half[1] == doctest::Approx(0.5));

  CHECK_THROWS_AS(marchenko::revert(poly(1, {0, 1}, 6)), Error);
  CHECK_THROWS_AS(marchenko::revert(poly(0, {1, 1}, 6)), Error);
}

TEST_CASE("property: products agree with brute-force convolution on integer inputs") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coeff(-9, 9);
  std::uniform_int_distribution<int> len(1, 12);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(len(rng)), b(len(rng));
    for (auto& x : a) x = coeff(rng);
    for (auto& x : b) x = coeff(rng);
    const int la = static_cast<int>(a.size()), lb = static_cast<int>(b.size());
    const std::vector<double> ref = convolve(a, b);
    const Series p = poly(0, a, la) * poly(0, b, lb);
    REQUIRE(p.order() == std::min(la, lb));
    for (int e = 0; e < p.order(); ++e) CHECK(p[e] == ref[e]);
    const Series s = poly(0, a, la) + poly(0, b, lb);
    for (int e = 0; e < s.order(); ++e) CHECK(s[e] == a[e] + b[e]);
  }
}

TEST_CASE("property: compose(f, revert(f)) and f * recip(f) are identities") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int order = 4 + trial % 20;
    Series::Coeffs c(order - 1);
    for (int k = 0; k < c.size(); ++k) c[k] = u(rng);
    c[0] = (c[0] >= 0 ? 0.5 : -0.5) + c[0];
    const Series f(1, c);
    const Series g = marchenko::revert(f);
    const Series id = marchenko::compose(f, g);
    REQUIRE(id.order() == order);
    CHECK(id[1] == doctest::Approx(1.0).epsilon(1e-12));
    double scale = 0.0;
    for (int k = 0; k < g.size(); ++k) scale = std::max(scale, std::abs(g.coeffs()[k]));
    for (int e = 2; e < order; ++e) CHECK(std::abs(id[e]) <= 1e-12 * std::max(1.0, scale));

    const Series h(0, c);
    const Series one = h * marchenko::reciprocal(h);
    CHECK(one[0] == doctest::Approx(1.0).epsilon(1e-12));
    for (int e = 1; e < one.order(); ++e) CHECK(std::abs(one[e]) <= 1e-10);
  }
}
