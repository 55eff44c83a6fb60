#include <doctest.h>

#include <cmath>

#include "wronski/polynomial.hpp"
#include "wronski/random.hpp"

using namespace wronski;

namespace {

bool has_root(const CVec& rs, cplx r, double tol) {
  for (auto v : rs)
    if (std::abs(v - r) <= tol) return true;
  return false;
}

}  // namespace

TEST_CASE("roots of x^2 + 3/4 match the quadratic formula") {
  Polynomial p({0.75, 0.0, 1.0});
  // quadratic formula: (-b ± sqrt(b^2 - 4ac)) / 2a
  cplx disc = std::sqrt(cplx(0.0 - 4.0 * 0.75));
  cplx r1 = disc / 2.0, r2 = -disc / 2.0;
  auto rs = roots(p);
  REQUIRE(rs.size() == 2);
  CHECK(has_root(rs, r1, 1e-12));
  CHECK(has_root(rs, r2, 1e-12));
  CHECK(std::abs(r1.imag()) == doctest::Approx(std::sqrt(3.0) / 2));
}

TEST_CASE("roots of linear and factored polynomials") {
  auto r = roots(Polynomial({-5.0, 1.0}));
  REQUIRE(r.size() == 1);
  CHECK(std::abs(r[0] - 5.0) < 1e-14);
  auto r2 = roots(Polynomial({0.0, -2.0, 1.0}));
  REQUIRE(r2.size() == 2);
  CHECK(has_root(r2, 0.0, 1e-14));
  CHECK(has_root(r2, 2.0, 1e-13));
}

TEST_CASE("roots of the zero polynomial is an error") {
  CHECK_THROWS_WITH_AS(roots(Polynomial()), "zero polynomial has no root multiset", MathError);
  CHECK_THROWS_AS(roots(Polynomial({0.0, 0.0})), MathError);
}

TEST_CASE("roots are polished to small residuals") {
  Polynomial p = from_roots({1.0, -2.0, cplx(0.5, 1.5), cplx(0.5, -1.5), 3.25});
  for (auto r : roots(p)) CHECK(std::abs(p(r)) <= 1e-10 * p.max_abs_coeff());
}

TEST_CASE("from_roots examples") {
  CHECK(coeff_distance(from_roots({}), Polynomial({1.0})) == 0.0);
  CHECK(coeff_distance(from_roots({0.0, 2.0}), Polynomial({0.0, -2.0, 1.0})) == 0.0);
  Polynomial p = from_roots({cplx(0, 1), cplx(0, -1)});
  CHECK(coeff_distance(p, Polynomial({1.0, 0.0, 1.0})) == 0.0);
}

TEST_CASE("classify_real uses the relative-plus-absolute rule") {
  auto v = classify_real({cplx(3.0, 1e-12), cplx(0.0, std::sqrt(3.0) / 2), 0.0}, 1e-8);
  CHECK(v[0]);
  CHECK_FALSE(v[1]);
  CHECK(v[2]);
  CHECK(classify_real({0.0}, 1e-300)[0]);
  CHECK(is_real(cplx(1e6, 1e-3), 1e-8));
  CHECK_FALSE(is_real(cplx(1e6, 1e-1), 1e-8));
  CHECK_THROWS_AS(classify_real({1.0}, 0.0), MathError);
}

TEST_CASE("round trip from_roots(roots(p)) for random monic polynomials") {
  for (int trial = 0; trial < 200; ++trial) {
    Rng rng(7, trial);
    int deg = rng.integer(1, 12);
    CVec rs;
    // well-separated: jittered points on a grid
    for (int k = 0; k < deg; ++k)
      rs.push_back(cplx(k - deg / 2.0 + 0.2 * rng.uniform(), 0.2 * rng.normal()));
    Polynomial p = from_roots(rs);
    Polynomial q = from_roots(roots(p));
    CHECK(coeff_distance(p, q) / p.max_abs_coeff() <= 1e-8);
  }
}

TEST_CASE("roots of real polynomials are conjugation closed") {
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(11, trial);
    int deg = rng.integer(1, 10);
    CVec c(deg + 1);
    for (auto& v : c) v = rng.normal();
    c[deg] = 1.0;
    auto rs = roots(Polynomial(c));
    CVec conj;
    for (auto r : rs) conj.push_back(std::conj(r));
    CHECK(match_roots(rs, conj).max_distance <= 1e-7);
  }
}

TEST_CASE("polynomial arithmetic") {
  Polynomial p({1.0, 2.0, 3.0});
  CHECK(p(2.0) == cplx(17.0));
  CHECK(coeff_distance(p.derivative(), Polynomial({2.0, 6.0})) == 0.0);
  // p(x+1) = 3x^2 + 8x + 6
  CHECK(coeff_distance(p.shifted(1.0), Polynomial({6.0, 8.0, 3.0})) < 1e-15);
  CHECK(coeff_distance(p.scaled_argument(2.0), Polynomial({1.0, 4.0, 12.0})) == 0.0);
  CHECK(coeff_distance(p.euler(), Polynomial({0.0, 2.0, 6.0})) == 0.0);
  auto [q, r] = (p * Polynomial({-1.0, 1.0}) + Polynomial({4.0})).divmod(Polynomial({-1.0, 1.0}));
  CHECK(coeff_distance(q, p) < 1e-14);
  CHECK(coeff_distance(r, Polynomial({4.0})) < 1e-14);
  CHECK(p.monic().leading() == cplx(1.0));
  CHECK(Polynomial({0.0, 0.0, 5.0}).valuation() == 2);
  CHECK(Polynomial().degree() == -1);
}

TEST_CASE("greedy root matching reports the achieved distance") {
  auto m = match_roots({1.0, 2.0, 3.0}, {3.0 + 1e-3, 1.0, 2.0 - 2e-3});
  CHECK(m.max_distance == doctest::Approx(2e-3));
  REQUIRE(m.pairs.size() == 3);
  CHECK(m.pairs[0] == std::make_pair(0, 1));
  CHECK(m.pairs[1] == std::make_pair(1, 2));
  CHECK(m.pairs[2] == std::make_pair(2, 0));
  CHECK_THROWS_AS(match_roots({1.0}, {}), MathError);
}
