#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "wronski/quasipoly.hpp"
#include "wronski/random.hpp"

using namespace wronski;

namespace {

// Oracle: Wronskian of x^{z_i}·p_i(x) at a point x > 0 from the closed-form
// derivatives d^j x^{a} = a(a-1)...(a-j+1) x^{a-j}.
cplx numeric_qp_wronskian(const QuasiPolySpace& V, double x) {
  const int n = static_cast<int>(V.dim());
  Eigen::MatrixXcd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx acc = 0.0;
      const auto& c = V.members[i].p.coeffs();
      for (size_t k = 0; k < c.size(); ++k) {
        double a = V.members[i].z + static_cast<double>(k), ff = 1.0;
        for (int t = 0; t < j; ++t) ff *= a - t;
        acc += c[k] * ff * std::pow(x, a - j);
      }
      M(i, j) = acc;
    }
  return M.determinant();
}

QuasiPolySpace random_space(uint64_t seed, int index, int max_n = 3) {
  Rng rng(seed, index);
  int n = rng.integer(1, max_n);
  QuasiPolySpace V;
  std::vector<double> zs;
  for (int i = 0; i < n; ++i) {
    double z;
    bool ok;
    do {
      z = rng.uniform(-2.0, 2.0);
      ok = true;
      for (double w : zs) {
        double d = z - w;
        if (std::abs(d - std::round(d)) < 0.05) ok = false;
      }
    } while (!ok);
    zs.push_back(z);
    int deg = rng.integer(1, 3);
    CVec c(deg + 1);
    for (auto& v : c) v = rng.normal();
    c[deg] = 1.0;
    V.members.push_back({z, Polynomial(c)});
  }
  return V;
}

}  // namespace

TEST_CASE("quasi-polynomial Wronskian examples") {
  auto a = qp_wronskian({{{0.4, Polynomial({-3.0, 1.0})}}});
  CHECK(a.r == doctest::Approx(0.4));
  CHECK(coeff_distance(a.w, Polynomial({-3.0, 1.0})) < 1e-15);

  QuasiPolySpace V{{{0.0, Polynomial({1.0})}, {0.5, Polynomial({1.0})}}};
  auto b = qp_wronskian(V);
  CHECK(b.r == doctest::Approx(-0.5));
  CHECK(b.w.degree() == 0);
  CHECK(std::abs(b.kappa - 0.5) < 1e-15);
  CHECK(std::abs(numeric_qp_wronskian(V, 2.0) - 0.5 * std::pow(2.0, -0.5)) < 1e-14);
}

TEST_CASE("quasi-polynomial Wronskian matches the pointwise oracle") {
  for (int t = 0; t < 50; ++t) {
    QuasiPolySpace V = random_space(31, t);
    auto w = qp_wronskian(V);
    CHECK(w.w(0.0) != cplx(0.0));
    for (double x : {0.7, 1.9}) {
      cplx lhs = w.kappa * std::pow(x, w.r) * w.w(x);
      cplx rhs = numeric_qp_wronskian(V, x);
      CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("Fuchsian operator examples") {
  auto op = fuchsian_operator({{{0.0, Polynomial({1.0})}}});
  REQUIRE(op.order() == 1);
  CHECK(op.entry(0, 1) == cplx(1.0));
  CHECK(op.entry(0, 0) == cplx(0.0));
  CHECK(op.s() == 0);

  const double z = 0.35, c = 1.7;
  auto op1 = fuchsian_operator({{{z, Polynomial({-c, 1.0})}}});
  CHECK(std::abs(op1.entry(1, 1) - 1.0) < 1e-14);
  CHECK(std::abs(op1.entry(0, 1) + c) < 1e-14);
  CHECK(std::abs(op1.entry(1, 0) + (z + 1.0)) < 1e-14);
  CHECK(std::abs(op1.entry(0, 0) - z * c) < 1e-14);
  // x^{z+0.5} is not in the kernel
  CHECK(op1.apply(z + 0.5, Polynomial({1.0})).max_abs_coeff() > 0.1);
}

TEST_CASE("Fuchsian operator annihilates held-out combinations") {
  for (int t = 0; t < 40; ++t) {
    Rng rng(37, t);
    double z = rng.uniform(-1.0, 1.0);
    QuasiPolySpace V;
    V.members.push_back({z, Polynomial({rng.normal(), rng.normal(), 1.0})});
    V.members.push_back({z + 1.0, Polynomial({rng.normal(), 1.0})});
    V.members.push_back({z + 0.37, Polynomial({rng.normal(), 1.0})});
    auto op = fuchsian_operator(V);
    CHECK(op.by_order.back().leading() == cplx(1.0));
    // combination of the first two members as one quasi-polynomial x^z·P
    cplx a = rng.normal(), b = rng.normal();
    Polynomial P = V.members[0].p * a + Polynomial::monomial(1) * V.members[1].p * b;
    Polynomial res = op.apply(z, P);
    double scale = 0.0;
    for (int j = 0; j <= op.order(); ++j) scale = std::max(scale, op.by_order[j].max_abs_coeff());
    CHECK(res.max_abs_coeff() <= 1e-8 * scale * P.max_abs_coeff() * 100);
    for (auto& m : V.members) CHECK(op.apply(m.z, m.p).max_abs_coeff() <= 1e-8 * scale * 100);
  }
}

TEST_CASE("indicial polynomials") {
  auto ind = indicial_polynomials(fuchsian_operator({{{0.0, Polynomial({1.0})}}}));
  CHECK(coeff_distance(ind.chi0, Polynomial({0.0, 1.0})) < 1e-15);
  CHECK(coeff_distance(ind.chi_inf, Polynomial({0.0, 1.0})) < 1e-15);

  const double z = -0.6;
  auto ind1 = indicial_polynomials(fuchsian_operator({{{z, Polynomial({2.5, 1.0})}}}));
  CHECK(coeff_distance(ind1.chi0, Polynomial({-z, 1.0})) < 1e-13);
  CHECK(coeff_distance(ind1.chi_inf, Polynomial({-z - 1.0, 1.0})) < 1e-13);

  FuchsianOperator bad;
  bad.by_order = {Polynomial({1.0, 1.0}), Polynomial({0.0, 0.0, 1.0})};
  CHECK_THROWS_AS(indicial_polynomials(bad), MathError);
}

TEST_CASE("indicial roots match exponents read from the triangularized list") {
  for (int t = 0; t < 60; ++t) {
    QuasiPolySpace V = random_space(41, t);
    auto ind = indicial_polynomials(fuchsian_operator(V));
    auto byexp = indicial_from_exponents(V);
    CHECK(match_roots(roots(ind.chi0), roots(byexp.chi0)).max_distance <= 1e-8);
    CHECK(match_roots(roots(ind.chi_inf), roots(byexp.chi_inf)).max_distance <= 1e-8);
    // distinct generic exponents: roots at infinity are z_i + deg p_i
    CVec expect;
    for (auto& m : V.members) expect.push_back(m.z + m.p.degree());
    CHECK(match_roots(roots(ind.chi_inf), expect).max_distance <= 1e-8);
  }
}

TEST_CASE("compute_Y examples and errors") {
  Polynomial chi({1.0, -2.0, 1.0});
  CHECK(coeff_distance(compute_Y(chi, chi), Polynomial({1.0})) == 0.0);
  const double z = 0.25;
  auto Y1 = compute_Y(Polynomial({-z, 1.0}), Polynomial({-z - 1.0, 1.0}));
  CHECK(coeff_distance(Y1, Polynomial({-z, 1.0})) < 1e-14);
  auto Y2 = compute_Y(from_roots({0.0, 5.0}), from_roots({2.0, 5.0}));
  CHECK(coeff_distance(Y2, Polynomial({0.0, -1.0, 1.0})) < 1e-12);
  CHECK(y_identity_residual(Y2, from_roots({0.0, 5.0}), from_roots({2.0, 5.0})) < 1e-14);
  CHECK_THROWS_WITH_AS(compute_Y(Polynomial({0.0, 1.0}), Polynomial({-0.5, 1.0})),
                       "space not unramified-compatible", MathError);
  CHECK_THROWS_WITH_AS(compute_Y(Polynomial({-2.0, 1.0}), Polynomial({0.0, 1.0})),
                       "space not unramified-compatible", MathError);
}

TEST_CASE("Y satisfies its defining identity for random spaces") {
  for (int t = 0; t < 60; ++t) {
    QuasiPolySpace V = random_space(43, t);
    auto ind = indicial_polynomials(fuchsian_operator(V));
    Polynomial Y = compute_Y(ind.chi0, ind.chi_inf);
    CHECK(y_identity_residual(Y, ind.chi0, ind.chi_inf) <= 1e-10);
  }
}

TEST_CASE("reduce_degenerate") {
  QuasiPolySpace V{{{2.0, Polynomial({1.0})}, {3.0, Polynomial({1.0})}}};
  REQUIRE(find_monomial(V).has_value());
  CHECK(*find_monomial(V) == doctest::Approx(2.0));
  auto R = reduce_degenerate(V);
  REQUIRE(R.dim() == 1);
  CHECK(R.members[0].z == doctest::Approx(3.0));
  CHECK(coeff_distance(R.members[0].p, Polynomial({1.0})) < 1e-14);

  QuasiPolySpace N{{{0.3, Polynomial({1.0, 1.0})}}};
  CHECK_FALSE(find_monomial(N).has_value());
  auto same = reduce_degenerate(N);
  CHECK(same.dim() == 1);
  CHECK(coeff_distance(same.members[0].p, N.members[0].p) == 0.0);
}

TEST_CASE("reduce_degenerate preserves the Wronskian and Y") {
  for (int t = 0; t < 40; ++t) {
    Rng rng(47, t);
    QuasiPolySpace V = random_space(53, t, 2);
    double z = V.members[0].z + 1.0;
    // a hidden monomial: x^z mixed into the first member's class
    V.members.push_back({z, Polynomial({1.0})});
    V.members[0].p = V.members[0].p + Polynomial::monomial(1) * cplx(rng.normal());
    REQUIRE(find_monomial(V).has_value());
    auto R = reduce_degenerate(V);
    CHECK(R.dim() + 1 == V.dim());
    CHECK(coeff_distance_rel(qp_wronskian(V).w, qp_wronskian(R).w) <= 1e-9);
    auto iv = indicial_from_exponents(V), ir = indicial_from_exponents(R);
    Polynomial Yv = compute_Y(iv.chi0, iv.chi_inf), Yr = compute_Y(ir.chi0, ir.chi_inf);
    CHECK(coeff_distance_rel(Yv, Yr) <= 1e-9);
  }
}

TEST_CASE("bispectral dual term mapping") {
  FuchsianOperator xd;
  xd.by_order = {Polynomial(), Polynomial({1.0})};
  auto D = bispectral_dual(xd, ShiftSign::plus, Ordering::x_left);
  CHECK(D.order() == 0);
  CHECK(coeff_distance(D.by_shift[0], Polynomial({0.0, 1.0})) == 0.0);

  const double z = 0.2, c = 3.0;
  auto op = fuchsian_operator({{{z, Polynomial({-c, 1.0})}}});
  for (auto sg : {ShiftSign::plus, ShiftSign::minus}) {
    auto Dn = bispectral_dual(op, sg, Ordering::x_left);
    CHECK(Dn.sign == (sg == ShiftSign::plus ? 1 : -1));
    CHECK(coeff_distance(Dn.by_shift[1], Polynomial({-z - 1.0, 1.0})) < 1e-13);
    CHECK(coeff_distance(Dn.by_shift[0], Polynomial({c * z, -c})) < 1e-13);
  }
  auto Ds = bispectral_dual(op, ShiftSign::plus, Ordering::shift_left);
  // e^{d} x = (x + 1) e^{d}
  CHECK(coeff_distance(Ds.by_shift[1], Polynomial({-z, 1.0})) < 1e-13);

  for (int t = 0; t < 20; ++t) {
    auto opr = fuchsian_operator(random_space(59, t));
    CHECK(bispectral_dual(opr, ShiftSign::plus, Ordering::x_left).order() == opr.s());
  }
}

TEST_CASE("quasi-exponential kernel examples") {
  const cplx Q = 2.5;
  DifferenceOperator D;
  D.sign = -1;
  D.by_shift = {Polynomial::constant(-1.0 / Q), Polynomial::constant(1.0)};
  auto K = qe_kernel(D, 3);
  REQUIRE(K.dim() == 1);
  CHECK(std::abs(K.members[0].param - Q) < 1e-12);
  CHECK(K.members[0].poly.degree() == 0);

  const double z = 0.4, c = -1.5;
  DifferenceOperator E;
  E.sign = 1;
  E.by_shift = {Polynomial({c * z, -c}), Polynomial({-z - 1.0, 1.0})};
  auto K2 = qe_kernel(E, 3);
  REQUIRE(K2.dim() == 1);
  CHECK(std::abs(K2.members[0].param - c) < 1e-12);
  CHECK(coeff_distance(K2.members[0].poly, Polynomial({-z - 1.0, 1.0})) < 1e-10);

  try {
    qe_kernel(E, 0);
    FAIL("expected a kernel deficit");
  } catch (const KernelDeficit& e) {
    CHECK(e.partial().dim() == 0);
  }
  DifferenceOperator zero_order;
  zero_order.by_shift = {Polynomial({0.0, 1.0})};
  CHECK_THROWS_AS(qe_kernel(zero_order, 2), MathError);
}

TEST_CASE("dual kernel bases of a one-dimensional space lie at the Wronskian root") {
  const double z = -0.7, c = 0.8;
  QuasiPolySpace V{{{z, Polynomial({-c, 1.0})}}};
  auto D = dual_operator(V, DualConvention{});
  auto K = qe_kernel(D, 3);
  REQUIRE(K.dim() == 1);
  CHECK(std::abs(K.members[0].param - c) < 1e-12);
  CHECK_THROWS_AS(dual_operator({{{1.0, Polynomial({1.0})}}}, DualConvention{}), MathError);
}

TEST_CASE("calibration reproduces the frozen dual convention") {
  auto cal = calibrate_dual_convention(2024);
  auto frozen = load_dual_convention(std::string(WRONSKI_CONFIG_DIR) + "/dual_convention.json");
  CHECK(cal.convention.sign == frozen.sign);
  CHECK(cal.convention.ordering == frozen.ordering);
  CHECK(cal.convention.y_shift == frozen.y_shift);
  CHECK(cal.log.size() == 20);
}

TEST_CASE("duality holds for random spaces under the frozen convention") {
  auto conv = load_dual_convention(std::string(WRONSKI_CONFIG_DIR) + "/dual_convention.json");
  for (int t = 0; t < 30; ++t) {
    auto chk = check_duality(random_space(61, t), conv);
    CHECK(chk.y_distance <= 1e-6);
    CHECK(chk.base_distance <= 1e-6);
  }
}
