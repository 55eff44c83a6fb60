#include <doctest.h>

#include <cmath>

#include "wronski/matrices.hpp"
#include "wronski/quasiexp.hpp"
#include "wronski/random.hpp"

using namespace wronski;

namespace {

CMat mat2(cplx a, cplx b, cplx c, cplx d) {
  CMat m(2, 2);
  m << a, b, c, d;
  return m;
}

double max_abs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

// Real sites at pairwise distance >= gap, with differences kept away from 1
// so every kind is non-resonant.
CVec random_sites(Rng& rng, int n, double lo, double hi, bool random_sign) {
  CVec s;
  while (static_cast<int>(s.size()) < n) {
    double v = rng.uniform(lo, hi);
    if (random_sign && rng.uniform() < 0.5) v = -v;
    bool ok = true;
    for (cplx o : s)
      if (std::abs(o.real() - v) < 0.25 || std::abs(std::abs(o.real() - v) - 1.0) < 0.05) ok = false;
    if (ok) s.push_back(v);
  }
  return s;
}

// m_ij = Q_i·L_j'(Q_i) with L_j the Lagrange basis polynomial at Q_j.
CMat lagrange_m(const CVec& Q) {
  const int n = static_cast<int>(Q.size());
  CMat M(n, n);
  for (int j = 0; j < n; ++j) {
    CVec others;
    cplx den = 1.0;
    for (int s = 0; s < n; ++s)
      if (s != j) {
        others.push_back(Q[s]);
        den *= Q[j] - Q[s];
      }
    const Polynomial dL = from_roots(others).derivative();
    for (int i = 0; i < n; ++i) M(i, j) = Q[i] * dL(Q[i]) / den;
  }
  return M;
}

// Characteristic polynomial det(x - A) by Faddeev-LeVerrier.
Polynomial char_poly(const CMat& A) {
  const int n = static_cast<int>(A.rows());
  CVec c(n + 1);
  c[n] = 1.0;
  CMat Mk = CMat::Zero(n, n);
  const CMat I = CMat::Identity(n, n);
  for (int k = 1; k <= n; ++k) {
    Mk = A * Mk + c[n - k + 1] * I;
    c[n - k] = -(A * Mk).trace() / static_cast<double>(k);
  }
  return Polynomial(c);
}

}  // namespace

TEST_CASE("build matches the displayed examples") {
  CHECK(max_abs(build({MatrixKind::Zd, {1.0, 3.0}, {0.0, 0.0}}) - mat2(0, 0.5, -1.5, 0)) < 1e-15);
  CHECK(max_abs(build({MatrixKind::Z, {0.0, 1.0}, {0.0, 0.0}}) - mat2(0, 1, -1, 0)) < 1e-15);
  CHECK(max_abs(build({MatrixKind::Qd, {0.0, 2.0}, {1.0, 1.0}}) - mat2(1, -1, 1.0 / 3.0, 1)) < 1e-15);

  CHECK_THROWS_WITH_AS(build({MatrixKind::Z, {1.0, 1.0}, {0.0, 0.0}}), "sites not distinct", MathError);
  CHECK_THROWS_WITH_AS(build({MatrixKind::Zd, {0.0, 1.0}, {0.0, 0.0}}), "zero base", MathError);
  CHECK_THROWS_WITH_AS(build({MatrixKind::Qd, {1.0, 0.0}, {1.0, 1.0}}), "resonant sites: z_i - z_j = 1",
                       MathError);
  CHECK_THROWS_AS(build({MatrixKind::Zd, {1.0, 2.0}, {0.0}}), MathError);
}

TEST_CASE("Vandermonde closed form") {
  const VandermondeCheck v = vandermonde_m({1.0, 3.0});
  CHECK(max_abs(v.M - mat2(-0.5, 0.5, -1.5, 1.5)) < 1e-14);
  CHECK(v.residual < 1e-12);
  CHECK(v.det_residual < 1e-14);

  const VandermondeCheck one = vandermonde_m({2.5});
  CHECK(std::abs(one.M(0, 0)) == 0.0);

  CHECK_THROWS_WITH_AS(vandermonde_m({1.0, 1.0 + 1e-12}), "near-coincident bases", MathError);

  for (int t = 0; t < 50; ++t) {
    Rng rng(11, t);
    CVec Q = random_sites(rng, 5, 0.3, 3.0, true);
    if (t % 2) Q[0] = cplx(Q[0].real(), 0.7);
    const VandermondeCheck r = vandermonde_m(Q);
    CHECK(r.residual <= 1e-10);
    CHECK(r.det_residual <= 1e-10);
    CHECK(max_abs(r.M - lagrange_m(Q)) <= 1e-10 * std::max(1.0, max_abs(r.M)));
  }
}

TEST_CASE("conjugation identity") {
  CHECK(conjugation_check({2.0}, {cplx(0.3, 1.0)}) == 0.0);
  CHECK(conjugation_check({1.0, 3.0}, {0.0, 0.0}) <= 1e-12);
  for (int t = 0; t < 50; ++t) {
    Rng rng(12, t);
    const CVec Q = random_sites(rng, 6, 0.3, 3.0, true);
    CVec a;
    for (int i = 0; i < 6; ++i) a.push_back(rng.cnormal());
    CHECK(conjugation_check(Q, a) <= 1e-9);
    CHECK(conjugation_spectrum_distance(Q, a) <= 1e-9);
  }
}

TEST_CASE("spectrum versus Wronskian examples") {
  const SpectrumCheck zd = spectrum_vs_wronskian({MatrixKind::Zd, {1.0, 3.0}, {0.0, 0.0}});
  CHECK(zd.distance <= 1e-10);
  REQUIRE(zd.roots.size() == 2);
  CHECK(std::abs(zd.roots[0] - cplx(0, -std::sqrt(3.0) / 2)) < 1e-12);
  CHECK(std::abs(zd.roots[1] - cplx(0, std::sqrt(3.0) / 2)) < 1e-12);

  const SpectrumCheck z = spectrum_vs_wronskian({MatrixKind::Z, {0.0, 1.0}, {0.0, 0.0}});
  CHECK(z.distance <= 1e-10);
  CHECK(std::abs(z.roots[0] - cplx(0, -1)) < 1e-12);
  CHECK(std::abs(z.roots[1] - cplx(0, 1)) < 1e-12);

  for (MatrixKind k : {MatrixKind::Zd, MatrixKind::Z, MatrixKind::Qd}) {
    const SpectrumCheck one = spectrum_vs_wronskian({k, {0.5}, {cplx(1.25, -0.5)}});
    CHECK(std::abs(one.eigenvalues[0] - cplx(1.25, -0.5)) < 1e-14);
    CHECK(one.distance < 1e-14);
  }
}

TEST_CASE("characteristic polynomial equals the monic Wronskian") {
  for (MatrixKind k : {MatrixKind::Zd, MatrixKind::Z}) {
    for (int t = 0; t < 100; ++t) {
      Rng rng(13, t);
      const int n = rng.integer(1, 5);
      StructuredParams p{k, random_sites(rng, n, 0.3, 3.0, k == MatrixKind::Zd), {}};
      for (int i = 0; i < n; ++i) p.weights.push_back(rng.cnormal());
      const CVec w = shifted_weights(p);
      QuasiExpSpace V;
      V.mode = k == MatrixKind::Zd ? Mode::multiplicative : Mode::exponent;
      for (int i = 0; i < n; ++i) V.members.push_back({p.sites[i], Polynomial::linear_root(w[i])});
      const Polynomial W = k == MatrixKind::Zd ? discrete_wronskian(V).monic : wronskian(V).monic;
      CHECK(coeff_distance_rel(char_poly(build(p)), W) <= 1e-9);
      CHECK(spectrum_vs_wronskian(p).ok());
    }
  }
}

TEST_CASE("Qd eigenvalues match the quasi-polynomial Wronskian at unit scale") {
  for (int t = 0; t < 100; ++t) {
    Rng rng(14, t);
    const int n = rng.integer(1, 5);
    StructuredParams p{MatrixKind::Qd, random_sites(rng, n, -3.0, 3.0, false), {}};
    for (int i = 0; i < n; ++i) p.weights.push_back(rng.cnormal());
    CHECK(std::abs(fit_qd_scale(p) - kQdScale) <= 1e-8);
    CHECK(spectrum_vs_wronskian(p).ok());
  }
}

TEST_CASE("reality verdicts") {
  const double r21 = std::sqrt(21.0);
  const RealityVerdict z = reality_verdict({MatrixKind::Z, {0.0, 1.0}, {5.0, 0.0}}, 1e-9);
  CHECK(z.eigenvalues_real);
  CHECK(std::abs(z.eigenvalues[0] - (5 - r21) / 2) < 1e-12);
  CHECK(std::abs(z.eigenvalues[1] - (5 + r21) / 2) < 1e-12);
  CHECK(z.hypotheses);
  CHECK(z.weights_real);
  CHECK(z.consistent());

  // trace 2, det 0 for Q = (1, 3) gives eigenvalues {0, 2}
  const double s7 = std::sqrt(7.0) / 2;
  const RealityVerdict zd = reality_verdict({MatrixKind::Zd, {1.0, 3.0}, {1 + s7, 1 - s7}}, 1e-9);
  CHECK(std::abs(zd.eigenvalues[0]) < 1e-12);
  CHECK(std::abs(zd.eigenvalues[1] - 2.0) < 1e-12);
  CHECK(zd.hypotheses);
  CHECK(zd.claim == "separated eigenvalues");
  CHECK(zd.consistent());

  const RealityVerdict none = reality_verdict({MatrixKind::Z, {0.0, 1.0}, {0.0, 0.0}}, 1e-9);
  CHECK_FALSE(none.eigenvalues_real);
  CHECK_FALSE(none.hypotheses);
  CHECK(none.claim == "no claim");

  CHECK_THROWS_AS(reality_verdict({MatrixKind::Z, {cplx(0, 1), 1.0}, {0.0, 0.0}}, 1e-9), MathError);
}

TEST_CASE("reality verdicts never contradict on random real instances") {
  int claims = 0;
  for (MatrixKind k : {MatrixKind::Zd, MatrixKind::Z, MatrixKind::Qd}) {
    for (int t = 0; t < 200; ++t) {
      Rng rng(15, t);
      const int n = rng.integer(1, 4);
      StructuredParams p{k, random_sites(rng, n, 0.3, 4.0, k != MatrixKind::Z), {}};
      for (int i = 0; i < n; ++i)
        p.weights.push_back(rng.uniform() < 0.5 ? cplx(rng.normal(3.0), 0.0) : rng.cnormal(3.0));
      const RealityVerdict v = reality_verdict(p, 1e-8);
      CHECK(v.consistent());
      claims += v.hypotheses;
    }
  }
  CHECK(claims > 50);
}

TEST_CASE("rank-one pairs") {
  const RankOneResult one = cm_rank_one({CMat::Constant(1, 1, 0.7), CMat::Constant(1, 1, 2.0), CMMode::multiplicative});
  CHECK(one.holds);
  CHECK(std::abs(one.K(0, 0) - 1.0) < 1e-15);

  const CMat Qd = build({MatrixKind::Qd, {0.0, 2.0}, {1.0, 1.0}});
  const CMat Zm = mat2(0, 0, 0, 2);
  CHECK(max_abs(Qd * Zm - Zm * Qd - Qd - mat2(-1, -1, -1, -1)) < 1e-15);
  CHECK(cm_rank_one({Zm, Qd, CMMode::multiplicative}).holds);

  const CMat Z = build({MatrixKind::Z, {0.0, 1.0}, {0.4, -2.0}});
  const RankOneResult add = cm_rank_one({Z, mat2(0, 0, 0, 1), CMMode::additive});
  CHECK(add.holds);
  CHECK(max_abs(add.K - CMat::Ones(2, 2)) < 1e-15);

  CHECK_FALSE(cm_rank_one({mat2(1, 0, 0, 3), mat2(2, 0, 0, 5), CMMode::additive}).holds);
  CHECK_THROWS_WITH_AS(cm_rank_one({Zm, mat2(1, 1, 1, 1), CMMode::multiplicative}), "singular Q", MathError);
}

TEST_CASE("structured rank-one identities hold entrywise") {
  for (int t = 0; t < 100; ++t) {
    Rng rng(16, t);
    const int n = rng.integer(1, 6);
    const CVec s = random_sites(rng, n, -3.0, 3.0, false);
    CVec w;
    for (int i = 0; i < n; ++i) w.push_back(rng.cnormal());
    CHECK(z_commutator_residual(s, w) <= 1e-12);
    CHECK(qd_rank_one_residual(s, w) <= 1e-12);
  }
}

TEST_CASE("real forms") {
  const CMat Zd = build({MatrixKind::Zd, {1.0, 3.0}, {1.0, -2.0}});
  const RealForm id = realize_real_form({Zd, mat2(1, 0, 0, 3), CMMode::multiplicative});
  REQUIRE(id.C);
  CHECK(max_abs(*id.C - CMat::Identity(2, 2)) == 0.0);

  const RealForm bad = realize_real_form(
      {build({MatrixKind::Z, {0.0, 1.0}, {0.0, 0.0}}), mat2(0, 0, 0, 1), CMMode::additive});
  CHECK_FALSE(bad.C);
  CHECK(bad.failure == "non-real spectrum");

  CHECK_THROWS_WITH_AS(
      realize_real_form({mat2(0, 0, 1, 0), mat2(1, 1, 0, 1), CMMode::additive}),
      "semisimple case only", MathError);

  int recovered = 0;
  for (int t = 0; t < 200; ++t) {
    Rng rng(17, t);
    const int n = rng.integer(2, 4);
    const bool mult = t % 2 == 0;
    // bases of one sign make the bipartition test available as well
    CVec s = random_sites(rng, n, 0.5, 3.0, false);
    CVec a;
    for (int i = 0; i < n; ++i) a.push_back(rng.normal(4.0));
    const MatrixKind k = mult ? MatrixKind::Zd : MatrixKind::Z;
    const StructuredParams p{k, s, a};
    const RealityVerdict v = reality_verdict(p, 1e-9);
    if (!v.hypotheses) continue;
    CMat C0(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) C0(i, j) = rng.cnormal();
    C0 += 2.0 * CMat::Identity(n, n);
    CMat D = CMat::Zero(n, n);
    for (int i = 0; i < n; ++i) D(i, i) = s[i];
    const CMat inv = C0.inverse();
    const CMMode mode = mult ? CMMode::multiplicative : CMMode::additive;
    const RealForm rf = realize_real_form({inv * build(p) * C0, inv * D * C0, mode});
    REQUIRE_MESSAGE(rf.C, rf.failure);
    CHECK(rf.imag_residual <= kRealFormTol);
    // the recovered diagonal is the planted a, up to the order of the sites
    CHECK(match_roots(sorted_lex(rf.weights), sorted_lex(a)).max_distance <= 1e-7);
    ++recovered;
  }
  CHECK(recovered > 20);
}
