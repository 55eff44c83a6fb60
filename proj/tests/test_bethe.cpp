#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "wronski/bethe.hpp"
#include "wronski/inverse.hpp"
#include "wronski/random.hpp"

using namespace wronski;

namespace {

double max_abs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

Eigen::VectorXcd kron_vec(const std::vector<Eigen::VectorXcd>& parts) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Ones(1);
  for (const auto& p : parts) {
    Eigen::VectorXcd next(out.size() * p.size());
    for (Eigen::Index i = 0; i < out.size(); ++i) next.segment(i * p.size(), p.size()) = out(i) * p;
    out = next;
  }
  return out;
}

Eigen::VectorXcd basis(int N, int a) {
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(N);
  e(a) = 1.0;
  return e;
}

CVec sorted_eigs(const CMat& m) {
  Eigen::ComplexEigenSolver<CMat> es(m, false);
  return sorted_lex(CVec(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()));
}

TensorSpace random_space(Rng& rng, int N, int n) {
  TensorSpace ts;
  ts.N = N;
  for (int i = 0; i < n; ++i) ts.z.push_back(rng.cnormal(2.0));
  for (int a = 0; a < N; ++a) ts.Q.push_back(rng.cnormal());
  return ts;
}

// Real twist entries of either sign at distance >= 0.2.
CVec random_twist(Rng& rng, int N, bool positive) {
  CVec Q;
  while (static_cast<int>(Q.size()) < N) {
    double q = rng.uniform(0.2, 3.0);
    if (!positive && rng.uniform() < 0.5) q = -q;
    if (std::all_of(Q.begin(), Q.end(), [&](cplx o) { return std::abs(o.real() - q) >= 0.2; })) Q.push_back(q);
  }
  return Q;
}

// Run of n points starting near 0 with steps in (1, 3), descending or ascending.
std::vector<double> gapped_run(Rng& rng, int n, bool descending) {
  std::vector<double> z;
  double v = rng.uniform(-2.0, 2.0);
  for (int i = 0; i < n; ++i) {
    z.push_back(v);
    v += (descending ? -1.0 : 1.0) * (1.0 + rng.uniform(0.01, 2.0));
  }
  return z;
}

}  // namespace

TEST_CASE("tensor space validation") {
  CHECK_NOTHROW(validate(TensorSpace{2, {0.0, 1.0}, {1.0, 2.0}}));
  CHECK_THROWS_WITH_AS(validate(TensorSpace{2, {0.0}, {1.0}}), "twist must have N entries", MathError);
  CHECK_THROWS_WITH_AS(validate(TensorSpace{2, {0.0}, {1.0, 0.0}}), "twist entries must be nonzero", MathError);
  CHECK_THROWS_WITH_AS(validate(TensorSpace{3, CVec(8, 0.0), {1.0, 1.0, 1.0}}),
                       "tensor space too large: N^n exceeds 4096", MathError);
  CHECK_NOTHROW(validate(TensorSpace{4, CVec(6, 0.0), {1.0, 1.0, 1.0, 1.0}}));
}

TEST_CASE("flip and site operators follow the digit convention") {
  const TensorSpace ts{3, {0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      const CMat P = flip(ts, i, j);
      for (int a = 0; a < 27; ++a) {
        std::vector<int> d = {a / 9, a / 3 % 3, a % 3};
        std::vector<Eigen::VectorXcd> in, out;
        for (int k = 0; k < 3; ++k) in.push_back(basis(3, d[k]));
        std::swap(d[i], d[j]);
        for (int k = 0; k < 3; ++k) out.push_back(basis(3, d[k]));
        CHECK((P * kron_vec(in) - kron_vec(out)).norm() == 0.0);
      }
    }

  Rng rng(21);
  const CMat m = CMat::Random(3, 3);
  for (int i = 0; i < 3; ++i) {
    std::vector<Eigen::VectorXcd> v;
    for (int k = 0; k < 3; ++k) v.push_back(Eigen::VectorXcd::Random(3));
    std::vector<Eigen::VectorXcd> w = v;
    w[i] = m * v[i];
    CHECK((site_op(ts, i, m) * kron_vec(v) - kron_vec(w)).norm() <= 1e-14);
  }
  CHECK_THROWS_WITH_AS(site_op(ts, 3, m), "site out of range", MathError);
}

TEST_CASE("R-matrix examples") {
  const TensorSpace ts{2, {0.0, 0.0, 0.0}, {1.0, 1.0}};
  CHECK(max_abs(site_R(ts, 0.0, 0, 2) - flip(ts, 0, 2)) == 0.0);
  const CMat prod = site_R(ts, 2.0, 1, 2) * site_R(ts, -2.0, 1, 2);
  CHECK(max_abs(prod + 3.0 * CMat::Identity(8, 8)) <= 1e-14);
  const TensorSpace scalar{1, {0.0, 0.0}, {1.0}};
  CHECK(std::abs(site_R(scalar, 1.5, 0, 1)(0, 0) - 2.5) == 0.0);
  CHECK_THROWS_WITH_AS(site_R(ts, 1.0, 1, 1), "R-matrix needs two distinct sites", MathError);
}

TEST_CASE("Yangian form examples") {
  const TensorSpace one{3, {0.7}, {1.0, 2.0, 3.0}};
  CHECK(max_abs(big_R(one) - CMat::Identity(3, 3)) == 0.0);

  const TensorSpace two{2, {3.0, 1.0}, {1.0, 1.0}};
  const CVec ev = sorted_eigs(big_R(two));
  CHECK(std::abs(ev[0] - 1.0) <= 1e-12);
  for (int k = 1; k < 4; ++k) CHECK(std::abs(ev[k] - 3.0) <= 1e-12);

  const FormCertificate c = certify_form(two, CMat::Identity(4, 4));
  CHECK(c.symmetric());
  CHECK(std::abs(c.min_eigenvalue - 1.0) <= 1e-10);
  CHECK(c.positive_definite());

  const FormCertificate below = certify_form(TensorSpace{2, {0.5, 0.0}, {1.0, 1.0}}, CMat::Identity(4, 4));
  CHECK(std::abs(below.min_eigenvalue + 0.5) <= 1e-12);
  CHECK_FALSE(below.positive_definite());

  CHECK_THROWS_WITH_AS(certify_form(TensorSpace{2, {cplx(0, 1), 0.0}, {1.0, 1.0}}, CMat::Identity(4, 4)),
                       "hypotheses violated", MathError);

  for (int t = 0; t < 20; ++t) {
    Rng rng(22, t);
    TensorSpace ts{rng.integer(2, 3), {}, {}};
    for (int i = 0; i < 3; ++i) ts.z.push_back(rng.normal(2.0));
    ts.Q = random_twist(rng, ts.N, false);
    const CMat G = big_R(ts);
    CHECK(max_abs(G - G.transpose()) <= 1e-12 * std::max(1.0, max_abs(G)));
  }
}

TEST_CASE("qKZ Hamiltonian examples") {
  const TensorSpace one{3, {0.4}, {1.0, -2.0, 0.5}};
  const std::vector<CMat> K1 = qkz_hamiltonians(one);
  REQUIRE(K1.size() == 1);
  CHECK(max_abs(K1[0] - CMat(Eigen::VectorXcd::Map(one.Q.data(), 3).asDiagonal())) == 0.0);

  const TensorSpace two{2, {1.5, -0.25}, {2.0, 3.0}};
  CMat Q(2, 2);
  Q << 2.0, 0.0, 0.0, 3.0;
  const std::vector<CMat> K = qkz_hamiltonians(two);
  CHECK(max_abs(K[0] - site_op(two, 0, Q) * site_R(two, 1.75, 0, 1)) <= 1e-14);
  CHECK(max_abs(K[1] - site_R(two, -1.75, 1, 0) * site_op(two, 1, Q)) <= 1e-14);
}

TEST_CASE("transfer matrix") {
  const TensorSpace one{2, {0.5}, {2.0, 3.0}};
  CMat expect(2, 2);
  const cplx x = 2.5;
  expect << 5.0 + 2.0 / (x - 0.5), 0.0, 0.0, 5.0 + 3.0 / (x - 0.5);
  CHECK(max_abs(transfer_B1(x, one) - expect) <= 1e-14);
  CHECK_THROWS_AS(transfer_B1(0.5, one), MathError);

  for (int t = 0; t < 20; ++t) {
    Rng rng(23, t);
    const TensorSpace ts = random_space(rng, rng.integer(1, 3), rng.integer(1, 3));
    const CMat A = transfer_B1(rng.cnormal(3.0), ts);
    const CMat B = transfer_B1(rng.cnormal(3.0), ts);
    CHECK(max_abs(A * B - B * A) <= 1e-10 * std::max(1.0, max_abs(A) * max_abs(B)));
    // the analytic residue against (x - z_i)·B_1(x) at a small offset
    for (int i = 0; i < ts.n(); ++i) {
      const cplx h = 1e-7;
      const CMat fd = h * transfer_B1(ts.z[i] + h, ts);
      CHECK(max_abs(fd - b1_residue(ts, i)) <= 1e-4 * std::max(1.0, max_abs(fd)));
    }
  }
}

TEST_CASE("residue identity, commutativity and symmetry of K") {
  for (int t = 0; t < 100; ++t) {
    Rng rng(24, t);
    const TensorSpace ts = random_space(rng, rng.integer(1, 3), rng.integer(1, 3));
    const std::vector<CMat> K = qkz_hamiltonians(ts);
    const CMat R = big_R(ts);
    for (int i = 0; i < ts.n(); ++i) {
      cplx p = 1.0;
      for (int j = 0; j < ts.n(); ++j)
        if (j != i) p *= ts.z[i] - ts.z[j];
      const double scale = std::max(1.0, max_abs(K[i]));
      CHECK(max_abs(K[i] - p * b1_residue(ts, i)) <= 1e-8 * scale);
      CHECK(max_abs(R * K[i] - K[i].transpose() * R) <= 1e-8 * scale * std::max(1.0, max_abs(R)));
      for (int j = 0; j < ts.n(); ++j)
        CHECK(max_abs(K[i] * K[j] - K[j] * K[i]) <= 1e-8 * scale * std::max(1.0, max_abs(K[j])));
    }
  }
}

TEST_CASE("twisted forms") {
  const TensorSpace one{2, {0.3}, {2.0, -4.0}};
  CMat inv(2, 2);
  inv << 0.5, 0.0, 0.0, -0.25;
  CHECK(max_abs(twist_G(one, 1) - inv) <= 1e-15);
  CHECK(max_abs(twist_G(one, 0) - CMat::Identity(2, 2)) == 0.0);

  Rng rng(25);
  TensorSpace ts{3, {2.0, -0.4, 0.9}, random_twist(rng, 3, false)};
  for (int s = 0; s <= 3; ++s) CHECK(twist_G(ts, s).imag().cwiseAbs().maxCoeff() <= 1e-10);

  // R(1) = 1 + P is singular on antisymmetric vectors
  const TensorSpace resonant{2, {1.0, 0.0}, {1.0, 2.0}};
  CHECK_THROWS_WITH_AS(twist_G(resonant, 1), doctest::Contains("near-singular K product"), MathError);
  CHECK_THROWS_AS(twist_G(resonant, 3), MathError);
}

TEST_CASE("positivity under the separation hypotheses") {
  int literal_negative = 0;
  for (int t = 0; t < 100; ++t) {
    Rng rng(26, t);
    const int N = rng.integer(1, 3), n = rng.integer(1, 3);
    TensorSpace ts{N, {}, random_twist(rng, N, false)};
    for (double z : gapped_run(rng, n, true)) ts.z.push_back(z);
    REQUIRE(untwisted_hypotheses(ts));
    const FormCertificate c = certify_form(ts, CMat::Identity(ts.dim(), ts.dim()));
    CHECK(c.symmetry_defect <= 1e-10);
    CHECK(c.min_eigenvalue > 0.0);

    std::reverse(ts.z.begin(), ts.z.end());
    literal_negative += certify_form(ts, CMat::Identity(ts.dim(), ts.dim())).min_eigenvalue < 0.0;

    const int s = rng.integer(0, n);
    TensorSpace tw{N, {}, random_twist(rng, N, true)};
    for (double z : gapped_run(rng, s, false)) tw.z.push_back(z);
    for (double z : gapped_run(rng, n - s, true)) tw.z.push_back(z);
    REQUIRE(twisted_hypotheses(tw, s));
    const FormCertificate g = certify_form(tw, twist_G(tw, s));
    CHECK(g.symmetry_defect <= 1e-10);
    CHECK(g.min_eigenvalue > 0.0);
  }
  // increasing points lose positivity once two sites carry N >= 2
  CHECK(literal_negative > 10);
}

TEST_CASE("Yangian form degenerates to the Shapovalov form") {
  for (int N : {2, 3}) {
    const TensorSpace ts{N, {2e6, 1e3, 0.0}, CVec(N, 1.0)};
    CMat G = big_R(ts);
    G /= (ts.z[0] - ts.z[1]) * (ts.z[0] - ts.z[2]) * (ts.z[1] - ts.z[2]);
    double off = 0.0;
    for (Eigen::Index i = 0; i < G.rows(); ++i)
      for (Eigen::Index j = 0; j < G.cols(); ++j)
        if (i != j) off = std::max(off, std::abs(G(i, j)));
    CHECK(off <= 1e-2);
    CHECK(std::abs(G(0, 0) - 1.0) <= 1e-2);
  }
}

TEST_CASE("positive forms come with real inverse solutions") {
  int checked = 0;
  for (int t = 0; t < 30; ++t) {
    Rng rng(27, t);
    const int N = rng.integer(2, 3), n = rng.integer(1, 3);
    TensorSpace ts{N, {}, random_twist(rng, N, false)};
    for (double z : gapped_run(rng, n, true)) ts.z.push_back(z);
    if (!certify_form(ts, CMat::Identity(ts.dim(), ts.dim())).positive_definite()) continue;
    InverseProblem p;
    p.kind = WronskiKind::discrete;
    p.params = ts.Q;
    p.degrees.assign(N, 0);
    for (int k = 0; k < n; ++k) ++p.degrees[rng.integer(0, N - 1)];
    p.targets = ts.z;
    const SolutionSet s = solve_inverse(p, SolverConfig{200, static_cast<uint64_t>(t)});
    CHECK_FALSE(s.possibly_incomplete);
    CHECK(reality_report(s, 1e-6).all_real());
    ++checked;
  }
  CHECK(checked == 30);
}
