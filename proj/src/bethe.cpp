#include "wronski/bethe.hpp"

#include <cmath>
#include <cstdio>

namespace wronski {

int TensorSpace::dim() const {
  long long d = 1;
  for (int i = 0; i < n(); ++i) {
    d *= N;
    if (d > kMaxTensorDim) return kMaxTensorDim + 1;
  }
  return static_cast<int>(d);
}

void validate(const TensorSpace& ts) {
  if (ts.N < 1) throw MathError("local dimension must be positive");
  if (ts.n() < 1) throw MathError("at least one site required");
  if (static_cast<int>(ts.Q.size()) != ts.N) throw MathError("twist must have N entries");
  for (cplx q : ts.Q)
    if (q == 0.0) throw MathError("twist entries must be nonzero");
  if (ts.dim() > kMaxTensorDim) throw MathError("tensor space too large: N^n exceeds 4096");
}

namespace {

void check_site(const TensorSpace& ts, int i) {
  if (i < 0 || i >= ts.n()) throw MathError("site out of range");
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMat unit(int N, int a, int b) {
  CMat e = CMat::Zero(N, N);
  e(a, b) = 1.0;
  return e;
}

using Table = std::vector<std::vector<CMat>>;  // [a][b]

// Single-site T_ab: delta_ab·Id + w·E_ba, with delta dropped when pole_only.
Table site_table(int N, cplx w, bool pole_only) {
  Table t(N, std::vector<CMat>(N));
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      t[a][b] = w * unit(N, b, a);
      if (a == b && !pole_only) t[a][b] += CMat::Identity(N, N);
    }
  return t;
}

// T_ab on sites [0, n) from per-site tables via Delta(T_ab) = sum_c T_cb ⊗ T_ac,
// folding from the last site so the first site stays most significant.
CMat contract_B1(const TensorSpace& ts, const std::vector<Table>& sites) {
  const int N = ts.N;
  Table acc = sites.back();
  for (int k = ts.n() - 2; k >= 0; --k) {
    Table next(N, std::vector<CMat>(N));
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) {
        CMat sum = CMat::Zero(acc[0][0].rows() * N, acc[0][0].cols() * N);
        for (int c = 0; c < N; ++c) sum += kron(sites[k][c][b], acc[a][c]);
        next[a][b] = std::move(sum);
      }
    acc = std::move(next);
  }
  CMat B = CMat::Zero(ts.dim(), ts.dim());
  for (int a = 0; a < N; ++a) B += ts.Q[a] * acc[a][a];
  return B;
}

}  // namespace

CMat site_op(const TensorSpace& ts, int i, const CMat& m) {
  validate(ts);
  check_site(ts, i);
  if (m.rows() != ts.N || m.cols() != ts.N) throw MathError("local operator must be N x N");
  const int before = static_cast<int>(std::pow(ts.N, i));
  const int after = static_cast<int>(std::pow(ts.N, ts.n() - 1 - i));
  return kron(kron(CMat::Identity(before, before), m), CMat::Identity(after, after));
}

CMat flip(const TensorSpace& ts, int i, int j) {
  validate(ts);
  check_site(ts, i);
  check_site(ts, j);
  const int D = ts.dim();
  const int n = ts.n();
  std::vector<int> pw(n);
  for (int k = n - 1, p = 1; k >= 0; --k, p *= ts.N) pw[k] = p;
  CMat P = CMat::Zero(D, D);
  for (int idx = 0; idx < D; ++idx) {
    const int di = idx / pw[i] % ts.N;
    const int dj = idx / pw[j] % ts.N;
    const int swapped = idx + (dj - di) * pw[i] + (di - dj) * pw[j];
    P(swapped, idx) = 1.0;
  }
  return P;
}

CMat site_R(const TensorSpace& ts, cplx x, int i, int j) {
  if (i == j) throw MathError("R-matrix needs two distinct sites");
  CMat R = flip(ts, i, j);
  R.diagonal().array() += x;
  return R;
}

CMat big_R(const TensorSpace& ts) {
  validate(ts);
  const int n = ts.n();
  CMat R = CMat::Identity(ts.dim(), ts.dim());
  for (int i = n - 2; i >= 0; --i)
    for (int j = n - 1; j > i; --j) R = R * site_R(ts, ts.z[i] - ts.z[j], i, j);
  return R;
}

std::vector<CMat> qkz_hamiltonians(const TensorSpace& ts) {
  validate(ts);
  const int n = ts.n();
  CMat twist = CMat::Zero(ts.N, ts.N);
  for (int a = 0; a < ts.N; ++a) twist(a, a) = ts.Q[a];
  std::vector<CMat> out;
  for (int i = 0; i < n; ++i) {
    CMat K = CMat::Identity(ts.dim(), ts.dim());
    for (int j = i - 1; j >= 0; --j) K = K * site_R(ts, ts.z[i] - ts.z[j], i, j);
    K = K * site_op(ts, i, twist);
    for (int j = n - 1; j > i; --j) K = K * site_R(ts, ts.z[i] - ts.z[j], i, j);
    out.push_back(std::move(K));
  }
  return out;
}

CMat transfer_B1(cplx x, const TensorSpace& ts) {
  validate(ts);
  std::vector<Table> sites;
  for (cplx z : ts.z) {
    if (std::abs(x - z) == 0.0) throw MathError("pole of the transfer matrix at x = z_i");
    sites.push_back(site_table(ts.N, 1.0 / (x - z), false));
  }
  return contract_B1(ts, sites);
}

CMat b1_residue(const TensorSpace& ts, int i) {
  validate(ts);
  check_site(ts, i);
  std::vector<Table> sites;
  for (int k = 0; k < ts.n(); ++k) {
    if (k == i) {
      sites.push_back(site_table(ts.N, 1.0, true));
      continue;
    }
    if (std::abs(ts.z[i] - ts.z[k]) == 0.0) throw MathError("residue needs distinct evaluation points");
    sites.push_back(site_table(ts.N, 1.0 / (ts.z[i] - ts.z[k]), false));
  }
  return contract_B1(ts, sites);
}

CMat twist_G(const TensorSpace& ts, int s) {
  validate(ts);
  if (s < 0 || s > ts.n()) throw MathError("twist index out of range");
  const std::vector<CMat> K = qkz_hamiltonians(ts);
  CMat prod = CMat::Identity(ts.dim(), ts.dim());
  for (int i = 0; i < s; ++i) prod = prod * K[i];
  const Eigen::VectorXd sv = Eigen::BDCSVD<CMat>(prod).singularValues();
  const double rcond = sv(sv.size() - 1) / sv(0);
  if (!(rcond >= 1e-12)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "near-singular K product (condition ~%.3g)", 1.0 / rcond);
    throw MathError(buf);
  }
  return prod.partialPivLu().inverse();
}

FormCertificate certify_form(const TensorSpace& ts, const CMat& g) {
  validate(ts);
  if (g.rows() != ts.dim() || g.cols() != ts.dim()) throw MathError("operator size does not match the space");
  FormCertificate c;
  c.gram = big_R(ts) * g;
  const double scale = std::max(1.0, c.gram.cwiseAbs().maxCoeff());
  if (c.gram.imag().cwiseAbs().maxCoeff() > 1e-10 * scale) throw MathError("hypotheses violated");
  const Eigen::MatrixXd G = c.gram.real();
  c.symmetry_defect = (G - G.transpose()).cwiseAbs().maxCoeff() / scale;
  const Eigen::MatrixXd S = 0.5 * (G + G.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  c.min_eigenvalue = es.eigenvalues().minCoeff();
  return c;
}

namespace {

bool real_sites(const TensorSpace& ts) {
  for (cplx z : ts.z)
    if (z.imag() != 0.0) return false;
  return true;
}

// z_j - z_i > 1 for i < j in [lo, hi) when increasing, z_i - z_j > 1 otherwise.
bool gapped(const TensorSpace& ts, int lo, int hi, bool increasing) {
  for (int i = lo; i < hi; ++i)
    for (int j = i + 1; j < hi; ++j) {
      const double d = ts.z[j].real() - ts.z[i].real();
      if (!((increasing ? d : -d) > 1.0)) return false;
    }
  return true;
}

}  // namespace

bool untwisted_hypotheses(const TensorSpace& ts) {
  return real_sites(ts) && gapped(ts, 0, ts.n(), false);
}

bool twisted_hypotheses(const TensorSpace& ts, int s) {
  if (!real_sites(ts) || s < 0 || s > ts.n()) return false;
  for (cplx q : ts.Q)
    if (q.imag() != 0.0 || !(q.real() > 0.0)) return false;
  return gapped(ts, 0, s, true) && gapped(ts, s, ts.n(), false);
}

}  // namespace wronski
