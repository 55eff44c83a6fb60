#include "wronski/quasipoly.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "wronski/determinant.hpp"

namespace wronski {

namespace {

double frac_distance(double a, double b) {
  double d = a - b;
  return std::abs(d - std::round(d));
}

struct Echelon {
  std::vector<int> pivots;           // sorted ascending
  std::vector<Polynomial> rows;      // reduced rows, one per pivot, same order
};

// Gauss-Jordan on coefficient rows, scanning columns from the top degree
// down (from_top) or from degree 0 up. Rows that reduce to zero are dropped.
Echelon echelon(const std::vector<Polynomial>& in, bool from_top) {
  const int n = static_cast<int>(in.size());
  int maxdeg = -1;
  for (auto& p : in) maxdeg = std::max(maxdeg, p.degree());
  Echelon out;
  if (n == 0 || maxdeg < 0) return out;
  Eigen::MatrixXcd A(n, maxdeg + 1);
  for (int r = 0; r < n; ++r) {
    double nrm = std::max(in[r].max_abs_coeff(), 1e-300);
    for (int k = 0; k <= maxdeg; ++k) A(r, k) = in[r].coeff(k) / nrm;
  }
  const double tol = kPivotTol * A.cwiseAbs().maxCoeff();
  std::vector<char> used(n, 0);
  std::vector<std::pair<int, int>> piv;  // (col, row)
  for (int t = 0; t <= maxdeg; ++t) {
    int col = from_top ? maxdeg - t : t;
    int best = -1;
    double bv = tol;
    for (int r = 0; r < n; ++r)
      if (!used[r] && std::abs(A(r, col)) > bv) {
        bv = std::abs(A(r, col));
        best = r;
      }
    if (best < 0) continue;
    A.row(best) /= A(best, col);
    for (int r = 0; r < n; ++r)
      if (r != best) A.row(r) -= A(r, col) * A.row(best);
    used[best] = 1;
    piv.push_back({col, best});
  }
  std::sort(piv.begin(), piv.end());
  for (auto [col, row] : piv) {
    CVec c(maxdeg + 1);
    for (int k = 0; k <= maxdeg; ++k) c[k] = std::abs(A(row, k)) <= tol ? cplx(0.0) : A(row, k);
    c[col] = 1.0;
    out.pivots.push_back(col);
    out.rows.push_back(Polynomial(std::move(c)));
  }
  return out;
}

// (x d/dx)^j (x^z p) = x^z · sum_k (z+k)^j p_k x^k
Polynomial euler_power(double z, const Polynomial& p, int j) {
  CVec c = p.coeffs();
  for (size_t k = 0; k < c.size(); ++k) c[k] *= std::pow(z + static_cast<double>(k), j);
  return Polynomial(std::move(c));
}

std::vector<double> class_exponents(const QuasiPolySpace& V, bool at_zero) {
  std::vector<double> out;
  for (auto& cl : exponent_classes(V)) {
    Echelon e = echelon(cl.parts, !at_zero);
    if (e.pivots.size() != cl.parts.size()) throw MathError("dependent members");
    for (int p : e.pivots) out.push_back(cl.z0 + p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Splits x^{z0}·P into (z0 + val, P / x^val).
QPMember normalize_member(double z0, const Polynomial& P) {
  int v = P.valuation();
  CVec c(P.coeffs().begin() + v, P.coeffs().end());
  return {z0 + v, Polynomial(std::move(c))};
}

}  // namespace

std::vector<ExponentClass> exponent_classes(const QuasiPolySpace& V) {
  std::vector<ExponentClass> cls;
  for (int i = 0; i < static_cast<int>(V.dim()); ++i) {
    double z = V.members[i].z;
    bool placed = false;
    for (auto& c : cls)
      if (frac_distance(z, c.z0) <= kClassTol) {
        c.index.push_back(i);
        c.z0 = std::min(c.z0, z);
        placed = true;
        break;
      }
    if (!placed) cls.push_back({z, {i}, {}});
  }
  for (auto& c : cls)
    for (int i : c.index) {
      int off = static_cast<int>(std::lround(V.members[i].z - c.z0));
      c.parts.push_back(V.members[i].p * Polynomial::monomial(off));
    }
  return cls;
}

std::vector<double> exponents_at_zero(const QuasiPolySpace& V) { return class_exponents(V, true); }
std::vector<double> exponents_at_infinity(const QuasiPolySpace& V) { return class_exponents(V, false); }

std::optional<double> find_monomial(const QuasiPolySpace& V) {
  std::optional<double> best;
  for (auto& cl : exponent_classes(V)) {
    const int n = static_cast<int>(cl.parts.size());
    int maxdeg = -1;
    for (auto& p : cl.parts) maxdeg = std::max(maxdeg, p.degree());
    if (maxdeg < 0) continue;
    Eigen::MatrixXcd A(maxdeg + 1, n);
    for (int r = 0; r < n; ++r) {
      double nrm = std::max(cl.parts[r].max_abs_coeff(), 1e-300);
      for (int k = 0; k <= maxdeg; ++k) A(k, r) = cl.parts[r].coeff(k) / nrm;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int k = 0; k < sv.size(); ++k)
      if (sv(k) > kPivotTol * sv(0)) ++rank;
    Eigen::MatrixXcd U = svd.matrixU().leftCols(rank);
    for (int k = 0; k <= maxdeg; ++k) {
      // distance of e_k from the column span
      double proj = U.row(k).squaredNorm();
      if (1.0 - proj <= 1e-14) {
        double z = cl.z0 + k;
        if (!best || z < *best) best = z;
        break;
      }
    }
  }
  return best;
}

QPWronskian qp_wronskian(const QuasiPolySpace& V) {
  const int n = static_cast<int>(V.dim());
  if (n == 0) return {0.0, Polynomial::constant(1.0), 1.0};
  auto e0 = exponents_at_zero(V);
  auto einf = exponents_at_infinity(V);
  double zsum = 0.0, s0 = 0.0, sinf = 0.0;
  for (auto& m : V.members) zsum += m.z;
  for (double e : e0) s0 += e;
  for (double e : einf) sinf += e;
  const int m0 = static_cast<int>(std::lround(s0 - zsum));
  const int M = static_cast<int>(std::lround(sinf - zsum));
  std::vector<std::vector<Polynomial>> P(n, std::vector<Polynomial>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) P[i][j] = euler_power(V.members[i].z, V.members[i].p, j);
  Polynomial det = laplace_det(P, Polynomial());
  cplx kappa = det.coeff(M);
  if (std::abs(kappa) <= kPivotTol * std::max(det.max_abs_coeff(), 1e-300))
    throw MathError("dependent members");
  CVec c(M - m0 + 1);
  for (int k = m0; k <= M; ++k) c[k - m0] = det.coeff(k) / kappa;
  c[M - m0] = 1.0;
  return {s0 - n * (n - 1) / 2.0, Polynomial(std::move(c)), kappa};
}

cplx FuchsianOperator::entry(int i, int j) const {
  if (j < 0 || j >= static_cast<int>(by_order.size())) return 0.0;
  return by_order[j].coeff(i);
}

int FuchsianOperator::s() const {
  int s = 0;
  for (auto& a : by_order) s = std::max(s, a.degree());
  return s;
}

Polynomial FuchsianOperator::apply(double z, const Polynomial& p) const {
  Polynomial acc;
  for (int j = 0; j <= order(); ++j) acc += by_order[j] * euler_power(z, p, j);
  return acc;
}

FuchsianOperator fuchsian_operator(const QuasiPolySpace& V) {
  const int n = static_cast<int>(V.dim());
  if (n == 0) throw MathError("empty space");
  if (n > 8) throw MathError("dimension too large for cofactor expansion");
  auto e0 = exponents_at_zero(V);
  auto einf = exponents_at_infinity(V);
  double zsum = 0.0, s0 = 0.0, sinf = 0.0;
  for (auto& m : V.members) zsum += m.z;
  for (double e : e0) s0 += e;
  for (double e : einf) sinf += e;
  const int m0 = static_cast<int>(std::lround(s0 - zsum));
  const int M = static_cast<int>(std::lround(sinf - zsum));

  // Cofactors of the last row of det[(x d/dx)^j f_i ; (x d/dx)^j f].
  std::vector<std::vector<Polynomial>> P(n, std::vector<Polynomial>(n + 1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= n; ++j) P[i][j] = euler_power(V.members[i].z, V.members[i].p, j);
  std::vector<Polynomial> C(n + 1);
  for (int j = 0; j <= n; ++j) {
    std::vector<std::vector<Polynomial>> minor(n, std::vector<Polynomial>());
    for (int i = 0; i < n; ++i)
      for (int c = 0; c <= n; ++c)
        if (c != j) minor[i].push_back(P[i][c]);
    C[j] = laplace_det(minor, Polynomial());
    if ((n + j) % 2) C[j] = -C[j];
  }
  cplx kappa = C[n].coeff(M);
  if (std::abs(kappa) <= kPivotTol * std::max(C[n].max_abs_coeff(), 1e-300))
    throw MathError("dependent members");

  FuchsianOperator op;
  op.by_order.resize(n + 1);
  for (int j = 0; j <= n; ++j) {
    CVec c(M - m0 + 1);
    for (int k = m0; k <= M; ++k) c[k - m0] = C[j].coeff(k) / kappa;
    if (j == n) c[M - m0] = 1.0;
    op.by_order[j] = Polynomial(std::move(c));
  }

  // Remove roots shared by every coefficient.
  CVec rs = M > m0 ? roots(op.by_order[n]) : CVec{};
  for (cplx rho : rs) {
    bool common = true;
    for (int j = 0; j < n && common; ++j) {
      const auto& a = op.by_order[j];
      double scale = 0.0, pw = 1.0;
      for (auto& c : a.coeffs()) {
        scale += std::abs(c) * pw;
        pw *= std::abs(rho);
      }
      if (std::abs(a(rho)) > 1e-8 * std::max(scale, 1e-300)) common = false;
    }
    if (!common) continue;
    for (auto& a : op.by_order) a = a.divmod(Polynomial::linear_root(rho)).first;
    op.by_order[n] = op.by_order[n].monic();
  }
  return op;
}

IndicialPair indicial_polynomials(const FuchsianOperator& op) {
  const int n = op.order();
  double scale = 0.0;
  for (auto& a : op.by_order) scale = std::max(scale, a.max_abs_coeff());
  const double tol = 1e-12 * scale;
  auto row_nonzero = [&](int i) {
    for (int j = 0; j <= n; ++j)
      if (std::abs(op.entry(i, j)) > tol) return true;
    return false;
  };
  int imin = -1, imax = -1;
  for (int i = 0; i <= op.s(); ++i)
    if (row_nonzero(i)) {
      if (imin < 0) imin = i;
      imax = i;
    }
  if (imin < 0) throw MathError("zero operator");
  auto row_poly = [&](int i) {
    CVec c(n + 1);
    for (int j = 0; j <= n; ++j) c[j] = op.entry(i, j);
    Polynomial p(std::move(c));
    if (p.degree() != n || std::abs(p.leading()) <= tol) throw MathError("non-Fuchsian operator table");
    return p.monic();
  };
  return {row_poly(imin), row_poly(imax)};
}

IndicialPair indicial_from_exponents(const QuasiPolySpace& V) {
  CVec r0, rinf;
  for (double e : exponents_at_zero(V)) r0.push_back(e);
  for (double e : exponents_at_infinity(V)) rinf.push_back(e);
  return {from_roots(r0), from_roots(rinf)};
}

Polynomial compute_Y(const Polynomial& chi0, const Polynomial& chi_inf) {
  if (chi0.degree() != chi_inf.degree()) throw MathError("indicial polynomials differ in degree");
  CVec r0 = roots(chi0), rinf = roots(chi_inf);
  std::vector<char> used0(r0.size(), 0);
  CVec left_inf;
  for (cplx u : rinf) {
    int hit = -1;
    double bd = 1e-7 * (1.0 + std::abs(u));
    for (size_t k = 0; k < r0.size(); ++k)
      if (!used0[k] && std::abs(u - r0[k]) <= bd) {
        bd = std::abs(u - r0[k]);
        hit = static_cast<int>(k);
      }
    if (hit >= 0)
      used0[hit] = 1;
    else
      left_inf.push_back(u);
  }
  CVec left0;
  for (size_t k = 0; k < r0.size(); ++k)
    if (!used0[k]) left0.push_back(r0[k]);

  const double tol = 1e-6;
  auto same_class = [&](cplx a, cplx b) {
    return frac_distance(a.real(), b.real()) <= tol * (1.0 + std::abs(a)) &&
           std::abs(a.imag() - b.imag()) <= tol * (1.0 + std::abs(a));
  };
  std::vector<char> done0(left0.size(), 0), doneinf(left_inf.size(), 0);
  CVec yroots;
  for (size_t a = 0; a < left0.size(); ++a) {
    if (done0[a]) continue;
    std::vector<double> vs, us;
    double imag = left0[a].imag();
    for (size_t b = a; b < left0.size(); ++b)
      if (!done0[b] && same_class(left0[a], left0[b])) {
        done0[b] = 1;
        vs.push_back(left0[b].real());
      }
    for (size_t b = 0; b < left_inf.size(); ++b)
      if (!doneinf[b] && same_class(left0[a], left_inf[b])) {
        doneinf[b] = 1;
        us.push_back(left_inf[b].real());
      }
    if (vs.size() != us.size()) throw MathError("space not unramified-compatible");
    std::sort(vs.begin(), vs.end());
    std::sort(us.begin(), us.end());
    for (size_t k = 0; k < vs.size(); ++k) {
      double d = us[k] - vs[k];
      long steps = std::lround(d);
      if (steps < 1 || std::abs(d - steps) > tol * (1.0 + std::abs(us[k])))
        throw MathError("space not unramified-compatible");
      for (long t = 0; t < steps; ++t) yroots.push_back(cplx(vs[k] + t, imag));
    }
  }
  for (char d : doneinf)
    if (!d) throw MathError("space not unramified-compatible");
  return from_roots(sorted_lex(yroots));
}

double y_identity_residual(const Polynomial& Y, const Polynomial& chi0, const Polynomial& chi_inf) {
  Polynomial lhs = Y.shifted(-1.0) * chi0;
  Polynomial rhs = Y * chi_inf;
  double scale = std::max({1.0, lhs.max_abs_coeff(), rhs.max_abs_coeff()});
  return coeff_distance(lhs, rhs) / scale;
}

QuasiPolySpace reduce_degenerate(const QuasiPolySpace& V) {
  auto mono = find_monomial(V);
  if (!mono) return V;
  const double z = *mono;
  QuasiPolySpace out;
  for (auto& cl : exponent_classes(V)) {
    if (frac_distance(cl.z0, z) > kClassTol) {
      for (int i : cl.index) {
        const auto& m = V.members[i];
        out.members.push_back({m.z, m.p.euler() + m.p * cplx(m.z - z)});
      }
      continue;
    }
    std::vector<Polynomial> mapped;
    for (auto& P : cl.parts) mapped.push_back(P.euler() + P * cplx(cl.z0 - z));
    Echelon e = echelon(mapped, true);
    if (e.rows.size() + 1 != cl.parts.size()) throw MathError("dependent members");
    for (auto& row : e.rows) out.members.push_back(normalize_member(cl.z0, row));
  }
  return out;
}

}  // namespace wronski
