#include "wronski/polynomial.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <tuple>

namespace wronski {

Polynomial::Polynomial(CVec coeffs) : c_(std::move(coeffs)) { normalize(); }

Polynomial::Polynomial(std::initializer_list<cplx> coeffs) : c_(coeffs) {
  normalize();
}

Polynomial Polynomial::constant(cplx c) { return Polynomial(CVec{c}); }

Polynomial Polynomial::monomial(int degree, cplx c) {
  CVec v(degree + 1, 0.0);
  v[degree] = c;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::linear_root(cplx r) { return Polynomial({-r, 1.0}); }

int Polynomial::degree() const {
  for (int k = static_cast<int>(c_.size()) - 1; k >= 0; --k)
    if (c_[k] != cplx(0.0)) return k;
  return -1;
}

cplx Polynomial::coeff(int k) const {
  return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : cplx(0.0);
}

cplx Polynomial::leading() const {
  int d = degree();
  return d < 0 ? cplx(0.0) : c_[d];
}

double Polynomial::max_abs_coeff() const {
  double m = 0.0;
  for (auto& v : c_) m = std::max(m, std::abs(v));
  return m;
}

Polynomial& Polynomial::normalize(double tol) {
  double thresh = tol > 0.0 ? tol * max_abs_coeff() : 0.0;
  while (!c_.empty() && std::abs(c_.back()) <= thresh) c_.pop_back();
  return *this;
}

Polynomial Polynomial::normalized(double tol) const {
  Polynomial p = *this;
  return p.normalize(tol);
}

Polynomial Polynomial::truncated(int d) const {
  CVec v(c_.begin(), c_.begin() + std::min<int>(c_.size(), std::max(d + 1, 0)));
  return Polynomial(std::move(v));
}

Polynomial Polynomial::monic() const {
  int d = degree();
  if (d < 0) throw MathError("monic of zero polynomial");
  Polynomial p = truncated(d);
  cplx lead = p.c_[d];
  for (auto& v : p.c_) v /= lead;
  p.c_[d] = 1.0;
  return p;
}

cplx Polynomial::operator()(cplx x) const {
  cplx acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return {};
  CVec v(c_.size() - 1);
  for (size_t k = 1; k < c_.size(); ++k) v[k - 1] = c_[k] * static_cast<double>(k);
  return Polynomial(std::move(v));
}

Polynomial Polynomial::shifted(cplx s) const {
  // Horner in the ring: p(x+s) = (...(c_n (x+s) + c_{n-1})(x+s) + ...)
  Polynomial acc;
  Polynomial xs({s, 1.0});
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc *= xs;
    acc += Polynomial::constant(*it);
  }
  return acc;
}

Polynomial Polynomial::scaled_argument(cplx a) const {
  CVec v = c_;
  cplx pw = 1.0;
  for (auto& x : v) {
    x *= pw;
    pw *= a;
  }
  return Polynomial(std::move(v));
}

Polynomial Polynomial::euler() const {
  CVec v = c_;
  for (size_t k = 0; k < v.size(); ++k) v[k] *= static_cast<double>(k);
  return Polynomial(std::move(v));
}

int Polynomial::valuation(double tol) const {
  double thresh = tol > 0.0 ? tol * max_abs_coeff() : 0.0;
  for (size_t k = 0; k < c_.size(); ++k)
    if (std::abs(c_[k]) > thresh) return static_cast<int>(k);
  return -1;
}

Polynomial Polynomial::operator-() const {
  Polynomial p = *this;
  for (auto& v : p.c_) v = -v;
  return p;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
  for (size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  return normalize();
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
  for (size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
  return normalize();
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.c_.empty() || b.c_.empty()) return {};
  CVec v(a.c_.size() + b.c_.size() - 1, 0.0);
  for (size_t i = 0; i < a.c_.size(); ++i)
    for (size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
  return Polynomial(std::move(v));
}

Polynomial& Polynomial::operator*=(const Polynomial& o) { return *this = *this * o; }

Polynomial& Polynomial::operator*=(cplx s) {
  for (auto& v : c_) v *= s;
  return normalize();
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& d) const {
  int dd = d.degree();
  if (dd < 0) throw MathError("division by zero polynomial");
  CVec r = c_;
  int n = degree();
  if (n < dd) return {Polynomial(), *this};
  CVec q(n - dd + 1, 0.0);
  cplx lead = d.c_[dd];
  for (int k = n - dd; k >= 0; --k) {
    cplx t = r[k + dd] / lead;
    q[k] = t;
    for (int j = 0; j <= dd; ++j) r[k + j] -= t * d.c_[j];
  }
  r.resize(dd);
  return {Polynomial(std::move(q)), Polynomial(std::move(r))};
}

std::string Polynomial::to_string(int precision) const {
  std::ostringstream os;
  os.precision(precision);
  if (is_zero()) return "0";
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    if (c_[k] == cplx(0.0)) continue;
    if (!first) os << " + ";
    first = false;
    if (c_[k].imag() == 0.0)
      os << c_[k].real();
    else
      os << "(" << c_[k].real() << (c_[k].imag() < 0 ? "-" : "+")
         << std::abs(c_[k].imag()) << "i)";
    if (k >= 1) os << "x";
    if (k >= 2) os << "^" << k;
  }
  return os.str();
}

double coeff_distance(const Polynomial& a, const Polynomial& b) {
  size_t n = std::max(a.coeffs().size(), b.coeffs().size());
  double m = 0.0;
  for (size_t k = 0; k < n; ++k)
    m = std::max(m, std::abs(a.coeff(static_cast<int>(k)) - b.coeff(static_cast<int>(k))));
  return m;
}

double coeff_distance_rel(const Polynomial& a, const Polynomial& b) {
  return coeff_distance(a, b) / std::max(1.0, b.max_abs_coeff());
}

namespace {

// Newton steps on a single root; keeps the iterate with the smallest |p|.
cplx polish(const Polynomial& p, const Polynomial& dp, cplx r) {
  cplx best = r;
  double best_val = std::abs(p(r));
  for (int it = 0; it < 20 && best_val > 0.0; ++it) {
    cplx d = dp(r);
    if (d == cplx(0.0)) break;
    r -= p(r) / d;
    double v = std::abs(p(r));
    if (!std::isfinite(v)) break;
    if (v < best_val) {
      best_val = v;
      best = r;
    } else if (it > 3) {
      break;
    }
  }
  return best;
}

}  // namespace

CVec roots(const Polynomial& p0) {
  Polynomial p = p0.normalized();
  int n = p.degree();
  if (n < 0) throw MathError("zero polynomial has no root multiset");
  if (n == 0) return {};
  Polynomial m = p.monic();
  // Exact zero roots are split off so the companion matrix stays well scaled.
  int v = m.valuation();
  CVec out(v, 0.0);
  int k = n - v;
  if (k == 0) return out;
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(k, k);
  for (int i = 1; i < k; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < k; ++i) comp(i, k - 1) = -m.coeff(v + i);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  if (es.info() != Eigen::Success) throw MathError("companion eigensolver failed");
  Polynomial dm = m.derivative();
  for (int i = 0; i < k; ++i) out.push_back(polish(m, dm, es.eigenvalues()(i)));
  return sorted_lex(out);
}

Polynomial from_roots(const CVec& rs) {
  Polynomial p = Polynomial::constant(1.0);
  for (auto r : rs) p *= Polynomial::linear_root(r);
  return p;
}

bool is_real(cplx v, double tol) {
  return std::abs(v.imag()) <= tol * (1.0 + std::abs(v.real()));
}

std::vector<bool> classify_real(const CVec& values, double tol) {
  if (!(tol > 0.0)) throw MathError("tolerance must be positive");
  std::vector<bool> out;
  out.reserve(values.size());
  for (auto v : values) out.push_back(is_real(v, tol));
  return out;
}

CVec sorted_lex(CVec v) {
  std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
    return std::make_tuple(a.real(), a.imag()) < std::make_tuple(b.real(), b.imag());
  });
  return v;
}

RootMatch match_roots(const CVec& a, const CVec& b) {
  if (a.size() != b.size()) throw MathError("root multisets differ in size");
  size_t n = a.size();
  auto lex = [](const CVec& v) {
    std::vector<int> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) {
      return std::make_tuple(v[i].real(), v[i].imag()) <
             std::make_tuple(v[j].real(), v[j].imag());
    });
    return idx;
  };
  std::vector<int> ia = lex(a), ib = lex(b);
  struct Cand {
    double d;
    int i, j;
  };
  std::vector<Cand> cands;
  cands.reserve(n * n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      cands.push_back({std::abs(a[ia[i]] - b[ib[j]]), static_cast<int>(i), static_cast<int>(j)});
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
    return std::tie(x.d, x.i, x.j) < std::tie(y.d, y.i, y.j);
  });
  std::vector<char> ua(n, 0), ub(n, 0);
  RootMatch res;
  for (auto& c : cands) {
    if (ua[c.i] || ub[c.j]) continue;
    ua[c.i] = ub[c.j] = 1;
    res.pairs.push_back({ia[c.i], ib[c.j]});
    res.max_distance = std::max(res.max_distance, c.d);
  }
  std::sort(res.pairs.begin(), res.pairs.end());
  return res;
}

}  // namespace wronski
