#pragma once

#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wronski {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

// Raised for violated preconditions of numerical operations. The message is
// part of the public contract; tests match on it.
class MathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense complex polynomial, coefficients in ascending degree.
// The zero polynomial has an empty coefficient vector after normalize().
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(CVec coeffs);
  Polynomial(std::initializer_list<cplx> coeffs);

  static Polynomial constant(cplx c);
  static Polynomial monomial(int degree, cplx c = 1.0);
  // x - r
  static Polynomial linear_root(cplx r);

  const CVec& coeffs() const { return c_; }
  CVec& coeffs() { return c_; }
  // Degree of the highest stored nonzero coefficient; -1 for zero.
  int degree() const;
  bool is_zero() const { return degree() < 0; }
  cplx coeff(int k) const;
  cplx leading() const;
  double max_abs_coeff() const;

  // Drops trailing coefficients with |c| <= tol·scale, where scale is the
  // largest coefficient magnitude (exact zeros only when tol == 0).
  Polynomial& normalize(double tol = 0.0);
  Polynomial normalized(double tol = 0.0) const;
  // Keeps coefficients of degree <= d.
  Polynomial truncated(int d) const;
  Polynomial monic() const;

  cplx operator()(cplx x) const;
  Polynomial derivative() const;
  // p(x + s)
  Polynomial shifted(cplx s) const;
  // p(a·x)
  Polynomial scaled_argument(cplx a) const;
  // x·p'(x)
  Polynomial euler() const;
  // Lowest index with a nonzero coefficient; -1 for zero.
  int valuation(double tol = 0.0) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  Polynomial& operator*=(cplx s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, cplx s) { return a *= s; }
  friend Polynomial operator*(cplx s, Polynomial a) { return a *= s; }

  // Quotient and remainder; divisor must be nonzero.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const;

  std::string to_string(int precision = 6) const;

 private:
  CVec c_;
};

// Max coefficientwise |a_k - b_k|.
double coeff_distance(const Polynomial& a, const Polynomial& b);
// coeff_distance divided by max(1, largest coefficient of b).
double coeff_distance_rel(const Polynomial& a, const Polynomial& b);

// Roots with multiplicity. Companion eigenvalues, then Newton polish.
CVec roots(const Polynomial& p);
Polynomial from_roots(const CVec& rs);

bool is_real(cplx v, double tol);
std::vector<bool> classify_real(const CVec& values, double tol);

struct RootMatch {
  std::vector<std::pair<int, int>> pairs;  // (index in a, index in b)
  double max_distance = 0.0;
};
// Greedy minimal-distance pairing after lexicographic sort by (Re, Im).
// Sizes must agree.
RootMatch match_roots(const CVec& a, const CVec& b);

// Sort by (Re, Im) for deterministic output.
CVec sorted_lex(CVec v);

}  // namespace wronski
