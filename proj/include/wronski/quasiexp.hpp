#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wronski/polynomial.hpp"

namespace wronski {

enum class Mode { multiplicative, exponent };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

// p(x)·param^x in multiplicative mode, p(x)·exp(param·x) in exponent mode.
struct Member {
  cplx param;
  Polynomial poly;
};

struct QuasiExpSpace {
  Mode mode = Mode::multiplicative;
  std::vector<Member> members;

  size_t dim() const { return members.size(); }
};

// Members whose params agree within this relative tolerance share a group.
inline constexpr double kParamMergeTol = 1e-12;
// Rank threshold relative to the largest singular value / pivot.
inline constexpr double kRankTol = 1e-10;

// Indices of members grouped by param, groups in order of first appearance.
std::vector<std::vector<int>> group_by_param(const QuasiExpSpace& V);

// Reduced echelon basis per param group: monic parts, strictly increasing
// degrees, and zero coefficient at every other member's leading degree.
// Throws MathError("degenerate space") for dependent members.
QuasiExpSpace standard_basis(const QuasiExpSpace& V);

struct WronskianValue {
  Polynomial monic;
  cplx kappa = 0.0;
  // Multiplicative mode: product of bases B, full value kappa·w(x)·B^x.
  // Exponent mode: sum of exponents S, full value kappa·w(x)·exp(S·x).
  Mode prefactor_kind = Mode::multiplicative;
  cplx prefactor = 1.0;

  // kappa·monic, the polynomial part without the exponential factor.
  Polynomial scaled() const { return monic * kappa; }
};

// Polynomial part of the determinant before normalization.
Polynomial raw_discrete_wronskian(const QuasiExpSpace& V, double h);
Polynomial raw_wronskian(const QuasiExpSpace& V);

// Degree of the Wronskian of the given space, read off its standard basis.
int wronskian_degree(const QuasiExpSpace& V);

// Discrete Wronskian det[f_i(x + (j-1)h)]. Multiplicative mode needs h == 1.
// Throws MathError("identically zero Wronskian") for dependent members.
WronskianValue discrete_wronskian(const QuasiExpSpace& V, double h = 1.0);
// Differential Wronskian det[f_i^{(j-1)}], exponent mode.
WronskianValue wronskian(const QuasiExpSpace& V);

// n = l·N - sum n_i^2 + 1 where N = sum n_i; generic Wronskian degree n - 1.
// Parts are polynomials of degree < l, so each n_i must be at most l.
int expected_degree(int l, const std::vector<int>& parts);

// {f(xh) : f in V}: bases exp(h·lambda_i), parts p_i(xh) made monic.
QuasiExpSpace rescale(const QuasiExpSpace& V, double h);

// p(x, Q, Qs) = x^d + sum_j prod_{r<j}(Q - Qs_r) q_j(x), with Qs the N-vector
// of bases and the base pattern repeated n_i times.
struct ConfluentFamily {
  int d = 0;
  std::vector<Polynomial> q;  // N entries, each of degree < d
  CVec base_pattern;          // Q^0_1..Q^0_k
  std::vector<int> mult;      // n_1..n_k, sum = N

  int N() const { return static_cast<int>(q.size()); }
  // Q^0 repeated per multiplicity.
  CVec expanded_bases() const;
  // Bases Q^0_i + r·h for r = 0..n_i-1.
  CVec perturbed_bases(double h) const;
  // p as a polynomial in Q with polynomial-in-x coefficients.
  std::vector<Polynomial> p_in_Q(const CVec& Qs) const;
  Polynomial p_at(cplx Q, const CVec& Qs) const;
};

void validate(const ConfluentFamily& cf);

// W(x, Qs): the discrete Wronskian of p(x, Q_i, Qs)·Q_i^x with the
// exponential factor removed and divided by prod_{i<j}(Q_j - Q_i).
// Throws MathError("use confluent_limit") for coincident bases.
Polynomial confluent_wronskian(const ConfluentFamily& cf, const CVec& Qs);

struct ConfluentLimit {
  QuasiExpSpace basis;  // p_i^0 with base Q^0_{m(i)}
  // Scalar part of c(Q^0); the exponential part prod (Q^0_i)^{-n_i x}
  // cancels against the Wronskian prefactor.
  cplx c = 1.0;
};
ConfluentLimit confluent_limit(const ConfluentFamily& cf);

// n-th forward difference quotient of f with step h.
cplx tau(const std::function<cplx(cplx)>& f, cplx Q, double h, int n = 1);

// Richardson extrapolation to h -> 0 of samples at h, h/2, h/4, ... assuming
// an error expansion in integer powers of h.
Polynomial richardson(const std::vector<Polynomial>& samples);

// W(x, Q^0) by evaluating W(x, Q^0_h) at h0·2^{-k}, k < levels, and
// extrapolating.
Polynomial confluent_extrapolated(const ConfluentFamily& cf, double h0, int levels);

}  // namespace wronski
