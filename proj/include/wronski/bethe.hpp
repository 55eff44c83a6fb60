#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wronski/polynomial.hpp"

namespace wronski {

using CMat = Eigen::MatrixXcd;

inline constexpr int kMaxTensorDim = 4096;

// (C^N)^{⊗n} with evaluation points z and diagonal twist Q. Basis index
// sum_i a_i N^(n-1-i) for digits a_i in [0, N): site 0 is the most
// significant digit. Sites are 0-based throughout.
struct TensorSpace {
  int N = 2;
  CVec z;  // one per site
  CVec Q;  // one per local basis vector

  int n() const { return static_cast<int>(z.size()); }
  int dim() const;
};

// Throws MathError for N < 1, n < 1, Q of the wrong length, a zero Q entry,
// or N^n above kMaxTensorDim.
void validate(const TensorSpace& ts);

// m (N x N) acting on site i.
CMat site_op(const TensorSpace& ts, int i, const CMat& m);
// Flip of sites i and j.
CMat flip(const TensorSpace& ts, int i, int j);
// x·Id + P on sites i, j. Throws MathError for i == j or out-of-range sites.
CMat site_R(const TensorSpace& ts, cplx x, int i, int j);

// R^(n-2,n-1)(z_{n-2}-z_{n-1}) ... R^(1,n-1) ... R^(1,2) · R^(0,n-1) ... R^(0,1),
// with R^(i,j) = R^(i,j)(z_i - z_j): for i descending, j descending from
// n-1 to i+1.
CMat big_R(const TensorSpace& ts);

// K_i = R^(i,i-1) ... R^(i,0) · Q^(i) · R^(i,n-1) ... R^(i,i+1), arguments
// z_i - z_j.
std::vector<CMat> qkz_hamiltonians(const TensorSpace& ts);

// B_1(x) = sum_a Q_a T_aa(x) on the tensor product, with T_ab(x) acting on
// one site as delta_ab + E_ba/(x - z) and the coproduct
// Delta(T_ab) = sum_c T_cb ⊗ T_ac. Throws MathError at a pole.
CMat transfer_B1(cplx x, const TensorSpace& ts);
// Res_{x=z_i} B_1(x): site i contributes its pole coefficient E_ba, the
// other sites are evaluated at z_i. Needs z_i distinct from the other z.
CMat b1_residue(const TensorSpace& ts, int i);

// G_s = (K_0 ... K_{s-1})^-1, G_0 = Id. Throws MathError("near-singular K
// product (condition ~c)") when the smallest over largest singular value is
// below 1e-12.
CMat twist_G(const TensorSpace& ts, int s);

struct FormCertificate {
  CMat gram;                  // big_R · g
  double symmetry_defect = 0.0;  // max|G - G^T| / max(1, max|G|)
  double min_eigenvalue = 0.0;   // of the symmetrized real Gram
  bool symmetric() const { return symmetry_defect <= 1e-10; }
  bool positive_definite() const { return min_eigenvalue > 0.0; }
};
// Throws MathError("hypotheses violated") when the Gram has imaginary
// entries above 1e-10 relative.
FormCertificate certify_form(const TensorSpace& ts, const CMat& g);

// Hypothesis checks on the evaluation points, in the orderings under which
// the forms are positive: z strictly decreasing with gaps > 1 for the
// untwisted form; for G_s, gaps > 1 increasing within sites [0, s) and
// decreasing within [s, n), with all Q positive.
bool untwisted_hypotheses(const TensorSpace& ts);
bool twisted_hypotheses(const TensorSpace& ts, int s);

}  // namespace wronski
