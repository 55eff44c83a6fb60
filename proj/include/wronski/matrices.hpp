#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wronski/inverse.hpp"
#include "wronski/polynomial.hpp"

namespace wronski {

using CMat = Eigen::MatrixXcd;

enum class MatrixKind { Zd, Z, Qd };
std::string to_string(MatrixKind k);
// Case-insensitive: "zd" and "Zd" both parse.
MatrixKind matrix_kind_from_string(const std::string& s);

// Sites are the bases Q (Zd), exponents lambda (Z) or points z (Qd); weights
// are the diagonal a (Zd, Z) or the column weights b (Qd).
struct StructuredParams {
  MatrixKind kind = MatrixKind::Zd;
  CVec sites;
  CVec weights;
};

// Minimum gap for distinct sites and for z_i - z_j away from 1.
inline constexpr double kSiteMargin = 1e-10;

// Throws MathError for size mismatch, empty input, coincident sites, a zero
// base (Zd) or z_i - z_j = 1 (Qd).
void validate(const StructuredParams& p);
CMat build(const StructuredParams& p);

struct VandermondeCheck {
  CMat M;                       // closed form
  double residual = 0.0;        // max|M - Sbar S^-1| / max(1, max|M|)
  double det_residual = 0.0;    // |det S - prod_{i<j}(Q_j - Q_i)|, relative
};
// Throws MathError("near-coincident bases") when two bases are closer than
// kSiteMargin, and for a zero base.
VandermondeCheck vandermonde_m(const CVec& Q);

// max|A + B - D^-1 M D - Zd| / max(1, max|Zd|) with M = Sbar S^-1 computed
// numerically.
double conjugation_check(const CVec& Q, const CVec& a);
// Spectral distance between Zd and A + B - M, which are similar.
double conjugation_spectrum_distance(const CVec& Q, const CVec& a);

// Diagonal shifts that turn structured weights into Wronskian roots:
// a_i + m_ii (Zd), a_i + sum 1/(lambda_i - lambda_s) (Z),
// b_i prod (z_i - z_s)/(z_i - z_s - 1) (Qd).
CVec shifted_weights(const StructuredParams& p);

// Eigenvalues of Qd equal the Wronskian roots times this factor.
inline constexpr double kQdScale = 1.0;

inline constexpr double kSpectrumTol = 1e-7;

struct SpectrumCheck {
  CVec eigenvalues;  // sorted lexicographically
  CVec roots;        // sorted lexicographically
  double distance = 0.0;
  bool ok() const { return distance <= kSpectrumTol; }
};
// Qd requires real sites.
SpectrumCheck spectrum_vs_wronskian(const StructuredParams& p);
// Least-distance scale s with eig(Qd) = s·roots, searched among the N-th
// roots of det(Qd)/prod(roots).
cplx fit_qd_scale(const StructuredParams& p);

struct RealityVerdict {
  CVec eigenvalues;
  bool eigenvalues_real = false;
  bool hypotheses = false;  // eigenvalue reality plus the separation/sign test
  bool weights_real = false;
  std::string claim;        // which statement applies, or "no claim"

  // A counterexample would have the hypotheses without real weights.
  bool consistent() const { return !hypotheses || weights_real; }
};
// Sites must be real.
RealityVerdict reality_verdict(const StructuredParams& p, double tol);

enum class CMMode { multiplicative, additive };
std::string to_string(CMMode m);
CMMode cm_mode_from_string(const std::string& s);

struct CMPair {
  CMat Z;
  CMat Q;
  CMMode mode = CMMode::multiplicative;
};

inline constexpr double kRankOneTol = 1e-9;

struct RankOneResult {
  bool holds = false;
  CMat K;
  double ratio = 0.0;  // second singular value over the largest
};
// K = 1 - Z + Q^-1 Z Q (multiplicative) or K = 1 - [Q, Z] (additive).
// Throws MathError("singular Q") in multiplicative mode.
RankOneResult cm_rank_one(const CMPair& pair);

// Entrywise residuals of the structured rank-one identities:
// [diag(lambda), Z] = 1 - ones, and Qd·diag(z) - diag(z)·Qd - Qd = -ones·b^T.
double z_commutator_residual(const CVec& lambda, const CVec& a);
double qd_rank_one_residual(const CVec& z, const CVec& b);

struct RealForm {
  std::optional<CMat> C;
  std::string failure;       // empty when C is set
  double imag_residual = 0.0;  // ||Im(C^-1 Q C)|| + ||Im(C^-1 Z C)||, max-entry
  CVec weights;              // diagonal of the structured Z in the new basis
};
inline constexpr double kRealFormTol = 1e-8;
// Throws MathError("semisimple case only") if Q has repeated eigenvalues.
RealForm realize_real_form(const CMPair& pair, double tol = 1e-6);

}  // namespace wronski
