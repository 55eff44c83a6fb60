#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wronski/polynomial.hpp"
#include "wronski/quasiexp.hpp"

namespace wronski {

// x^z·p(x), log-free.
struct QPMember {
  double z = 0.0;
  Polynomial p;
};

struct QuasiPolySpace {
  std::vector<QPMember> members;
  size_t dim() const { return members.size(); }
};

// Pivot tolerance for valuation/degree triangularization.
inline constexpr double kPivotTol = 1e-10;
// Exponents closer than this modulo 1 share a class.
inline constexpr double kClassTol = 1e-9;

// Members whose exponents differ by integers, rewritten over a common
// x^{z0}: member i contributes x^{z_i - z0}·p_i(x).
struct ExponentClass {
  double z0 = 0.0;
  std::vector<int> index;
  std::vector<Polynomial> parts;
};
std::vector<ExponentClass> exponent_classes(const QuasiPolySpace& V);

// Exponents at 0 (z + valuation) and at infinity (z + degree) read from a
// triangularized member list; ascending.
std::vector<double> exponents_at_zero(const QuasiPolySpace& V);
std::vector<double> exponents_at_infinity(const QuasiPolySpace& V);

// x^z in V, lowest such z.
std::optional<double> find_monomial(const QuasiPolySpace& V);

struct QPWronskian {
  double r = 0.0;  // Wr = kappa·x^r·w(x)
  Polynomial w;    // monic, w(0) != 0
  cplx kappa = 0.0;
};
QPWronskian qp_wronskian(const QuasiPolySpace& V);

// A_0(x)·D_V = sum_j Abar_j(x)·(x d/dx)^j with Abar_n = A_0 monic.
struct FuchsianOperator {
  std::vector<Polynomial> by_order;  // index j = power of (x d/dx)

  int order() const { return static_cast<int>(by_order.size()) - 1; }
  // Coefficient of x^i (x d/dx)^j.
  cplx entry(int i, int j) const;
  // max_j deg Abar_j
  int s() const;
  // Applies the operator to x^z·p and returns the polynomial part of the
  // result (the factor x^z is dropped).
  Polynomial apply(double z, const Polynomial& p) const;
};

// Defined for every independent V, monomial members included.
FuchsianOperator fuchsian_operator(const QuasiPolySpace& V);

struct IndicialPair {
  Polynomial chi0;
  Polynomial chi_inf;
};
IndicialPair indicial_polynomials(const FuchsianOperator& op);
IndicialPair indicial_from_exponents(const QuasiPolySpace& V);

// Minimal monic Y with Y(a-1)·chi0(a) = Y(a)·chi_inf(a).
// Throws MathError("space not unramified-compatible") when no chain pairing
// exists.
Polynomial compute_Y(const Polynomial& chi0, const Polynomial& chi_inf);
// Max coefficient of Y(a-1)·chi0(a) - Y(a)·chi_inf(a) relative to the
// largest coefficient of the two products.
double y_identity_residual(const Polynomial& Y, const Polynomial& chi0, const Polynomial& chi_inf);

// (x d/dx - z)V for x^z in V; V unchanged when it has no monomial.
QuasiPolySpace reduce_degenerate(const QuasiPolySpace& V);

enum class ShiftSign { minus, plus };
enum class Ordering { x_left, shift_left };

struct DualConvention {
  ShiftSign sign = ShiftSign::plus;
  Ordering ordering = Ordering::x_left;
  int y_shift = 1;  // Wr^d(V*) = Y_V(x - y_shift)
};
std::string to_string(ShiftSign s);
std::string to_string(Ordering o);
ShiftSign shift_sign_from_string(const std::string& s);
Ordering ordering_from_string(const std::string& s);

// f(x) -> sum_i c_i(x)·f(x + sign·i)
struct DifferenceOperator {
  int sign = -1;
  std::vector<Polynomial> by_shift;

  int order() const;
  // Coefficient of x^j in front of the i-th shift.
  cplx entry(int i, int j) const;
  // Polynomial part of D(p·Q^x) divided by Q^x.
  Polynomial apply(cplx Q, const Polynomial& p) const;
};

DifferenceOperator bispectral_dual(const FuchsianOperator& op, ShiftSign sign, Ordering ordering);
// Dual of D_V for non-degenerate V. Throws MathError for V containing a
// monomial x^z; reduce_degenerate removes those first.
DifferenceOperator dual_operator(const QuasiPolySpace& V, const DualConvention& conv);

// Quasi-exponential kernel modulo 1-periodic factors: bases and polynomial
// parts of degree <= degree_bound. Throws KernelDeficit when fewer than
// order() independent solutions are found.
QuasiExpSpace qe_kernel(const DifferenceOperator& D, int degree_bound);

class KernelDeficit : public MathError {
 public:
  KernelDeficit(const std::string& msg, QuasiExpSpace partial)
      : MathError(msg), partial_(std::move(partial)) {}
  const QuasiExpSpace& partial() const { return partial_; }

 private:
  QuasiExpSpace partial_;
};

struct DualityCheck {
  Polynomial Y;
  Polynomial wr_dual;  // monic Wr^d(V*)
  double y_distance = 0.0;  // coefficientwise, against Y(x - y_shift)
  double base_distance = 0.0;  // dual bases vs nonzero roots of Wr(V)
  bool ok = false;
};
DualityCheck check_duality(const QuasiPolySpace& V, const DualConvention& conv, double tol = 1e-6);

struct CalibrationResult {
  DualConvention convention;
  std::vector<std::string> log;  // one line per variant tried
};
// Tries every sign/ordering variant and integer shift in [-2, 2] against the
// analytic one-dimensional case and one random two-dimensional case; the
// unique consistent variant wins. Throws MathError if none or several pass.
CalibrationResult calibrate_dual_convention(uint64_t seed);

DualConvention load_dual_convention(const std::string& path);
void save_dual_convention(const DualConvention& c, const std::string& path);

}  // namespace wronski
