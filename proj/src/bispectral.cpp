#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "wronski/quasipoly.hpp"
#include "wronski/random.hpp"

namespace wronski {

std::string to_string(ShiftSign s) { return s == ShiftSign::plus ? "plus" : "minus"; }
std::string to_string(Ordering o) { return o == Ordering::x_left ? "x_left" : "shift_left"; }

ShiftSign shift_sign_from_string(const std::string& s) {
  if (s == "plus") return ShiftSign::plus;
  if (s == "minus") return ShiftSign::minus;
  throw MathError("unknown shift sign '" + s + "'");
}

Ordering ordering_from_string(const std::string& s) {
  if (s == "x_left") return Ordering::x_left;
  if (s == "shift_left") return Ordering::shift_left;
  throw MathError("unknown ordering '" + s + "'");
}

int DifferenceOperator::order() const {
  for (int i = static_cast<int>(by_shift.size()) - 1; i >= 0; --i)
    if (!by_shift[i].is_zero()) return i;
  return -1;
}

cplx DifferenceOperator::entry(int i, int j) const {
  if (i < 0 || i >= static_cast<int>(by_shift.size())) return 0.0;
  return by_shift[i].coeff(j);
}

Polynomial DifferenceOperator::apply(cplx Q, const Polynomial& p) const {
  Polynomial acc;
  for (int i = 0; i < static_cast<int>(by_shift.size()); ++i) {
    double step = static_cast<double>(sign * i);
    acc += by_shift[i] * p.shifted(step) * std::pow(Q, step);
  }
  return acc;
}

DifferenceOperator bispectral_dual(const FuchsianOperator& op, ShiftSign sign, Ordering ordering) {
  DifferenceOperator D;
  D.sign = sign == ShiftSign::plus ? 1 : -1;
  const int s = op.s();
  D.by_shift.assign(s + 1, Polynomial());
  for (int i = 0; i <= s; ++i)
    for (int j = 0; j <= op.order(); ++j) {
      cplx a = op.entry(i, j);
      if (a == cplx(0.0)) continue;
      Polynomial xj = Polynomial::monomial(j);
      // e^{i·sign·d} x^j = (x + sign·i)^j e^{i·sign·d}
      if (ordering == Ordering::shift_left) xj = xj.shifted(static_cast<double>(D.sign * i));
      D.by_shift[i] += xj * a;
    }
  return D;
}

DifferenceOperator dual_operator(const QuasiPolySpace& V, const DualConvention& conv) {
  if (auto z = find_monomial(V))
    throw MathError("degenerate space (contains x^" + std::to_string(*z) +
                    "); apply reduce_degenerate first");
  return bispectral_dual(fuchsian_operator(V), conv.sign, conv.ordering);
}

namespace {

// Null space of the map p -> D(p·Q^x)/Q^x on polynomials of degree <= B:
// right singular vectors with singular value <= rel·sv_max, at most cap of
// them.
struct NullSpace {
  std::vector<Polynomial> basis;
  int dim = 0;
};

NullSpace null_space(const DifferenceOperator& D, cplx Q, int B, int cap, double rel) {
  std::vector<Polynomial> cols;
  int rows = 0;
  for (int k = 0; k <= B; ++k) {
    cols.push_back(D.apply(Q, Polynomial::monomial(k)));
    rows = std::max(rows, static_cast<int>(cols.back().coeffs().size()));
  }
  rows = std::max(rows, B + 1);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(rows, B + 1);
  Eigen::VectorXd scale(B + 1);
  for (int k = 0; k <= B; ++k) {
    for (int l = 0; l < rows; ++l) A(l, k) = cols[k].coeff(l);
    // zero columns are exact kernel directions and keep unit scale
    scale(k) = A.col(k).norm() > 0.0 ? A.col(k).norm() : 1.0;
    A.col(k) /= scale(k);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double thresh = rel * std::max(sv(0), 1e-300);
  NullSpace out;
  for (int k = B; k >= 0 && out.dim < cap; --k) {
    double s = k < sv.size() ? sv(k) : 0.0;
    if (s > thresh) break;
    CVec c(B + 1);
    for (int t = 0; t <= B; ++t) c[t] = svd.matrixV()(t, k) / scale(t);
    out.basis.push_back(Polynomial(std::move(c)));
    ++out.dim;
  }
  return out;
}

// The kernel at Q has dimension at most the multiplicity mult of Q in the
// leading balance. Monomial columns grow ill-conditioned with the degree
// (genuine singular values reach ~1e-13 at degree 10, while null directions
// of a near-zero base sit near 1e-13 already), so the kernel is taken at the
// least degree bound carrying mult directions below kLooseNull, where the
// genuine singular values are still large. Falls back to the strict cut at
// bound B.
constexpr double kLooseNull = 1e-9;
constexpr double kStrictNull = 1e-13;

std::vector<Polynomial> kernel_for_base(const DifferenceOperator& D, cplx Q, int B, int mult) {
  for (int b = 0; b <= B; ++b) {
    NullSpace ns = null_space(D, Q, b, mult, kLooseNull);
    if (ns.dim == mult) return ns.basis;
  }
  const int full = null_space(D, Q, B, mult, kStrictNull).dim;
  if (full == 0) return {};
  for (int b = 0; b < B; ++b) {
    NullSpace ns = null_space(D, Q, b, mult, kStrictNull);
    if (ns.dim == full) return ns.basis;
  }
  return null_space(D, Q, B, mult, kStrictNull).basis;
}

}  // namespace

QuasiExpSpace qe_kernel(const DifferenceOperator& D, int degree_bound) {
  const int s = D.order();
  if (s <= 0) throw MathError("difference operator has zero order");
  int m = 0;
  for (auto& c : D.by_shift) m = std::max(m, c.degree());
  // Leading balance: sum_i lc_i t^i = 0 with t = Q^{sign}.
  CVec lead(s + 1);
  for (int i = 0; i <= s; ++i) lead[i] = D.by_shift[i].coeff(m);
  Polynomial chi(lead);
  CVec ts = chi.degree() > 0 ? roots(chi) : CVec{};
  std::vector<std::pair<cplx, int>> cands;  // base, multiplicity
  for (cplx t : ts) {
    if (std::abs(t) <= 1e-12 * std::max(1.0, chi.max_abs_coeff())) continue;
    cplx Q = D.sign > 0 ? t : 1.0 / t;
    bool dup = false;
    for (auto& c : cands)
      if (std::abs(c.first - Q) <= 1e-6 * (1.0 + std::abs(Q))) {
        ++c.second;
        dup = true;
        break;
      }
    if (!dup) cands.push_back({Q, 1});
  }
  std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
    return a.first.real() != b.first.real() ? a.first.real() < b.first.real()
                                            : a.first.imag() < b.first.imag();
  });

  QuasiExpSpace out{Mode::multiplicative, {}};
  for (auto [Q, mult] : cands) {
    auto ker = kernel_for_base(D, Q, degree_bound, mult);
    if (ker.empty()) continue;
    QuasiExpSpace grp{Mode::multiplicative, {}};
    for (auto& p : ker) grp.members.push_back({Q, p});
    for (auto& m : standard_basis(grp).members) out.members.push_back(m);
  }
  const int found = static_cast<int>(out.dim());
  if (found < s)
    throw KernelDeficit("kernel deficient: found " + std::to_string(found) + " of " +
                            std::to_string(s) + " solutions within degree bound " +
                            std::to_string(degree_bound),
                        out);
  if (found > s) throw MathError("kernel dimension exceeds operator order");
  return out;
}

DualityCheck check_duality(const QuasiPolySpace& V0, const DualConvention& conv, double tol) {
  QuasiPolySpace V = V0;
  while (find_monomial(V)) V = reduce_degenerate(V);
  DualityCheck res;
  FuchsianOperator op = fuchsian_operator(V);
  IndicialPair ind = indicial_polynomials(op);
  res.Y = compute_Y(ind.chi0, ind.chi_inf);
  DifferenceOperator D = dual_operator(V, conv);
  QuasiExpSpace K{Mode::multiplicative, {}};
  if (D.order() > 0) K = qe_kernel(D, res.Y.degree() + 1);
  res.wr_dual = K.dim() ? discrete_wronskian(K).monic : Polynomial::constant(1.0);
  Polynomial target = res.Y.shifted(static_cast<double>(-conv.y_shift));
  res.y_distance = coeff_distance(res.wr_dual, target) / std::max(1.0, target.max_abs_coeff());
  if (res.wr_dual.degree() != target.degree()) res.y_distance = std::max(res.y_distance, 1.0);
  CVec wroots = qp_wronskian(V).w.degree() > 0 ? roots(qp_wronskian(V).w) : CVec{};
  for (auto& m : K.members) {
    double best = 1e300;
    for (cplx r : wroots) best = std::min(best, std::abs(m.param - r) / (1.0 + std::abs(r)));
    res.base_distance = std::max(res.base_distance, best);
  }
  res.ok = res.y_distance <= tol && res.base_distance <= tol;
  return res;
}

namespace {

QuasiPolySpace calibration_space_1() { return {{{0.3, Polynomial({-2.0, 1.0})}}}; }

QuasiPolySpace calibration_space_2(uint64_t seed) {
  Rng rng(seed, 0);
  QuasiPolySpace V;
  double z1 = rng.uniform(-1.0, 1.0);
  double z2 = z1 + 0.25 + 0.5 * rng.uniform();
  V.members.push_back({z1, Polynomial({rng.normal(), 1.0})});
  V.members.push_back({z2, Polynomial({rng.normal(), rng.normal(), 1.0})});
  return V;
}

}  // namespace

CalibrationResult calibrate_dual_convention(uint64_t seed) {
  CalibrationResult res;
  std::vector<QuasiPolySpace> cases = {calibration_space_1(), calibration_space_2(seed)};
  std::vector<DualConvention> winners;
  for (ShiftSign sg : {ShiftSign::minus, ShiftSign::plus})
    for (Ordering od : {Ordering::x_left, Ordering::shift_left})
      for (int shift = -2; shift <= 2; ++shift) {
        DualConvention c{sg, od, shift};
        bool all = true;
        std::ostringstream line;
        line << to_string(sg) << "/" << to_string(od) << "/shift=" << shift << ":";
        for (auto& V : cases) {
          try {
            auto chk = check_duality(V, c, 1e-6);
            line << " y_dist=" << chk.y_distance << " base_dist=" << chk.base_distance;
            all = all && chk.ok;
          } catch (const MathError& e) {
            line << " error(" << e.what() << ")";
            all = false;
          }
        }
        line << (all ? " PASS" : " fail");
        res.log.push_back(line.str());
        if (all) winners.push_back(c);
      }
  if (winners.size() != 1)
    throw MathError("dual convention calibration found " + std::to_string(winners.size()) +
                    " consistent variants");
  res.convention = winners.front();
  return res;
}

DualConvention load_dual_convention(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MathError("cannot open convention file " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  DualConvention c;
  c.sign = shift_sign_from_string(j.at("shift_sign").get<std::string>());
  c.ordering = ordering_from_string(j.at("ordering").get<std::string>());
  c.y_shift = j.at("y_shift").get<int>();
  return c;
}

void save_dual_convention(const DualConvention& c, const std::string& path) {
  nlohmann::ordered_json j;
  j["shift_sign"] = to_string(c.sign);
  j["ordering"] = to_string(c.ordering);
  j["y_shift"] = c.y_shift;
  std::ofstream out(path);
  if (!out) throw MathError("cannot write convention file " + path);
  out << j.dump(2) << "\n";
}

}  // namespace wronski
