#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wronski/polynomial.hpp"
#include "wronski/quasiexp.hpp"

namespace wronski {

enum class WronskiKind { discrete, differential };
std::string to_string(WronskiKind k);
WronskiKind wronski_kind_from_string(const std::string& s);

// Find every space with members p_i·Q_i^x (discrete, step 1) or
// p_i·exp(lambda_i x) (differential) whose monic Wronskian has the given
// roots. Members are monic of the given degrees and in standard form, so the
// unknowns are the coefficients below each leading degree that are not the
// leading degree of another member with the same param.
struct InverseProblem {
  WronskiKind kind = WronskiKind::discrete;
  CVec targets;
  CVec params;               // one per member
  std::vector<int> degrees;  // one per member

  // (member, degree) for every unknown coefficient, members in order and
  // degrees ascending.
  std::vector<std::pair<int, int>> unknowns() const;
  Mode mode() const { return kind == WronskiKind::discrete ? Mode::multiplicative : Mode::exponent; }
  QuasiExpSpace space(const CVec& u) const;
  // Unknown coordinates of a space with matching params and degrees; the
  // space is brought to standard form first.
  CVec coordinates(const QuasiExpSpace& V) const;
};

// Throws MathError for a non-square system, repeated degrees within a param
// group, or a vanishing leading coefficient.
void validate(const InverseProblem& p);

struct SolverConfig {
  int starts = 200;
  uint64_t seed = 0;
  double tol = 1e-6;  // reality tolerance for reports built from this run
  int jobs = 1;
  // Starts run in batches of `starts`; a batch that adds no new solution
  // ends the search.
  int max_rounds = 8;
};

struct InverseSolution {
  CVec u;
  QuasiExpSpace space;
  double residual = 0.0;  // monic forward Wronskian vs target, coefficientwise
};

struct SolutionSet {
  std::vector<InverseSolution> solutions;  // sorted lexicographically by u
  int starts = 0;     // total starts run
  int converged = 0;  // starts that reached a solution before deduplication
  double dedup_radius = 1e-6;
  double max_residual = 0.0;
  bool possibly_incomplete = false;  // no start converged
};

// Damped Newton from seeded random complex starts; starts are independent
// and run on cfg.jobs threads with results identical for any job count.
SolutionSet solve_inverse(const InverseProblem& p, const SolverConfig& cfg);

struct RealityReport {
  std::vector<bool> real;
  std::vector<double> max_imag;
  double tol = 0.0;

  bool all_real() const;
};
RealityReport reality_report(const SolutionSet& s, double tol);

// Wr^d(x+a, Q^x(x+b)) with roots {0, A}: unknowns (a, b).
InverseProblem example1_problem(double Q, double A);
// Wr^d(x+a, x^3+bx^2+c) with roots {0, A, B}: unknowns (a, b, c).
InverseProblem example2_problem(double A, double B);

// Example 1, params (Q, A): (Q-1)^2 A^2 + 4Q. Example 2, params (A, B):
// A^2 + B^2 - AB - 3/4. Both solutions are real iff the value is >= 0.
double example_reality_condition(int example, const std::vector<double>& params);

struct RegionTest {
  bool separated = false;  // all pairwise gaps >= 1
  // Positions (0-based, original order) of a subset I whose parts are both
  // separated; only searched when same-sign bases are declared.
  std::optional<std::vector<int>> subset;
  bool holds() const { return separated || subset.has_value(); }
};
// Throws MathError("bipartition search too large") when the bipartition
// search is needed for more than 12 roots.
RegionTest theorem_region_test(const std::vector<double>& z, bool same_sign_bases);

// Example 1 grid axes are (A, Q); Example 2 axes are (A, B).
struct ScanGrid {
  double x_min = 0.0, x_max = 0.0, x_step = 1.0;
  double y_min = 0.0, y_max = 0.0, y_step = 1.0;

  int nx() const;
  int ny() const;
};

enum class Verdict { real, nonreal, incomplete, undefined };
std::string to_string(Verdict v);

inline constexpr double kBoundaryBand = 1e-6;

struct ScanRow {
  double x = 0.0, y = 0.0;
  double condition = 0.0;
  int condition_sign = 0;  // 0 inside the boundary band
  Verdict verdict = Verdict::undefined;
  int count = 0;
  std::optional<bool> agree;  // empty on the boundary band
};

// Rows in row-major order (y outer, x inner). Throws MathError for more than
// 10^6 points.
std::vector<ScanRow> scan_region(int example, const ScanGrid& g, const SolverConfig& cfg);
std::string scan_csv(int example, const std::vector<ScanRow>& rows);

}  // namespace wronski
