#include "wronski/inverse.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "wronski/parallel.hpp"
#include "wronski/random.hpp"

namespace wronski {

std::string to_string(WronskiKind k) { return k == WronskiKind::discrete ? "discrete" : "differential"; }

WronskiKind wronski_kind_from_string(const std::string& s) {
  if (s == "discrete") return WronskiKind::discrete;
  if (s == "differential") return WronskiKind::differential;
  throw MathError("unknown Wronskian kind '" + s + "'");
}

namespace {

bool same_param(cplx a, cplx b) {
  return std::abs(a - b) <= kParamMergeTol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

int system_degree(const InverseProblem& p) {
  const int n = static_cast<int>(p.params.size());
  int D = 0;
  std::vector<bool> seen(n, false);
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    int cnt = 0;
    for (int j = i; j < n; ++j)
      if (!seen[j] && same_param(p.params[i], p.params[j])) {
        seen[j] = true;
        D += p.degrees[j];
        ++cnt;
      }
    D -= cnt * (cnt - 1) / 2;
  }
  return D;
}

}  // namespace

std::vector<std::pair<int, int>> InverseProblem::unknowns() const {
  std::vector<std::pair<int, int>> out;
  const int n = static_cast<int>(params.size());
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < degrees[i]; ++k) {
      bool pivot = false;
      for (int j = 0; j < n; ++j)
        if (j != i && degrees[j] == k && same_param(params[i], params[j])) pivot = true;
      if (!pivot) out.emplace_back(i, k);
    }
  return out;
}

QuasiExpSpace InverseProblem::space(const CVec& u) const {
  QuasiExpSpace V{mode(), {}};
  for (size_t i = 0; i < params.size(); ++i) {
    CVec c(degrees[i] + 1, 0.0);
    c[degrees[i]] = 1.0;
    V.members.push_back({params[i], Polynomial(std::move(c))});
  }
  auto layout = unknowns();
  for (size_t a = 0; a < layout.size(); ++a) {
    auto [i, k] = layout[a];
    V.members[i].poly.coeffs()[k] = u[a];
  }
  return V;
}

CVec InverseProblem::coordinates(const QuasiExpSpace& V) const {
  QuasiExpSpace S = standard_basis(V);
  const int n = static_cast<int>(params.size());
  std::vector<int> member_of(n, -1);
  for (int i = 0; i < n; ++i)
    for (size_t m = 0; m < S.dim(); ++m)
      if (same_param(S.members[m].param, params[i]) && S.members[m].poly.degree() == degrees[i])
        member_of[i] = static_cast<int>(m);
  for (int i = 0; i < n; ++i)
    if (member_of[i] < 0) throw MathError("space does not match the problem's degree pattern");
  CVec u;
  for (auto [i, k] : unknowns()) u.push_back(S.members[member_of[i]].poly.coeff(k));
  return u;
}

void validate(const InverseProblem& p) {
  const size_t n = p.params.size();
  if (n == 0) throw MathError("empty problem");
  if (p.degrees.size() != n) throw MathError("one degree per member required");
  for (size_t i = 0; i < n; ++i) {
    if (p.degrees[i] < 0) throw MathError("negative degree");
    for (size_t j = i + 1; j < n; ++j)
      if (same_param(p.params[i], p.params[j]) && p.degrees[i] == p.degrees[j])
        throw MathError("repeated degree within a param group");
  }
  if (p.kind == WronskiKind::discrete)
    for (cplx q : p.params)
      if (q == cplx(0.0)) throw MathError("bases must be nonzero");
  const int D = system_degree(p);
  if (D != static_cast<int>(p.unknowns().size()))
    throw MathError("internal: unknown count differs from Wronskian degree");
  if (static_cast<int>(p.targets.size()) != D)
    throw MathError("non-square system: " + std::to_string(p.targets.size()) + " targets for " +
                    std::to_string(D) + " unknowns");
}

namespace {

// det and cofactor matrix of a small complex matrix stored row-major.
cplx det_cof(const std::vector<cplx>& M, int n, std::vector<cplx>& C) {
  C.assign(static_cast<size_t>(n) * n, 0.0);
  if (n == 1) {
    C[0] = 1.0;
    return M[0];
  }
  if (n == 2) {
    C[0] = M[3];
    C[1] = -M[2];
    C[2] = -M[1];
    C[3] = M[0];
    return M[0] * M[3] - M[1] * M[2];
  }
  if (n == 3) {
    auto m = [&](int i, int j) { return M[i * 3 + j]; };
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        int i1 = (i + 1) % 3, i2 = (i + 2) % 3, j1 = (j + 1) % 3, j2 = (j + 2) % 3;
        C[i * 3 + j] = m(i1, j1) * m(i2, j2) - m(i1, j2) * m(i2, j1);
      }
    return m(0, 0) * C[0] + m(0, 1) * C[1] + m(0, 2) * C[2];
  }
  Eigen::MatrixXcd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = M[i * n + j];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Eigen::MatrixXcd minor(n - 1, n - 1);
      for (int r = 0, rr = 0; r < n; ++r) {
        if (r == i) continue;
        for (int c = 0, cc = 0; c < n; ++c) {
          if (c == j) continue;
          minor(rr, cc++) = A(r, c);
        }
        ++rr;
      }
      C[i * n + j] = ((i + j) % 2 ? -1.0 : 1.0) * minor.determinant();
    }
  cplx d = 0.0;
  for (int j = 0; j < n; ++j) d += A(0, j) * C[j];
  return d;
}

// Values of W(x) - kappa·T(x) at D points on a circle around the targets.
// A polynomial of degree < D vanishes iff it vanishes at these points, and
// the roots-of-unity layout keeps the map to coefficients well conditioned.
class System {
 public:
  explicit System(const InverseProblem& p) : p_(p), layout_(p.unknowns()) {
    n_ = static_cast<int>(p.params.size());
    m_ = static_cast<int>(layout_.size());
    cplx center = 0.0;
    for (cplx z : p.targets) center += z;
    if (m_ > 0) center /= static_cast<double>(m_);
    // strictly outside the targets, so |T| stays comparable to rad^m there
    double rad = 0.0;
    for (cplx z : p.targets) rad = std::max(rad, std::abs(z - center));
    rad = 1.0 + 2.0 * rad;
    Polynomial T = from_roots(p.targets);
    QuasiExpSpace V0 = p.space(CVec(m_, 0.0));
    Polynomial raw = p.kind == WronskiKind::discrete ? raw_discrete_wronskian(V0, 1.0)
                                                     : raw_wronskian(V0);
    kappa_ = raw.coeff(m_);
    if (std::abs(kappa_) <= 1e-12 * std::max(1.0, raw.max_abs_coeff()))
      throw MathError("Wronskian leading coefficient vanishes for this degree pattern");
    for (int t = 0; t < m_; ++t) {
      cplx x = center + rad * std::polar(1.0, 2.0 * std::numbers::pi * (t + 0.5) / m_);
      pts_.push_back(x);
      rhs_.push_back(kappa_ * T(x));
    }
    scale_ = std::abs(kappa_) * std::pow(rad, m_);
    // val_[i][k][j][t]: column j entry of x^k in member i at point t
    val_.resize(n_);
    for (int i = 0; i < n_; ++i) {
      val_[i].assign(p.degrees[i] + 1, std::vector<std::vector<cplx>>(n_, CVec(std::max(m_, 1))));
      for (int k = 0; k <= p.degrees[i]; ++k)
        for (int j = 0; j < n_; ++j)
          for (int t = 0; t < m_; ++t) val_[i][k][j][t] = entry(i, k, j, pts_[t]);
    }
  }

  int size() const { return m_; }
  double scale() const { return scale_; }
  cplx kappa() const { return kappa_; }

  // F(u); J(u) when jac is non-null.
  void eval(const CVec& u, CVec& F, Eigen::MatrixXcd* jac) const {
    F.assign(m_, 0.0);
    if (jac) jac->setZero(m_, m_);
    std::vector<cplx> M(static_cast<size_t>(n_) * n_), C;
    for (int t = 0; t < m_; ++t) {
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) M[i * n_ + j] = val_[i][p_.degrees[i]][j][t];
      for (int a = 0; a < m_; ++a) {
        auto [i, k] = layout_[a];
        for (int j = 0; j < n_; ++j) M[i * n_ + j] += u[a] * val_[i][k][j][t];
      }
      F[t] = det_cof(M, n_, C) - rhs_[t];
      if (!jac) continue;
      for (int a = 0; a < m_; ++a) {
        auto [i, k] = layout_[a];
        cplx d = 0.0;
        for (int j = 0; j < n_; ++j) d += C[i * n_ + j] * val_[i][k][j][t];
        (*jac)(t, a) = d;
      }
    }
  }

 private:
  cplx entry(int i, int k, int j, cplx x) const {
    cplx q = p_.params[i];
    if (p_.kind == WronskiKind::discrete) return std::pow(x + static_cast<double>(j), k) * std::pow(q, j);
    // (d/dx + lambda)^j x^k
    cplx acc = 0.0;
    double binom = 1.0;
    for (int r = 0; r <= std::min(j, k); ++r) {
      double fall = 1.0;
      for (int s = 0; s < r; ++s) fall *= k - s;
      acc += binom * std::pow(q, j - r) * fall * std::pow(x, k - r);
      binom = binom * (j - r) / (r + 1);
    }
    return acc;
  }

  const InverseProblem& p_;
  std::vector<std::pair<int, int>> layout_;
  int n_ = 0, m_ = 0;
  cplx kappa_ = 1.0;
  CVec pts_, rhs_;
  double scale_ = 1.0;
  std::vector<std::vector<std::vector<CVec>>> val_;
};

double inf_norm(const CVec& v) {
  double m = 0.0;
  for (cplx c : v) m = std::max(m, std::abs(c));
  return m;
}

// Damped Newton; returns the point when the residual reaches the
// acceptance level.
std::optional<CVec> newton(const System& S, CVec u) {
  const int m = S.size();
  CVec F, Ft;
  Eigen::MatrixXcd J;
  S.eval(u, F, &J);
  double f = inf_norm(F);
  for (int it = 0; it < 100; ++it) {
    if (f <= 1e-15 * S.scale()) break;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(J);
    Eigen::VectorXcd rhs(m);
    for (int a = 0; a < m; ++a) rhs(a) = -F[a];
    Eigen::VectorXcd d = lu.solve(rhs);
    if (!d.allFinite()) return std::nullopt;
    double lam = 1.0;
    CVec trial(m);
    double ft = 0.0;
    for (int h = 0; h < 30; ++h, lam *= 0.5) {
      for (int a = 0; a < m; ++a) trial[a] = u[a] + lam * d(a);
      S.eval(trial, Ft, nullptr);
      ft = inf_norm(Ft);
      if (ft < f) break;
    }
    if (!(ft < f)) break;
    double step = lam * d.cwiseAbs().maxCoeff();
    u = trial;
    S.eval(u, F, &J);
    f = inf_norm(F);
    if (inf_norm(u) > 1e12) return std::nullopt;
    if (step <= 1e-15 * (1.0 + inf_norm(u))) break;
  }
  if (!(f <= 1e-9 * S.scale())) return std::nullopt;
  return u;
}

bool same_point(const CVec& f, const CVec& q, double radius) {
  double d = 0.0, sz = 0.0;
  for (size_t a = 0; a < f.size(); ++a) {
    d = std::max(d, std::abs(f[a] - q[a]));
    sz = std::max(sz, std::abs(q[a]));
  }
  return d <= radius * (1.0 + sz);
}

// Real params and a real target polynomial: the real coordinate subspace is
// invariant under the solution set's conjugation symmetry.
bool real_data(const InverseProblem& p) {
  for (cplx q : p.params)
    if (q.imag() != 0.0) return false;
  for (cplx c : from_roots(p.targets).coeffs())
    if (!is_real(c, 1e-12)) return false;
  return true;
}

// Gauss-Newton over real coordinates from Re(u). A near-real candidate is
// replaced by the real solution it approximates only when the real iteration
// drives the residual to the acceptance level close to u; a genuinely complex
// pair leaves a positive residual minimum on the real subspace.
std::optional<CVec> snap_real(const System& S, const CVec& u) {
  const int m = S.size();
  double im = 0.0, sz = 0.0;
  for (cplx c : u) {
    im = std::max(im, std::abs(c.imag()));
    sz = std::max(sz, std::abs(c));
  }
  if (im == 0.0 || im > 1e-3 * (1.0 + sz)) return std::nullopt;
  CVec x(m), F;
  for (int a = 0; a < m; ++a) x[a] = u[a].real();
  Eigen::MatrixXcd J;
  for (int it = 0; it < 50; ++it) {
    S.eval(x, F, &J);
    Eigen::MatrixXd A(2 * m, m);
    Eigen::VectorXd b(2 * m);
    for (int t = 0; t < m; ++t) {
      for (int a = 0; a < m; ++a) {
        A(t, a) = J(t, a).real();
        A(m + t, a) = J(t, a).imag();
      }
      b(t) = -F[t].real();
      b(m + t) = -F[t].imag();
    }
    Eigen::VectorXd d = A.colPivHouseholderQr().solve(b);
    if (!d.allFinite()) return std::nullopt;
    for (int a = 0; a < m; ++a) x[a] += d(a);
    if (d.cwiseAbs().maxCoeff() <= 1e-15 * (1.0 + sz)) break;
  }
  S.eval(x, F, nullptr);
  if (!(inf_norm(F) <= 1e-9 * S.scale())) return std::nullopt;
  double dist = 0.0;
  for (int a = 0; a < m; ++a) dist = std::max(dist, std::abs(x[a] - u[a]));
  if (dist > 100.0 * im + 1e-8 * (1.0 + sz)) return std::nullopt;
  return x;
}

bool lex_less(const CVec& a, const CVec& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return false;
}

}  // namespace

SolutionSet solve_inverse(const InverseProblem& p, const SolverConfig& cfg) {
  validate(p);
  if (cfg.starts <= 0) throw MathError("at least one start required");
  System S(p);
  const int m = S.size();
  auto layout = p.unknowns();
  double rs = 1.0;
  for (cplx z : p.targets) rs = std::max(rs, std::abs(z));

  SolutionSet out;
  std::vector<CVec> uniq;
  auto is_new = [&](const CVec& f) {
    for (auto& q : uniq)
      if (same_point(f, q, out.dedup_radius)) return false;
    return true;
  };
  // Batches of cfg.starts run until one adds no new solution.
  for (int round = 0; round < std::max(cfg.max_rounds, 1); ++round) {
    std::vector<std::optional<CVec>> found(cfg.starts);
    const uint64_t base = static_cast<uint64_t>(round) * cfg.starts;
    parallel_for(cfg.starts, cfg.jobs, [&](size_t s) {
      Rng rng(cfg.seed, base + s);
      CVec u0(m);
      // Solutions can be far larger than the targets, so each start draws its
      // own scale in [rs/4, 32·rs]; a coefficient of x^k in a degree-d monic
      // part scales like root^(d-k).
      const double sigma = rs * std::exp2(rng.uniform(-2.0, 5.0));
      for (int a = 0; a < m; ++a)
        u0[a] = rng.cnormal() * std::pow(sigma, p.degrees[layout[a].first] - layout[a].second);
      found[s] = newton(S, u0);
    });
    out.starts += cfg.starts;
    bool added = false;
    for (auto& f : found) {
      if (!f) continue;
      ++out.converged;
      if (is_new(*f)) {
        uniq.push_back(*f);
        added = true;
      }
    }
    if (!added) break;
  }
  Polynomial target = from_roots(p.targets);
  if (real_data(p)) {
    std::vector<CVec> snapped;
    for (auto& u : uniq) {
      if (auto r = snap_real(S, u)) u = *r;
      bool dup = false;
      for (auto& q : snapped) dup = dup || same_point(u, q, out.dedup_radius);
      if (!dup) snapped.push_back(u);
    }
    uniq = std::move(snapped);
  }
  std::sort(uniq.begin(), uniq.end(), lex_less);
  for (auto& u : uniq) {
    InverseSolution sol{u, p.space(u), 0.0};
    Polynomial w = p.kind == WronskiKind::discrete ? discrete_wronskian(sol.space).monic
                                                   : wronskian(sol.space).monic;
    sol.residual = coeff_distance_rel(w, target);
    if (w.degree() != target.degree() || sol.residual > 1e-8) continue;
    out.max_residual = std::max(out.max_residual, sol.residual);
    out.solutions.push_back(std::move(sol));
  }
  out.possibly_incomplete = out.solutions.empty();
  return out;
}

bool RealityReport::all_real() const {
  return std::all_of(real.begin(), real.end(), [](bool b) { return b; });
}

RealityReport reality_report(const SolutionSet& s, double tol) {
  RealityReport r;
  r.tol = tol;
  for (auto& sol : s.solutions) {
    auto flags = classify_real(sol.u, tol);
    double mi = 0.0;
    for (cplx c : sol.u) mi = std::max(mi, std::abs(c.imag()));
    r.real.push_back(std::all_of(flags.begin(), flags.end(), [](bool b) { return b; }));
    r.max_imag.push_back(mi);
  }
  return r;
}

InverseProblem example1_problem(double Q, double A) {
  return {WronskiKind::discrete, {0.0, A}, {1.0, Q}, {1, 1}};
}

InverseProblem example2_problem(double A, double B) {
  return {WronskiKind::discrete, {0.0, A, B}, {1.0, 1.0}, {1, 3}};
}

double example_reality_condition(int example, const std::vector<double>& params) {
  if (params.size() != 2) throw MathError("two parameters required");
  if (example == 1) {
    double Q = params[0], A = params[1];
    if (Q == 1.0) throw MathError("Example 1 needs Q != 1");
    return (Q - 1.0) * (Q - 1.0) * A * A + 4.0 * Q;
  }
  if (example == 2) {
    double A = params[0], B = params[1];
    return A * A + B * B - A * B - 0.75;
  }
  throw MathError("unknown example " + std::to_string(example));
}

namespace {

bool separated(std::vector<double> z) {
  std::sort(z.begin(), z.end());
  for (size_t i = 1; i < z.size(); ++i)
    if (z[i] - z[i - 1] < 1.0) return false;
  return true;
}

}  // namespace

RegionTest theorem_region_test(const std::vector<double>& z, bool same_sign_bases) {
  RegionTest r;
  r.separated = separated(z);
  if (r.separated || !same_sign_bases) return r;
  const int n = static_cast<int>(z.size());
  if (n > 12) throw MathError("bipartition search too large");
  // masks with bit 0 clear cover every unordered bipartition once
  for (unsigned mask = 0; mask < (1u << n); mask += 2) {
    std::vector<double> in, out;
    for (int i = 0; i < n; ++i) ((mask >> i) & 1 ? in : out).push_back(z[i]);
    if (separated(in) && separated(out)) {
      std::vector<int> idx;
      for (int i = 0; i < n; ++i)
        if ((mask >> i) & 1) idx.push_back(i);
      r.subset = idx;
      break;
    }
  }
  return r;
}

namespace {

int axis_count(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw MathError("invalid grid axis");
  double c = std::floor((hi - lo) / step + 1e-9) + 1.0;
  if (c > 1e7) throw MathError("grid too fine");
  return static_cast<int>(c);
}

}  // namespace

int ScanGrid::nx() const { return axis_count(x_min, x_max, x_step); }
int ScanGrid::ny() const { return axis_count(y_min, y_max, y_step); }

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::real: return "real";
    case Verdict::nonreal: return "nonreal";
    case Verdict::incomplete: return "incomplete";
    case Verdict::undefined: return "undefined";
  }
  return "undefined";
}

std::vector<ScanRow> scan_region(int example, const ScanGrid& g, const SolverConfig& cfg) {
  if (example != 1 && example != 2) throw MathError("unknown example " + std::to_string(example));
  const long long nx = g.nx(), ny = g.ny();
  if (nx * ny > 1000000) throw MathError("grid too fine: more than 1e6 points");
  std::vector<ScanRow> rows(nx * ny);
  SolverConfig inner = cfg;
  inner.jobs = 1;
  parallel_for(rows.size(), cfg.jobs, [&](size_t idx) {
    ScanRow& r = rows[idx];
    r.x = g.x_min + static_cast<double>(idx % nx) * g.x_step;
    r.y = g.y_min + static_cast<double>(idx / nx) * g.y_step;
    // Example 1 axes are (A, Q)
    const double Q = r.y, A = r.x, B = r.y;
    if (example == 1 && Q == 1.0) return;
    r.condition = example == 1 ? example_reality_condition(1, {Q, A})
                               : example_reality_condition(2, {A, B});
    r.condition_sign = std::abs(r.condition) < kBoundaryBand ? 0 : (r.condition > 0 ? 1 : -1);
    InverseProblem p = example == 1 ? example1_problem(Q, A) : example2_problem(A, B);
    SolverConfig c = inner;
    c.seed = derive_seed(cfg.seed, idx);
    SolutionSet s = solve_inverse(p, c);
    r.count = static_cast<int>(s.solutions.size());
    if (s.possibly_incomplete)
      r.verdict = Verdict::incomplete;
    else
      r.verdict = reality_report(s, cfg.tol).all_real() ? Verdict::real : Verdict::nonreal;
    if (r.condition_sign != 0) r.agree = (r.condition_sign > 0) == (r.verdict == Verdict::real);
  });
  return rows;
}

std::string scan_csv(int example, const std::vector<ScanRow>& rows) {
  std::ostringstream os;
  os << (example == 1 ? "A,Q" : "A,B") << ",condition_sign,solver_verdict,agree\n";
  char buf[64];
  for (auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g", r.x, r.y);
    os << buf << ',' << r.condition_sign << ',' << to_string(r.verdict) << ','
       << (r.agree ? (*r.agree ? "yes" : "no") : "boundary") << '\n';
  }
  return os.str();
}

}  // namespace wronski
