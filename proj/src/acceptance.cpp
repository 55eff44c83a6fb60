#include "wronski/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "wronski/bethe.hpp"
#include "wronski/inverse.hpp"
#include "wronski/matrices.hpp"
#include "wronski/parallel.hpp"
#include "wronski/quasiexp.hpp"
#include "wronski/quasipoly.hpp"
#include "wronski/random.hpp"

namespace wronski {

namespace {

CriterionResult named(int id, const char* name) {
  CriterionResult r;
  r.id = id;
  r.name = name;
  return r;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Real values of |v| in [lo, hi] (sign random when signed) at pairwise
// distance >= gap and with differences at least 0.05 away from 1.
std::vector<double> spread_reals(Rng& rng, int n, double lo, double hi, double gap, bool signed_values) {
  std::vector<double> s;
  while (static_cast<int>(s.size()) < n) {
    double v = rng.uniform(lo, hi);
    if (signed_values && rng.uniform() < 0.5) v = -v;
    bool ok = true;
    for (double o : s)
      if (std::abs(o - v) < gap || std::abs(std::abs(o - v) - 1.0) < 0.05) ok = false;
    if (ok) s.push_back(v);
  }
  return s;
}

CVec to_cvec(const std::vector<double>& v) { return CVec(v.begin(), v.end()); }

CVec cnormals(Rng& rng, int n, double sigma = 1.0) {
  CVec out;
  for (int i = 0; i < n; ++i) out.push_back(rng.cnormal(sigma));
  return out;
}

double max_abs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

std::string verdict_counts(const std::vector<ScanRow>& rows, int& disagree, int& boundary, int& incomplete) {
  disagree = boundary = incomplete = 0;
  for (const ScanRow& r : rows) {
    if (!r.agree) {
      ++boundary;
      continue;
    }
    if (r.verdict == Verdict::incomplete) ++incomplete;
    if (!*r.agree) ++disagree;
  }
  return std::to_string(rows.size()) + " points, " + std::to_string(disagree) + " disagreements, " +
         std::to_string(boundary) + " on the boundary band, " + std::to_string(incomplete) + " incomplete";
}

CriterionResult example1_region(const AcceptanceConfig& cfg) {
  CriterionResult r = named(1, "Example 1 region");
  std::vector<ScanRow> rows;
  SolverConfig sc{cfg.starts, cfg.seed};
  sc.jobs = cfg.jobs;
  for (double Q : {-3.0, -1.0, -0.25, 0.5, 2.0}) {
    const std::vector<ScanRow> part = scan_region(1, ScanGrid{-3.0, 3.0, 0.05, Q, Q, 1.0}, sc);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  int dis, bnd, inc;
  r.detail = verdict_counts(rows, dis, bnd, inc);
  const double sharp = example_reality_condition(1, {-1.0, 1.0});
  bool sharp_on_band = false;
  for (const ScanRow& row : rows)
    if (row.y == -1.0 && std::abs(row.x - 1.0) < 1e-9) sharp_on_band = !row.agree.has_value();
  r.detail += ", sharp point condition " + fmt("%.3g", sharp);
  r.pass = dis == 0 && inc == 0 && sharp == 0.0 && sharp_on_band;
  return r;
}

CriterionResult example2_region(const AcceptanceConfig& cfg) {
  CriterionResult r = named(2, "Example 2 region");
  SolverConfig sc{cfg.starts, cfg.seed};
  sc.jobs = cfg.jobs;
  const ScanGrid g{-2.0, 2.0, 0.05, -2.0, 2.0, 0.05};
  const std::vector<ScanRow> rows = scan_region(2, g, sc);
  int dis, bnd, inc;
  r.detail = verdict_counts(rows, dis, bnd, inc);
  int wrong_count = 0;
  for (const ScanRow& row : rows)
    if (row.agree && row.count != 2) ++wrong_count;
  // a verdict change between grid neighbours must straddle the ellipse
  const int nx = g.nx(), ny = g.ny();
  int stray_edges = 0;
  auto at = [&](int i, int j) -> const ScanRow& { return rows[static_cast<size_t>(j) * nx + i]; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      for (auto [di, dj] : {std::pair{1, 0}, std::pair{0, 1}}) {
        if (i + di >= nx || j + dj >= ny) continue;
        const ScanRow& a = at(i, j);
        const ScanRow& b = at(i + di, j + dj);
        if (a.verdict == b.verdict) continue;
        if (a.condition_sign == 0 || b.condition_sign == 0) continue;
        if (a.condition_sign == b.condition_sign) ++stray_edges;
      }
  int tangency_nonzero = 0;
  for (auto [A, B] : std::vector<std::pair<double, double>>{
           {1, 0.5}, {-1, -0.5}, {0.5, -0.5}, {-0.5, 0.5}, {0.5, 1}, {-0.5, -1}})
    if (example_reality_condition(2, {A, B}) != 0.0) ++tangency_nonzero;
  r.detail += ", " + std::to_string(wrong_count) + " off-boundary counts != 2, " + std::to_string(stray_edges) +
              " verdict changes away from the ellipse, " + std::to_string(tangency_nonzero) +
              " tangency points off the quadric";
  r.pass = dis == 0 && inc == 0 && wrong_count == 0 && stray_edges == 0 && tangency_nonzero == 0;
  return r;
}

CriterionResult spectral_identities(const AcceptanceConfig& cfg) {
  CriterionResult r = named(3, "Spectral identities for Zd and Z");
  double worst[2] = {0.0, 0.0};
  for (int k = 0; k < 2; ++k) {
    const MatrixKind kind = k == 0 ? MatrixKind::Zd : MatrixKind::Z;
    for (int t = 0; t < 500; ++t) {
      Rng rng(cfg.seed * 8 + 3, static_cast<uint64_t>(k * 500 + t));
      const int n = rng.integer(1, 5);
      const StructuredParams p{kind,
                               to_cvec(kind == MatrixKind::Zd ? spread_reals(rng, n, 0.3, 3.0, 0.25, true)
                                                              : spread_reals(rng, n, -3.0, 3.0, 0.25, false)),
                               cnormals(rng, n)};
      worst[k] = std::max(worst[k], spectrum_vs_wronskian(p).distance);
    }
  }
  r.detail = "max pairing distance Zd " + fmt("%.3g", worst[0]) + ", Z " + fmt("%.3g", worst[1]) + " over 500 each";
  r.pass = worst[0] <= 1e-7 && worst[1] <= 1e-7;
  return r;
}

CriterionResult vandermonde_lemma(const AcceptanceConfig& cfg) {
  CriterionResult r = named(4, "Vandermonde lemma and conjugation identity");
  double vand = 0.0, det = 0.0, conj = 0.0, spec = 0.0;
  for (int t = 0; t < 200; ++t) {
    Rng rng(cfg.seed * 8 + 4, static_cast<uint64_t>(t));
    const int n = rng.integer(1, 6);
    const CVec Q = to_cvec(spread_reals(rng, n, 0.3, 3.0, 0.25, true));
    const CVec a = cnormals(rng, n);
    const VandermondeCheck v = vandermonde_m(Q);
    vand = std::max(vand, v.residual);
    det = std::max(det, v.det_residual);
    conj = std::max(conj, conjugation_check(Q, a));
    spec = std::max(spec, conjugation_spectrum_distance(Q, a));
  }
  r.detail = "max residual M " + fmt("%.3g", vand) + ", det S " + fmt("%.3g", det) + ", conjugation " +
             fmt("%.3g", conj) + ", spectra " + fmt("%.3g", spec) + " over 200 draws";
  r.pass = vand <= 1e-9 && det <= 1e-9 && conj <= 1e-9 && spec <= 1e-9;
  return r;
}

CriterionResult rank_one(const AcceptanceConfig& cfg) {
  CriterionResult r = named(5, "Rank-one identities");
  double zres = 0.0, qres = 0.0;
  int not_rank_one = 0;
  for (int t = 0; t < 200; ++t) {
    Rng rng(cfg.seed * 8 + 5, static_cast<uint64_t>(t));
    const int n = rng.integer(1, 6);
    const CVec s = to_cvec(spread_reals(rng, n, -3.0, 3.0, 0.25, false));
    const CVec w = cnormals(rng, n);
    zres = std::max(zres, z_commutator_residual(s, w));
    qres = std::max(qres, qd_rank_one_residual(s, w));
    CMat D = CMat::Zero(n, n);
    for (int i = 0; i < n; ++i) D(i, i) = s[i];
    if (!cm_rank_one({build({MatrixKind::Z, s, w}), D, CMMode::additive}).holds) ++not_rank_one;
  }
  r.detail = "max entrywise residual [diag, Z] " + fmt("%.3g", zres) + ", Qd " + fmt("%.3g", qres) + ", " +
             std::to_string(not_rank_one) + " pairs failing the singular-value test, 200 instances";
  r.pass = zres <= 1e-12 && qres <= 1e-12 && not_rank_one == 0;
  return r;
}

CVec twist_values(Rng& rng, int N, bool positive) {
  std::vector<double> q = spread_reals(rng, N, 0.2, 3.0, 0.2, !positive);
  return to_cvec(q);
}

std::vector<double> gapped_run(Rng& rng, int n, bool descending) {
  std::vector<double> z;
  double v = rng.uniform(-2.0, 2.0);
  for (int i = 0; i < n; ++i) {
    z.push_back(v);
    v += (descending ? -1.0 : 1.0) * (1.0 + rng.uniform(0.01, 2.0));
  }
  return z;
}

CriterionResult bethe_positivity(const AcceptanceConfig& cfg) {
  CriterionResult r = named(6, "Positivity of the Yangian and twisted forms");
  double min_plain = INFINITY, min_twisted = INFINITY, sym = 0.0;
  for (int t = 0; t < 100; ++t) {
    Rng rng(cfg.seed * 8 + 6, static_cast<uint64_t>(t));
    const int N = rng.integer(1, 3), n = rng.integer(1, 3);
    TensorSpace ts{N, {}, twist_values(rng, N, false)};
    for (double z : gapped_run(rng, n, true)) ts.z.push_back(z);
    const FormCertificate c = certify_form(ts, CMat::Identity(ts.dim(), ts.dim()));
    min_plain = std::min(min_plain, c.min_eigenvalue);
    sym = std::max(sym, c.symmetry_defect);

    const int s = rng.integer(0, n);
    TensorSpace tw{N, {}, twist_values(rng, N, true)};
    for (double z : gapped_run(rng, s, false)) tw.z.push_back(z);
    for (double z : gapped_run(rng, n - s, true)) tw.z.push_back(z);
    const FormCertificate g = certify_form(tw, twist_G(tw, s));
    min_twisted = std::min(min_twisted, g.min_eigenvalue);
    sym = std::max(sym, g.symmetry_defect);
  }
  const double gap2 = certify_form(TensorSpace{2, {3.0, 1.0}, {1.0, 1.0}}, CMat::Identity(4, 4)).min_eigenvalue;
  r.detail = "min eigenvalue untwisted " + fmt("%.3g", min_plain) + ", twisted " + fmt("%.3g", min_twisted) +
             ", max symmetry defect " + fmt("%.3g", sym) + ", gap-2 case " + fmt("%.17g", gap2);
  r.pass = min_plain > 0.0 && min_twisted > 0.0 && sym <= 1e-10 && std::abs(gap2 - 1.0) <= 1e-10;
  return r;
}

CriterionResult qkz_residues(const AcceptanceConfig& cfg) {
  CriterionResult r = named(7, "qKZ residue identity, commutativity and symmetry");
  double res = 0.0, comm = 0.0, sym = 0.0;
  for (int t = 0; t < 100; ++t) {
    Rng rng(cfg.seed * 8 + 7, static_cast<uint64_t>(t));
    const int N = rng.integer(1, 3), n = rng.integer(1, 3);
    TensorSpace ts{N, cnormals(rng, n, 2.0), cnormals(rng, N)};
    const std::vector<CMat> K = qkz_hamiltonians(ts);
    const CMat R = big_R(ts);
    for (int i = 0; i < n; ++i) {
      cplx p = 1.0;
      for (int j = 0; j < n; ++j)
        if (j != i) p *= ts.z[i] - ts.z[j];
      const double sk = std::max(1.0, max_abs(K[i]));
      res = std::max(res, max_abs(K[i] - p * b1_residue(ts, i)) / sk);
      sym = std::max(sym, max_abs(R * K[i] - K[i].transpose() * R) / (sk * std::max(1.0, max_abs(R))));
      for (int j = 0; j < n; ++j)
        comm = std::max(comm, max_abs(K[i] * K[j] - K[j] * K[i]) / (sk * std::max(1.0, max_abs(K[j]))));
    }
  }
  r.detail = "max relative residual: residue " + fmt("%.3g", res) + ", commutator " + fmt("%.3g", comm) +
             ", symmetry " + fmt("%.3g", sym) + " over 100 configs";
  r.pass = res <= 1e-8 && comm <= 1e-8 && sym <= 1e-8;
  return r;
}

// Params at pairwise distance >= 0.2 unless repeated on purpose; at most
// five unknowns so solution counts stay enumerable.
InverseProblem planted_problem(WronskiKind kind, Rng& rng, QuasiExpSpace& V) {
  const int N = rng.integer(1, 3);
  InverseProblem p;
  p.kind = kind;
  for (;;) {
    p.params.clear();
    p.degrees.clear();
    for (int i = 0; i < N; ++i) {
      double q;
      bool close;
      do {
        q = kind == WronskiKind::discrete ? (rng.uniform() < 0.5 ? -1 : 1) * rng.uniform(0.3, 3.0)
                                          : rng.uniform(-1.5, 1.5);
        if (i > 0 && rng.uniform() < 0.3) q = p.params[0].real();
        close = false;
        for (cplx o : p.params)
          if (o != cplx(q) && std::abs(o - q) < 0.2) close = true;
      } while (close);
      int d;
      bool clash;
      do {
        d = rng.integer(0, 3);
        clash = false;
        for (int j = 0; j < i; ++j)
          if (p.params[j] == cplx(q) && p.degrees[j] == d) clash = true;
      } while (clash);
      p.params.push_back(q);
      p.degrees.push_back(d);
    }
    if (p.unknowns().size() <= 5) break;
  }
  V = QuasiExpSpace{p.mode(), {}};
  for (int i = 0; i < N; ++i) {
    CVec c(p.degrees[i] + 1);
    for (cplx& v : c) v = rng.normal();
    c[p.degrees[i]] = 1.0;
    V.members.push_back({p.params[i], Polynomial(c)});
  }
  const WronskianValue w = kind == WronskiKind::discrete ? discrete_wronskian(V) : wronskian(V);
  p.targets = w.monic.degree() > 0 ? roots(w.monic) : CVec{};
  return p;
}

// N <= 3 distinct real params (gap >= 0.2), degrees 1..3; discrete targets
// separated by >= 1, differential targets anywhere in [-3, 3].
InverseProblem reality_problem(WronskiKind kind, Rng& rng) {
  InverseProblem p;
  p.kind = kind;
  const int N = rng.integer(1, 3);
  const std::vector<double> params = kind == WronskiKind::discrete ? spread_reals(rng, N, 0.3, 3.0, 0.2, true)
                                                                   : spread_reals(rng, N, -1.5, 1.5, 0.2, false);
  for (int i = 0; i < N; ++i) {
    p.params.push_back(params[i]);
    p.degrees.push_back(rng.integer(1, 3));
  }
  const int D = static_cast<int>(p.unknowns().size());
  if (kind == WronskiKind::discrete) {
    double z = rng.uniform(-2.0, 0.0);
    for (int k = 0; k < D; ++k) {
      p.targets.push_back(z);
      z += 1.0 + rng.uniform(0.0, 1.0);
    }
  } else {
    for (int k = 0; k < D; ++k) p.targets.push_back(rng.uniform(-3.0, 3.0));
  }
  return p;
}

CriterionResult reality_sampling(const AcceptanceConfig& cfg) {
  CriterionResult r = named(8, "Reality of inverse solutions and round trips");
  std::string detail;
  bool pass = true;
  for (WronskiKind kind : {WronskiKind::discrete, WronskiKind::differential}) {
    const int k = kind == WronskiKind::discrete ? 0 : 1;
    std::vector<int> nonreal(200), incomplete(200);
    parallel_for(200, cfg.jobs, [&](size_t t) {
      Rng rng(cfg.seed * 8 + 8, static_cast<uint64_t>(k * 1000 + t));
      const InverseProblem p = reality_problem(kind, rng);
      const SolutionSet s = solve_inverse(p, SolverConfig{cfg.starts, derive_seed(cfg.seed, t)});
      incomplete[t] = s.possibly_incomplete;
      nonreal[t] = !reality_report(s, 1e-6).all_real();
    });
    std::vector<int> missed(50);
    parallel_for(50, cfg.jobs, [&](size_t t) {
      Rng rng(cfg.seed * 8 + 9, static_cast<uint64_t>(k * 1000 + t));
      QuasiExpSpace V;
      const InverseProblem p = planted_problem(kind, rng, V);
      const SolutionSet s = solve_inverse(p, SolverConfig{cfg.starts, derive_seed(cfg.seed, t)});
      const CVec planted = p.coordinates(V);
      double size = 0.0;
      for (cplx c : planted) size = std::max(size, std::abs(c));
      missed[t] = std::none_of(s.solutions.begin(), s.solutions.end(), [&](const InverseSolution& x) {
        double d = 0.0;
        for (size_t i = 0; i < planted.size(); ++i) d = std::max(d, std::abs(x.u[i] - planted[i]));
        return d <= 1e-6 * (1.0 + size);
      });
    });
    auto total = [](const std::vector<int>& v) { return std::count(v.begin(), v.end(), 1); };
    detail += (k ? "; " : "") + to_string(kind) + ": " + std::to_string(total(nonreal)) + "/200 with non-real solutions, " +
              std::to_string(total(incomplete)) + " incomplete, " + std::to_string(total(missed)) +
              "/50 round trips missed";
    pass = pass && total(nonreal) == 0 && total(incomplete) == 0 && total(missed) == 0;
  }
  r.detail = detail;
  r.pass = pass;
  return r;
}

CriterionResult step_limit(const AcceptanceConfig& cfg) {
  CriterionResult r = named(9, "Step limit and confluent identity");
  double lo = INFINITY, hi = 0.0;
  for (int t = 0; t < 20; ++t) {
    Rng rng(cfg.seed * 8 + 10, static_cast<uint64_t>(t));
    QuasiExpSpace V{Mode::exponent, {}};
    const int N = rng.integer(2, 3);
    for (int i = 0; i < N; ++i) {
      CVec c(rng.integer(1, 3) + 1);
      for (cplx& v : c) v = rng.normal();
      V.members.push_back({rng.normal(), Polynomial(c)});
    }
    const Polynomial target = raw_wronskian(V);
    auto err = [&](double h) {
      const Polynomial d = raw_discrete_wronskian(V, h) * (1.0 / std::pow(h, N * (N - 1) / 2));
      return coeff_distance(d, target);
    };
    const double ratio = err(1e-2) / err(5e-3);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  double conf = 0.0;
  for (int t = 0; t < 10; ++t) {
    Rng rng(cfg.seed * 8 + 11, static_cast<uint64_t>(t));
    ConfluentFamily cf;
    cf.d = 4;
    cf.base_pattern = {1.0 + rng.uniform(), -1.0 - rng.uniform()};
    cf.mult = {t % 2 ? 2 : 3, 1};
    for (int i = 0; i < cf.mult[0] + cf.mult[1]; ++i) {
      CVec c(cf.d);
      for (cplx& v : c) v = rng.normal();
      cf.q.push_back(Polynomial(c));
    }
    const Polynomial W0 = confluent_extrapolated(cf, 0.02, 5);
    const ConfluentLimit lim = confluent_limit(cf);
    const Polynomial rhs = raw_discrete_wronskian(lim.basis, 1.0) * lim.c;
    conf = std::max(conf, coeff_distance(W0, rhs) / rhs.max_abs_coeff());
  }
  r.detail = "halving factors in [" + fmt("%.4g", lo) + ", " + fmt("%.4g", hi) +
             "] over 20 spaces, max confluent residual " + fmt("%.3g", conf) + " over 10 families";
  r.pass = lo >= 1.5 && hi <= 2.5 && conf <= 1e-4;
  return r;
}

QuasiPolySpace random_qp_space(Rng& rng) {
  const int n = rng.integer(1, 3);
  QuasiPolySpace V;
  std::vector<double> zs;
  for (int i = 0; i < n; ++i) {
    double z;
    bool ok;
    do {
      z = rng.uniform(-2.0, 2.0);
      ok = std::all_of(zs.begin(), zs.end(), [&](double w) {
        const double d = z - w;
        return std::abs(d - std::round(d)) >= 0.05;
      });
    } while (!ok);
    zs.push_back(z);
    const int deg = rng.integer(1, 3);
    CVec c(deg + 1);
    for (cplx& v : c) v = rng.normal();
    c[deg] = 1.0;
    V.members.push_back({z, Polynomial(c)});
  }
  return V;
}

CriterionResult duality(const AcceptanceConfig& cfg) {
  CriterionResult r = named(10, "Bispectral duality");
  const CalibrationResult cal = calibrate_dual_convention(cfg.seed);
  double ydist = 0.0, bdist = 0.0;
  int failed = 0;
  for (int t = 0; t < 100; ++t) {
    Rng rng(cfg.seed * 8 + 12, static_cast<uint64_t>(t));
    const DualityCheck c = check_duality(random_qp_space(rng), cal.convention);
    ydist = std::max(ydist, c.y_distance);
    bdist = std::max(bdist, c.base_distance);
    failed += !c.ok;
  }
  r.detail = "convention " + to_string(cal.convention.sign) + "/" + to_string(cal.convention.ordering) +
             " shift " + std::to_string(cal.convention.y_shift) + "; max Y distance " + fmt("%.3g", ydist) +
             ", max base distance " + fmt("%.3g", bdist) + ", " + std::to_string(failed) + "/100 failed";
  r.pass = failed == 0 && ydist <= 1e-6 && bdist <= 1e-6;
  return r;
}

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceConfig& cfg) {
  static const std::function<CriterionResult(const AcceptanceConfig&)> table[kCriteria] = {
      example1_region, example2_region, spectral_identities, vandermonde_lemma, rank_one,
      bethe_positivity, qkz_residues, reality_sampling, step_limit, duality};
  if (id < 1 || id > kCriteria) throw MathError("criterion id must be in 1..10");
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r = table[id - 1](cfg);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (id == 1 && r.seconds >= 30.0) {
    r.pass = false;
    r.detail += ", over the 30 s budget";
  }
  if (id == 2 && r.seconds >= 60.0) {
    r.pass = false;
    r.detail += ", over the 60 s budget";
  }
  return r;
}

std::string format_line(const CriterionResult& r) {
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.2f", r.seconds);
  return std::string(r.pass ? "PASS" : "FAIL") + " " + std::to_string(r.id) + " " + r.name + ": " + r.detail + " (" +
         secs + " s)";
}

}  // namespace wronski
