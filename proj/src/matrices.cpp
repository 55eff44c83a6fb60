#include "wronski/matrices.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "wronski/quasiexp.hpp"
#include "wronski/quasipoly.hpp"

namespace wronski {

std::string to_string(MatrixKind k) {
  switch (k) {
    case MatrixKind::Zd: return "Zd";
    case MatrixKind::Z: return "Z";
    case MatrixKind::Qd: return "Qd";
  }
  return "Zd";
}

MatrixKind matrix_kind_from_string(const std::string& s) {
  std::string l = s;
  for (char& c : l) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (l == "zd") return MatrixKind::Zd;
  if (l == "z") return MatrixKind::Z;
  if (l == "qd") return MatrixKind::Qd;
  throw MathError("unknown matrix kind: " + s);
}

std::string to_string(CMMode m) { return m == CMMode::multiplicative ? "multiplicative" : "additive"; }

CMMode cm_mode_from_string(const std::string& s) {
  if (s == "multiplicative") return CMMode::multiplicative;
  if (s == "additive") return CMMode::additive;
  throw MathError("unknown pair mode: " + s);
}

namespace {

double max_abs(const CMat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

CVec diagonal(const CMat& m) {
  CVec d;
  for (Eigen::Index i = 0; i < m.rows(); ++i) d.push_back(m(i, i));
  return d;
}

CVec eigenvalues(const CMat& m) {
  Eigen::ComplexEigenSolver<CMat> es(m, false);
  if (es.info() != Eigen::Success) throw MathError("eigensolver failed");
  CVec ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return sorted_lex(ev);
}

void check_distinct(const CVec& s) {
  for (size_t i = 0; i < s.size(); ++i)
    for (size_t j = i + 1; j < s.size(); ++j)
      if (std::abs(s[i] - s[j]) <= kSiteMargin) throw MathError("sites not distinct");
}

std::vector<double> real_parts(const CVec& v) {
  std::vector<double> r;
  for (cplx c : v) r.push_back(c.real());
  return r;
}

bool all_real(const CVec& v, double tol) {
  return std::all_of(v.begin(), v.end(), [&](cplx c) { return is_real(c, tol); });
}

bool same_sign(const CVec& v) {
  return std::all_of(v.begin(), v.end(), [](cplx c) { return c.real() > 0.0; }) ||
         std::all_of(v.begin(), v.end(), [](cplx c) { return c.real() < 0.0; });
}

// Sbar S^-1 for the Vandermonde matrix S_ij = Q_i^(j-1).
CMat numeric_m(const CVec& Q) {
  const int n = static_cast<int>(Q.size());
  CMat S(n, n), Sb(n, n);
  for (int i = 0; i < n; ++i) {
    cplx p = 1.0;
    for (int j = 0; j < n; ++j) {
      S(i, j) = p;
      Sb(i, j) = static_cast<double>(j) * p;
      p *= Q[i];
    }
  }
  // M S = Sbar  <=>  S^T M^T = Sbar^T
  return S.transpose().fullPivLu().solve(Sb.transpose()).transpose();
}

CMat closed_form_m(const CVec& Q) {
  const int n = static_cast<int>(Q.size());
  CMat M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        cplx s = 0.0;
        for (int k = 0; k < n; ++k)
          if (k != i) s += 1.0 / (Q[i] - Q[k]);
        M(i, i) = Q[i] * s;
      } else {
        cplx num = 1.0, den = 1.0;
        for (int k = 0; k < n; ++k) {
          if (k != i && k != j) num *= Q[i] - Q[k];
          if (k != j) den *= Q[j] - Q[k];
        }
        M(i, j) = Q[i] * num / den;
      }
    }
  return M;
}

void check_bases(const CVec& Q) {
  for (cplx q : Q)
    if (std::abs(q) <= kSiteMargin) throw MathError("zero base");
  for (size_t i = 0; i < Q.size(); ++i)
    for (size_t j = i + 1; j < Q.size(); ++j)
      if (std::abs(Q[i] - Q[j]) <= kSiteMargin) throw MathError("near-coincident bases");
}

}  // namespace

void validate(const StructuredParams& p) {
  if (p.sites.empty()) throw MathError("empty parameters");
  if (p.sites.size() != p.weights.size()) throw MathError("sites and weights differ in length");
  check_distinct(p.sites);
  if (p.kind == MatrixKind::Zd)
    for (cplx q : p.sites)
      if (std::abs(q) <= kSiteMargin) throw MathError("zero base");
  if (p.kind == MatrixKind::Qd)
    for (size_t i = 0; i < p.sites.size(); ++i)
      for (size_t j = 0; j < p.sites.size(); ++j)
        if (i != j && std::abs(p.sites[i] - p.sites[j] - 1.0) <= kSiteMargin)
          throw MathError("resonant sites: z_i - z_j = 1");
}

CMat build(const StructuredParams& p) {
  validate(p);
  const int n = static_cast<int>(p.sites.size());
  const CVec& s = p.sites;
  const CVec& w = p.weights;
  CMat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (p.kind == MatrixKind::Qd) {
        m(i, j) = i == j ? w[j] : w[j] / (s[i] - s[j] + 1.0);
      } else if (i == j) {
        m(i, j) = w[i];
      } else if (p.kind == MatrixKind::Zd) {
        m(i, j) = s[i] / (s[j] - s[i]);
      } else {
        m(i, j) = 1.0 / (s[j] - s[i]);
      }
    }
  return m;
}

VandermondeCheck vandermonde_m(const CVec& Q) {
  if (Q.empty()) throw MathError("empty parameters");
  check_bases(Q);
  const int n = static_cast<int>(Q.size());
  VandermondeCheck r;
  r.M = closed_form_m(Q);
  r.residual = max_abs(r.M - numeric_m(Q)) / std::max(1.0, max_abs(r.M));
  CMat S(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) S(i, j) = std::pow(Q[i], j);
  cplx prod = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) prod *= Q[j] - Q[i];
  r.det_residual = std::abs(S.determinant() - prod) / std::max(1.0, std::abs(prod));
  return r;
}

double conjugation_check(const CVec& Q, const CVec& a) {
  StructuredParams p{MatrixKind::Zd, Q, a};
  const CMat Zd = build(p);
  const int n = static_cast<int>(Q.size());
  const CMat M = numeric_m(Q);
  const CMat closed = closed_form_m(Q);
  CMat lhs(n, n);
  for (int i = 0; i < n; ++i) {
    cplx di = 1.0;
    for (int s = 0; s < n; ++s)
      if (s != i) di *= Q[i] - Q[s];
    for (int j = 0; j < n; ++j) {
      cplx dj = 1.0;
      for (int s = 0; s < n; ++s)
        if (s != j) dj *= Q[j] - Q[s];
      lhs(i, j) = -M(i, j) * dj / di;
    }
    lhs(i, i) += a[i] + closed(i, i);
  }
  return max_abs(lhs - Zd) / std::max(1.0, max_abs(Zd));
}

double conjugation_spectrum_distance(const CVec& Q, const CVec& a) {
  const CMat Zd = build({MatrixKind::Zd, Q, a});
  const int n = static_cast<int>(Q.size());
  const CMat M = closed_form_m(Q);
  CMat other = -M;
  for (int i = 0; i < n; ++i) other(i, i) += a[i] + M(i, i);
  return match_roots(eigenvalues(Zd), eigenvalues(other)).max_distance;
}

CVec shifted_weights(const StructuredParams& p) {
  validate(p);
  const int n = static_cast<int>(p.sites.size());
  const CVec& s = p.sites;
  CVec out(p.weights);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      switch (p.kind) {
        case MatrixKind::Zd: out[i] += s[i] / (s[i] - s[k]); break;
        case MatrixKind::Z: out[i] += 1.0 / (s[i] - s[k]); break;
        case MatrixKind::Qd: out[i] *= (s[i] - s[k]) / (s[i] - s[k] - 1.0); break;
      }
    }
  return out;
}

namespace {

// Roots of the Wronskian whose members carry the shifted weights, unscaled.
CVec wronskian_roots(const StructuredParams& p) {
  const CVec w = shifted_weights(p);
  const size_t n = w.size();
  if (p.kind == MatrixKind::Qd) {
    QuasiPolySpace V;
    for (size_t i = 0; i < n; ++i) {
      if (p.sites[i].imag() != 0.0) throw MathError("Qd comparison needs real sites");
      V.members.push_back({p.sites[i].real(), Polynomial::linear_root(w[i])});
    }
    CVec r = roots(qp_wronskian(V).w);
    // a root at 0 is absorbed into the x^r prefactor
    while (r.size() < n) r.push_back(0.0);
    return r;
  }
  QuasiExpSpace V;
  V.mode = p.kind == MatrixKind::Zd ? Mode::multiplicative : Mode::exponent;
  for (size_t i = 0; i < n; ++i) V.members.push_back({p.sites[i], Polynomial::linear_root(w[i])});
  const WronskianValue W = p.kind == MatrixKind::Zd ? discrete_wronskian(V, 1.0) : wronskian(V);
  return roots(W.monic);
}

}  // namespace

SpectrumCheck spectrum_vs_wronskian(const StructuredParams& p) {
  SpectrumCheck r;
  r.eigenvalues = eigenvalues(build(p));
  CVec w = wronskian_roots(p);
  if (p.kind == MatrixKind::Qd)
    for (cplx& x : w) x *= kQdScale;
  r.roots = sorted_lex(w);
  if (r.roots.size() != r.eigenvalues.size()) throw MathError("Wronskian degree below dimension");
  r.distance = match_roots(r.eigenvalues, r.roots).max_distance;
  return r;
}

cplx fit_qd_scale(const StructuredParams& p) {
  if (p.kind != MatrixKind::Qd) throw MathError("scale fit needs kind Qd");
  const CVec ev = eigenvalues(build(p));
  const CVec w = wronskian_roots(p);
  cplx pe = 1.0, pw = 1.0;
  for (cplx e : ev) pe *= e;
  for (cplx x : w) pw *= x;
  if (std::abs(pw) == 0.0) throw MathError("zero Wronskian root");
  const int n = static_cast<int>(ev.size());
  const cplx base = std::pow(pe / pw, 1.0 / n);
  cplx best = base;
  double best_d = INFINITY;
  for (int k = 0; k < n; ++k) {
    const cplx s = base * std::polar(1.0, 2.0 * std::numbers::pi * k / n);
    CVec scaled(w);
    for (cplx& x : scaled) x *= s;
    const double d = match_roots(ev, sorted_lex(scaled)).max_distance;
    if (d < best_d) {
      best_d = d;
      best = s;
    }
  }
  return best;
}

RealityVerdict reality_verdict(const StructuredParams& p, double tol) {
  for (cplx s : p.sites)
    if (s.imag() != 0.0) throw MathError("reality verdict needs real sites");
  RealityVerdict r;
  r.eigenvalues = eigenvalues(build(p));
  r.eigenvalues_real = all_real(r.eigenvalues, tol);
  r.weights_real = all_real(p.weights, tol);
  r.claim = "no claim";
  if (!r.eigenvalues_real) return r;
  switch (p.kind) {
    case MatrixKind::Zd: {
      const RegionTest t = theorem_region_test(real_parts(r.eigenvalues), same_sign(p.sites));
      if (t.separated) r.claim = "separated eigenvalues";
      else if (t.subset) r.claim = "same-sign bases with separated bipartition";
      r.hypotheses = t.holds();
      break;
    }
    case MatrixKind::Z:
      r.claim = "real eigenvalues";
      r.hypotheses = true;
      break;
    case MatrixKind::Qd: {
      const std::vector<double> z = real_parts(p.sites);
      std::vector<double> sorted(z);
      std::sort(sorted.begin(), sorted.end());
      bool strict = true;
      for (size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i] - sorted[i - 1] <= 1.0) strict = false;
      std::vector<double> ev = real_parts(r.eigenvalues);
      bool nonzero_distinct = std::all_of(ev.begin(), ev.end(), [](double e) { return e != 0.0; });
      std::sort(ev.begin(), ev.end());
      for (size_t i = 1; i < ev.size(); ++i)
        if (ev[i] - ev[i - 1] <= kSiteMargin) nonzero_distinct = false;
      if (!nonzero_distinct) return r;
      if (strict) {
        r.claim = "sites separated by more than 1";
        r.hypotheses = true;
      } else if (same_sign(r.eigenvalues) && theorem_region_test(z, true).holds()) {
        r.claim = "same-sign eigenvalues with separated bipartition";
        r.hypotheses = true;
      }
      break;
    }
  }
  return r;
}

RankOneResult cm_rank_one(const CMPair& pair) {
  const Eigen::Index n = pair.Z.rows();
  if (pair.Z.cols() != n || pair.Q.rows() != n || pair.Q.cols() != n)
    throw MathError("pair matrices must be square of equal size");
  RankOneResult r;
  const CMat I = CMat::Identity(n, n);
  if (pair.mode == CMMode::multiplicative) {
    Eigen::FullPivLU<CMat> lu(pair.Q);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) throw MathError("singular Q");
    r.K = I - pair.Z + lu.solve(pair.Z * pair.Q);
  } else {
    r.K = I - (pair.Q * pair.Z - pair.Z * pair.Q);
  }
  Eigen::JacobiSVD<CMat> svd(r.K);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return r;
  r.ratio = sv.size() > 1 ? sv(1) / sv(0) : 0.0;
  r.holds = r.ratio <= kRankOneTol;
  return r;
}

double z_commutator_residual(const CVec& lambda, const CVec& a) {
  const CMat Z = build({MatrixKind::Z, lambda, a});
  const int n = static_cast<int>(lambda.size());
  CMat L = CMat::Zero(n, n);
  for (int i = 0; i < n; ++i) L(i, i) = lambda[i];
  const CMat target = CMat::Identity(n, n) - CMat::Ones(n, n);
  return max_abs(L * Z - Z * L - target);
}

double qd_rank_one_residual(const CVec& z, const CVec& b) {
  const CMat Q = build({MatrixKind::Qd, z, b});
  const int n = static_cast<int>(z.size());
  CMat Zm = CMat::Zero(n, n);
  CMat target(n, n);
  for (int i = 0; i < n; ++i) {
    Zm(i, i) = z[i];
    for (int j = 0; j < n; ++j) target(i, j) = -b[j];
  }
  return max_abs(Q * Zm - Zm * Q - Q - target);
}

RealForm realize_real_form(const CMPair& pair, double tol) {
  const Eigen::Index n = pair.Z.rows();
  RealForm out;
  const RankOneResult rk = cm_rank_one(pair);
  if (!rk.holds) {
    out.failure = "rank-one condition fails";
    return out;
  }
  const double scale = std::max({1.0, max_abs(pair.Q), max_abs(pair.Z)});
  Eigen::ComplexEigenSolver<CMat> es(pair.Q);
  if (es.info() != Eigen::Success) throw MathError("eigensolver failed");
  const CVec q(es.eigenvalues().data(), es.eigenvalues().data() + n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (std::abs(q[i] - q[j]) <= 1e-8 * scale) throw MathError("semisimple case only");
  const CVec z = eigenvalues(pair.Z);
  if (!all_real(q, tol) || !all_real(z, tol)) {
    out.failure = "non-real spectrum";
    return out;
  }
  if (pair.mode == CMMode::multiplicative) {
    bool pos = std::all_of(q.begin(), q.end(), [](cplx c) { return c.real() > 0.0; });
    bool neg = std::all_of(q.begin(), q.end(), [](cplx c) { return c.real() < 0.0; });
    if (!theorem_region_test(real_parts(z), pos || neg).holds()) {
      out.failure = "hypotheses violated";
      return out;
    }
  }
  if (pair.Q.imag().cwiseAbs().maxCoeff() <= kRealFormTol * scale &&
      pair.Z.imag().cwiseAbs().maxCoeff() <= kRealFormTol * scale) {
    out.C = CMat::Identity(n, n);
    out.weights = diagonal(pair.Z);
    return out;
  }

  // In the eigenbasis of Q, K has unit diagonal and rank one, K = u w^T with
  // u_i w_i = 1; conjugating by diag(u) turns K into the all-ones matrix and Z
  // into the structured form.
  const CMat P = es.eigenvectors();
  const CMat Zp = P.fullPivLu().solve(pair.Z * P);
  CMat Kp(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) {
        Kp(i, j) = 1.0;
        continue;
      }
      const cplx f = pair.mode == CMMode::multiplicative ? 1.0 - q[j] / q[i] : q[i] - q[j];
      Kp(i, j) = -f * Zp(i, j);
    }
  Eigen::JacobiSVD<CMat> svd(Kp, Eigen::ComputeFullU);
  const Eigen::VectorXcd u = svd.singularValues()(0) * svd.matrixU().col(0);
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(u(i)) <= 1e-12) {
      out.failure = "rank-one factor has a zero entry";
      return out;
    }
  const CMat C = P * u.asDiagonal();
  Eigen::FullPivLU<CMat> lu(C);
  const CMat Qr = lu.solve(pair.Q * C);
  const CMat Zr = lu.solve(pair.Z * C);
  out.weights = diagonal(Zr);
  out.imag_residual = (Qr.imag().cwiseAbs().maxCoeff() + Zr.imag().cwiseAbs().maxCoeff()) / scale;
  if (!all_real(out.weights, tol)) {
    out.failure = "diagonal vector not real";
    return out;
  }
  if (out.imag_residual > kRealFormTol) {
    out.failure = "real form residual too large";
    return out;
  }
  out.C = C;
  return out;
}

}  // namespace wronski
