#include "wronski/quasiexp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "wronski/determinant.hpp"

namespace wronski {

std::string to_string(Mode m) {
  return m == Mode::multiplicative ? "multiplicative" : "exponent";
}

Mode mode_from_string(const std::string& s) {
  if (s == "multiplicative") return Mode::multiplicative;
  if (s == "exponent") return Mode::exponent;
  throw MathError("unknown mode '" + s + "'");
}

std::vector<std::vector<int>> group_by_param(const QuasiExpSpace& V) {
  std::vector<std::vector<int>> groups;
  std::vector<cplx> reps;
  for (int i = 0; i < static_cast<int>(V.dim()); ++i) {
    cplx q = V.members[i].param;
    bool placed = false;
    for (size_t g = 0; g < reps.size(); ++g) {
      double scale = std::max({1.0, std::abs(q), std::abs(reps[g])});
      if (std::abs(q - reps[g]) <= kParamMergeTol * scale) {
        groups[g].push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) {
      reps.push_back(q);
      groups.push_back({i});
    }
  }
  return groups;
}

QuasiExpSpace standard_basis(const QuasiExpSpace& V) {
  if (V.mode == Mode::multiplicative)
    for (auto& m : V.members)
      if (m.param == cplx(0.0)) throw MathError("zero base");
  QuasiExpSpace out{V.mode, {}};
  for (auto& grp : group_by_param(V)) {
    const int n = static_cast<int>(grp.size());
    int maxdeg = -1;
    for (int i : grp) maxdeg = std::max(maxdeg, V.members[i].poly.degree());
    if (maxdeg < 0 || maxdeg + 1 < n) throw MathError("degenerate space");
    Eigen::MatrixXcd A(n, maxdeg + 1);
    for (int r = 0; r < n; ++r)
      for (int k = 0; k <= maxdeg; ++k) A(r, k) = V.members[grp[r]].poly.coeff(k);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
    const auto& sv = svd.singularValues();
    if (sv(n - 1) <= kRankTol * sv(0)) throw MathError("degenerate space");

    // Row reduction from the top degree down with partial pivoting.
    const double tol = kRankTol * A.cwiseAbs().maxCoeff();
    std::vector<int> pivot_col(n, -1);
    std::vector<char> used(n, 0);
    int found = 0;
    for (int col = maxdeg; col >= 0 && found < n; --col) {
      int best = -1;
      double bv = tol;
      for (int r = 0; r < n; ++r)
        if (!used[r] && std::abs(A(r, col)) > bv) {
          bv = std::abs(A(r, col));
          best = r;
        }
      if (best < 0) continue;
      A.row(best) /= A(best, col);
      for (int r = 0; r < n; ++r)
        if (r != best) A.row(r) -= A(r, col) * A.row(best);
      used[best] = 1;
      pivot_col[best] = col;
      ++found;
    }
    if (found < n) throw MathError("degenerate space");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return pivot_col[a] < pivot_col[b]; });
    for (int r : order) {
      CVec c(pivot_col[r] + 1, 0.0);
      for (int k = 0; k < pivot_col[r]; ++k) c[k] = A(r, k);
      for (int o = 0; o < n; ++o)
        if (o != r && pivot_col[o] < pivot_col[r]) c[pivot_col[o]] = 0.0;
      c[pivot_col[r]] = 1.0;
      out.members.push_back({V.members[grp[0]].param, Polynomial(std::move(c))});
    }
  }
  return out;
}

namespace {

void require_step(const QuasiExpSpace& V, double h) {
  if (V.mode == Mode::multiplicative && h != 1.0)
    throw MathError("multiplicative mode supports step 1 only");
  if (h == 0.0 || !std::isfinite(h)) throw MathError("step must be nonzero");
}

}  // namespace

Polynomial raw_discrete_wronskian(const QuasiExpSpace& V, double h) {
  require_step(V, h);
  const int n = static_cast<int>(V.dim());
  if (n == 0) return Polynomial::constant(1.0);
  std::vector<std::vector<Polynomial>> M(n, std::vector<Polynomial>(n));
  for (int i = 0; i < n; ++i) {
    const auto& m = V.members[i];
    cplx step = V.mode == Mode::multiplicative ? m.param : std::exp(m.param * h);
    cplx pw = 1.0;
    for (int j = 0; j < n; ++j) {
      M[i][j] = m.poly.shifted(static_cast<double>(j) * h) * pw;
      pw *= step;
    }
  }
  return laplace_det(M, Polynomial());
}

Polynomial raw_wronskian(const QuasiExpSpace& V) {
  if (V.mode != Mode::exponent) throw MathError("differential Wronskian needs exponent mode");
  const int n = static_cast<int>(V.dim());
  if (n == 0) return Polynomial::constant(1.0);
  std::vector<std::vector<Polynomial>> M(n, std::vector<Polynomial>(n));
  for (int i = 0; i < n; ++i) {
    // (d/dx + lambda)^j p
    Polynomial cur = V.members[i].poly;
    for (int j = 0; j < n; ++j) {
      M[i][j] = cur;
      cur = cur.derivative() + cur * V.members[i].param;
    }
  }
  return laplace_det(M, Polynomial());
}

int wronskian_degree(const QuasiExpSpace& V) {
  QuasiExpSpace S = standard_basis(V);
  int D = 0;
  for (auto& grp : group_by_param(S)) {
    const int n = static_cast<int>(grp.size());
    for (int i : grp) D += S.members[i].poly.degree();
    D -= n * (n - 1) / 2;
  }
  return D;
}

namespace {

WronskianValue finish(const QuasiExpSpace& V, const Polynomial& raw) {
  int D;
  try {
    D = wronskian_degree(V);
  } catch (const MathError&) {
    throw MathError("identically zero Wronskian");
  }
  cplx kappa = raw.coeff(D);
  if (std::abs(kappa) <= kRankTol * std::max(raw.max_abs_coeff(), 1e-300))
    throw MathError("identically zero Wronskian");
  WronskianValue w;
  Polynomial m = raw.truncated(D);
  m *= 1.0 / kappa;
  CVec c = m.coeffs();
  c.resize(D + 1, 0.0);
  c[D] = 1.0;
  w.monic = Polynomial(std::move(c));
  w.kappa = kappa;
  w.prefactor_kind = V.mode;
  if (V.mode == Mode::multiplicative) {
    w.prefactor = 1.0;
    for (auto& mem : V.members) w.prefactor *= mem.param;
  } else {
    w.prefactor = 0.0;
    for (auto& mem : V.members) w.prefactor += mem.param;
  }
  return w;
}

}  // namespace

WronskianValue discrete_wronskian(const QuasiExpSpace& V, double h) {
  return finish(V, raw_discrete_wronskian(V, h));
}

WronskianValue wronskian(const QuasiExpSpace& V) { return finish(V, raw_wronskian(V)); }

int expected_degree(int l, const std::vector<int>& parts) {
  int N = 0, sq = 0;
  for (int p : parts) {
    if (p <= 0) throw MathError("part sizes must be positive");
    // each group spans at most l polynomials of degree < l
    if (l < p) throw MathError("ambient degree bound below a part size");
    N += p;
    sq += p * p;
  }
  return l * N - sq + 1;
}

QuasiExpSpace rescale(const QuasiExpSpace& V, double h) {
  if (V.mode != Mode::exponent) throw MathError("rescale needs exponent mode");
  if (h == 0.0) throw MathError("step must be nonzero");
  QuasiExpSpace out{Mode::multiplicative, {}};
  for (auto& m : V.members)
    out.members.push_back({std::exp(h * m.param), m.poly.scaled_argument(h).monic()});
  return out;
}

CVec ConfluentFamily::expanded_bases() const { return perturbed_bases(0.0); }

CVec ConfluentFamily::perturbed_bases(double h) const {
  CVec out;
  for (size_t s = 0; s < base_pattern.size(); ++s)
    for (int r = 0; r < mult[s]; ++r) out.push_back(base_pattern[s] + static_cast<double>(r) * h);
  return out;
}

std::vector<Polynomial> ConfluentFamily::p_in_Q(const CVec& Qs) const {
  // out[m] is the x-polynomial multiplying Q^m.
  std::vector<Polynomial> out(1, Polynomial::monomial(d));
  Polynomial prod = Polynomial::constant(1.0);
  for (int j = 0; j < N(); ++j) {
    const CVec& pc = prod.coeffs();
    if (out.size() < pc.size()) out.resize(pc.size());
    for (size_t m = 0; m < pc.size(); ++m) out[m] += q[j] * pc[m];
    prod *= Polynomial::linear_root(Qs[j]);
  }
  return out;
}

Polynomial ConfluentFamily::p_at(cplx Q, const CVec& Qs) const {
  auto coefQ = p_in_Q(Qs);
  Polynomial acc;
  cplx pw = 1.0;
  for (auto& c : coefQ) {
    acc += c * pw;
    pw *= Q;
  }
  return acc;
}

void validate(const ConfluentFamily& cf) {
  if (cf.base_pattern.size() != cf.mult.size()) throw MathError("base pattern and multiplicities differ in length");
  int N = std::accumulate(cf.mult.begin(), cf.mult.end(), 0);
  if (N != cf.N()) throw MathError("multiplicities must sum to the number of q polynomials");
  for (auto& qq : cf.q)
    if (qq.degree() >= cf.d) throw MathError("q polynomials must have degree below d");
}

Polynomial confluent_wronskian(const ConfluentFamily& cf, const CVec& Qs) {
  validate(cf);
  const int N = cf.N();
  if (static_cast<int>(Qs.size()) != N) throw MathError("need one base per q polynomial");
  cplx denom = 1.0;
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) {
      double scale = std::max({1.0, std::abs(Qs[i]), std::abs(Qs[j])});
      if (std::abs(Qs[j] - Qs[i]) <= 1e-14 * scale) throw MathError("use confluent_limit");
      denom *= Qs[j] - Qs[i];
    }
  QuasiExpSpace V{Mode::multiplicative, {}};
  for (int i = 0; i < N; ++i) V.members.push_back({Qs[i], cf.p_at(Qs[i], Qs)});
  return raw_discrete_wronskian(V, 1.0) * (1.0 / denom);
}

ConfluentLimit confluent_limit(const ConfluentFamily& cf) {
  validate(cf);
  auto coefQ = cf.p_in_Q(cf.expanded_bases());
  ConfluentLimit out;
  out.basis.mode = Mode::multiplicative;
  for (size_t s = 0; s < cf.base_pattern.size(); ++s) {
    cplx Q0 = cf.base_pattern[s];
    for (int r = 0; r < cf.mult[s]; ++r) {
      // (x + Q d/dQ)^r acts on Q^m·P(x) as Q^m·(x+m)^r·P(x).
      Polynomial acc;
      cplx pw = 1.0;
      for (size_t m = 0; m < coefQ.size(); ++m) {
        Polynomial t = coefQ[m];
        Polynomial xm({static_cast<double>(m), 1.0});
        for (int k = 0; k < r; ++k) t *= xm;
        acc += t * pw;
        pw *= Q0;
      }
      acc *= std::pow(Q0, -r);
      out.basis.members.push_back({Q0, acc});
    }
  }
  cplx den = 1.0;
  for (size_t i = 0; i < cf.base_pattern.size(); ++i) {
    for (size_t j = i + 1; j < cf.base_pattern.size(); ++j)
      den *= std::pow(cf.base_pattern[j] - cf.base_pattern[i], cf.mult[i] * cf.mult[j]);
    for (int j = 1; j < cf.mult[i]; ++j) den *= std::pow(static_cast<double>(cf.mult[i] - j), j);
  }
  out.c = 1.0 / den;
  return out;
}

cplx tau(const std::function<cplx(cplx)>& f, cplx Q, double h, int n) {
  if (n == 0) return f(Q);
  cplx acc = 0.0;
  double binom = 1.0;
  for (int t = 0; t <= n; ++t) {
    double sign = ((n - t) % 2 == 0) ? 1.0 : -1.0;
    acc += sign * binom * f(Q + static_cast<double>(t) * h);
    binom = binom * (n - t) / (t + 1);
  }
  return acc / std::pow(h, n);
}

Polynomial richardson(const std::vector<Polynomial>& samples) {
  if (samples.empty()) throw MathError("no samples");
  std::vector<Polynomial> row = samples;
  for (size_t level = 1; level < samples.size(); ++level) {
    double f = std::pow(2.0, static_cast<double>(level));
    std::vector<Polynomial> next;
    for (size_t k = 1; k < row.size(); ++k) next.push_back(row[k] + (row[k] - row[k - 1]) * (1.0 / (f - 1.0)));
    row = std::move(next);
  }
  return row.front();
}

Polynomial confluent_extrapolated(const ConfluentFamily& cf, double h0, int levels) {
  std::vector<Polynomial> samples;
  double h = h0;
  for (int k = 0; k < levels; ++k, h /= 2) samples.push_back(confluent_wronskian(cf, cf.perturbed_bases(h)));
  return richardson(samples);
}

}  // namespace wronski
