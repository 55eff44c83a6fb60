#include "wronski/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "wronski/acceptance.hpp"
#include "wronski/bethe.hpp"
#include "wronski/inverse.hpp"
#include "wronski/matrices.hpp"
#include "wronski/quasiexp.hpp"
#include "wronski/quasipoly.hpp"

namespace wronski::cli {

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  if (v == 0.0) v = 0.0;  // drops the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

bool scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

std::string dump_scalar(const Json& j) {
  if (j.is_number_float()) return format_double(j.get<double>());
  return j.dump();
}

void dump_into(const Json& j, int indent, std::string& s) {
  const std::string pad(indent + 2, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      s += "{}";
      return;
    }
    s += "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) s += ",\n";
      first = false;
      s += pad + Json(it.key()).dump() + ": ";
      dump_into(it.value(), indent + 2, s);
    }
    s += "\n" + std::string(indent, ' ') + "}";
  } else if (j.is_array()) {
    if (std::all_of(j.begin(), j.end(), scalar)) {
      s += "[";
      for (size_t i = 0; i < j.size(); ++i) s += (i ? ", " : "") + dump_scalar(j[i]);
      s += "]";
      return;
    }
    s += "[\n";
    for (size_t i = 0; i < j.size(); ++i) {
      s += (i ? ",\n" : "") + pad;
      dump_into(j[i], indent + 2, s);
    }
    s += "\n" + std::string(indent, ' ') + "]";
  } else {
    s += dump_scalar(j);
  }
}

std::string csv_field(const std::string& f) {
  if (f.find_first_of(",\"\n") == std::string::npos) return f;
  std::string q = "\"";
  for (char c : f) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

void flatten_into(const Json& j, const std::string& key, Table& t) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten_into(it.value(), key.empty() ? it.key() : key + "." + it.key(), t);
  } else if (j.is_array()) {
    for (size_t i = 0; i < j.size(); ++i) flatten_into(j[i], key + "." + std::to_string(i), t);
  } else {
    t.rows.push_back({key, j.is_string() ? j.get<std::string>() : dump_scalar(j)});
  }
}

}  // namespace

std::string dump_json(const Json& j) {
  std::string s;
  dump_into(j, 0, s);
  return s + "\n";
}

std::string render_csv(const Table& t) {
  std::string s;
  auto line = [&](const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) s += (i ? "," : "") + csv_field(fields[i]);
    s += "\n";
  };
  line(t.header);
  for (auto& r : t.rows) line(r);
  return s;
}

Table flatten(const Json& j) {
  Table t{{"field", "value"}, {}};
  flatten_into(j, "", t);
  return t;
}

namespace {

// ---- input ----

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

// Field accessors carry the file name and a JSON pointer for diagnostics.
struct Node {
  const Json& j;
  std::string where;

  [[noreturn]] void fail(const std::string& what) const { throw InputError(where + ": " + what); }

  bool has(const std::string& key) const { return j.is_object() && j.contains(key); }
  Node operator[](const std::string& key) const {
    if (!j.is_object()) fail("expected an object");
    if (!j.contains(key)) fail("missing field \"" + key + "\"");
    return {j.at(key), where + "/" + key};
  }
  Node operator[](size_t i) const { return {j.at(i), where + "/" + std::to_string(i)}; }
  size_t size() const {
    if (!j.is_array()) fail("expected an array");
    return j.size();
  }

  double real() const {
    if (!j.is_number()) fail("expected a number");
    return j.get<double>();
  }
  int integer() const {
    if (!j.is_number_integer()) fail("expected an integer");
    return j.get<int>();
  }
  std::string string() const {
    if (!j.is_string()) fail("expected a string");
    return j.get<std::string>();
  }
  // A number or [re, im].
  cplx complex() const {
    if (j.is_number()) return j.get<double>();
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
      return {j[0].get<double>(), j[1].get<double>()};
    fail("expected a number or [re, im]");
  }
  CVec cvec() const {
    CVec v;
    for (size_t i = 0; i < size(); ++i) v.push_back((*this)[i].complex());
    return v;
  }
  std::vector<int> ints() const {
    std::vector<int> v;
    for (size_t i = 0; i < size(); ++i) v.push_back((*this)[i].integer());
    return v;
  }
  // Coefficients in ascending degree.
  Polynomial poly() const { return Polynomial(cvec()); }
  CMat matrix() const {
    const size_t n = size();
    CMat m(n, n);
    for (size_t r = 0; r < n; ++r) {
      Node row = (*this)[r];
      if (row.size() != n) row.fail("expected a row of length " + std::to_string(n));
      for (size_t c = 0; c < n; ++c) m(r, c) = row[c].complex();
    }
    return m;
  }
};

template <class F>
auto validated(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const MathError& e) {
    throw InputError(where + ": " + e.what());
  }
}

// ---- output ----

Json cjson(cplx c) { return Json::array({c.real(), c.imag()}); }

Json cvec_json(const CVec& v) {
  Json a = Json::array();
  for (cplx c : v) a.push_back(cjson(c));
  return a;
}

Json poly_json(const Polynomial& p) { return cvec_json(p.coeffs()); }

Json space_json(const QuasiExpSpace& V) {
  Json a = Json::array();
  for (auto& m : V.members) {
    Json e;
    e["param"] = cjson(m.param);
    e["poly"] = poly_json(m.poly);
    a.push_back(std::move(e));
  }
  return a;
}

// ---- subcommands ----

struct Options {
  uint64_t seed = 1;
  std::optional<double> tol;
  int starts = 200;
  int jobs = 1;
  std::string out;
  std::string format;

  std::string params;
  std::string kind;
  int example = 0;
  double min = 0.0, max = 0.0, step = 0.0;
  std::optional<double> ymin, ymax, ystep;
  int N = 0, n = 0;
  std::vector<double> z, q;
  std::optional<int> s;
  std::string convention;
  int criterion = 0;

  double tol_or(double d) const { return tol.value_or(d); }
  SolverConfig solver() const {
    SolverConfig c;
    c.seed = seed;
    c.starts = starts;
    c.jobs = jobs;
    c.tol = tol_or(c.tol);
    return c;
  }
};

Report cmd_wronskian(const Options& o) {
  const Json doc = read_json(o.params);
  const Node root{doc, o.params + ":"};
  const WronskiKind kind =
      validated(root.where + "/kind", [&] { return wronski_kind_from_string(root["kind"].string()); });
  QuasiExpSpace V{kind == WronskiKind::discrete ? Mode::multiplicative : Mode::exponent, {}};
  const Node members = root["members"];
  for (size_t i = 0; i < members.size(); ++i)
    V.members.push_back({members[i]["param"].complex(), members[i]["poly"].poly()});
  if (V.members.empty()) root.fail("no members");
  const double h = root.has("step") ? root["step"].real() : 1.0;

  const WronskianValue w = kind == WronskiKind::discrete ? discrete_wronskian(V, h) : wronskian(V);
  Report r;
  r.body["subcommand"] = "wronskian";
  r.body["kind"] = to_string(kind);
  r.body["degree"] = w.monic.degree();
  r.body["monic"] = poly_json(w.monic);
  r.body["kappa"] = cjson(w.kappa);
  r.body["prefactor"] = cjson(w.prefactor);
  r.body["roots"] = cvec_json(w.monic.degree() > 0 ? roots(w.monic) : CVec{});
  return r;
}

Report cmd_inverse(const Options& o) {
  const Json doc = read_json(o.params);
  const Node root{doc, o.params + ":"};
  InverseProblem p;
  p.kind = validated(root.where + "/kind", [&] { return wronski_kind_from_string(root["kind"].string()); });
  p.targets = root["targets"].cvec();
  p.params = root["params"].cvec();
  p.degrees = root["degrees"].ints();
  validated(root.where, [&] {
    validate(p);
    return 0;
  });

  const SolverConfig cfg = o.solver();
  const SolutionSet s = solve_inverse(p, cfg);
  const RealityReport rr = reality_report(s, cfg.tol);
  const size_t k = p.unknowns().size();

  Report r;
  r.body["subcommand"] = "inverse";
  r.body["kind"] = to_string(p.kind);
  r.body["seed"] = o.seed;
  r.body["starts"] = s.starts;
  r.body["converged"] = s.converged;
  r.body["count"] = s.solutions.size();
  r.body["possibly_incomplete"] = s.possibly_incomplete;
  r.body["all_real"] = rr.all_real();
  r.body["max_residual"] = s.max_residual;
  Json sols = Json::array();
  Table t;
  t.header = {"solution", "real", "max_imag", "residual"};
  for (size_t j = 0; j < k; ++j) {
    t.header.push_back("u" + std::to_string(j) + "_re");
    t.header.push_back("u" + std::to_string(j) + "_im");
  }
  for (size_t i = 0; i < s.solutions.size(); ++i) {
    const InverseSolution& sol = s.solutions[i];
    Json e;
    e["u"] = cvec_json(sol.u);
    e["real"] = static_cast<bool>(rr.real[i]);
    e["max_imag"] = rr.max_imag[i];
    e["residual"] = sol.residual;
    e["members"] = space_json(sol.space);
    sols.push_back(std::move(e));
    std::vector<std::string> row{std::to_string(i), rr.real[i] ? "yes" : "no",
                                 format_double(rr.max_imag[i]), format_double(sol.residual)};
    for (cplx c : sol.u) {
      row.push_back(format_double(c.real()));
      row.push_back(format_double(c.imag()));
    }
    t.rows.push_back(std::move(row));
  }
  r.body["solutions"] = std::move(sols);
  r.table = std::move(t);
  r.pass = !s.possibly_incomplete;
  return r;
}

Report cmd_scan(const Options& o) {
  if (o.example != 1 && o.example != 2) throw InputError("--example must be 1 or 2");
  ScanGrid g{o.min, o.max, o.step, o.ymin.value_or(o.min), o.ymax.value_or(o.max), o.ystep.value_or(o.step)};
  validated("grid", [&] { return g.nx() * g.ny(); });
  const std::vector<ScanRow> rows = scan_region(o.example, g, o.solver());

  int disagree = 0, band = 0, incomplete = 0;
  Table t;
  t.header = {"A", o.example == 1 ? "Q" : "B", "condition_sign", "solver_verdict", "agree"};
  Json jr = Json::array();
  for (auto& row : rows) {
    disagree += row.agree.has_value() && !*row.agree;
    band += !row.agree.has_value();
    incomplete += row.verdict == Verdict::incomplete;
    const std::string agree = row.agree ? (*row.agree ? "yes" : "no") : "boundary";
    t.rows.push_back({format_double(row.x), format_double(row.y), std::to_string(row.condition_sign),
                      to_string(row.verdict), agree});
    Json e;
    e[t.header[0]] = row.x;
    e[t.header[1]] = row.y;
    e["condition"] = row.condition;
    e["condition_sign"] = row.condition_sign;
    e["solver_verdict"] = to_string(row.verdict);
    e["count"] = row.count;
    e["agree"] = agree;
    jr.push_back(std::move(e));
  }
  Report r;
  r.body["subcommand"] = "scan";
  r.body["example"] = o.example;
  r.body["seed"] = o.seed;
  r.body["points"] = rows.size();
  r.body["disagreements"] = disagree;
  r.body["boundary_band"] = band;
  r.body["incomplete"] = incomplete;
  r.body["rows"] = std::move(jr);
  r.table = std::move(t);
  r.pass = disagree == 0;
  return r;
}

Report cmd_matrix_check(const Options& o) {
  const Json doc = read_json(o.params);
  const Node root{doc, o.params + ":"};
  StructuredParams p;
  p.kind = validated("--kind", [&] { return matrix_kind_from_string(o.kind); });
  p.sites = root["sites"].cvec();
  p.weights = root["weights"].cvec();
  validated(root.where, [&] {
    validate(p);
    return 0;
  });

  const SpectrumCheck sc = spectrum_vs_wronskian(p);
  Report r;
  r.body["subcommand"] = "matrix-check";
  r.body["kind"] = to_string(p.kind);
  r.body["N"] = p.sites.size();
  r.body["eigenvalues"] = cvec_json(sc.eigenvalues);
  r.body["roots"] = cvec_json(sc.roots);
  r.body["distance"] = sc.distance;
  r.body["spectrum_ok"] = sc.ok();
  r.pass = sc.ok();
  const bool real_sites = std::all_of(p.sites.begin(), p.sites.end(), [](cplx c) { return c.imag() == 0.0; });
  if (real_sites) {
    const RealityVerdict v = reality_verdict(p, o.tol_or(1e-6));
    Json rv;
    rv["eigenvalues_real"] = v.eigenvalues_real;
    rv["hypotheses"] = v.hypotheses;
    rv["weights_real"] = v.weights_real;
    rv["claim"] = v.claim;
    rv["consistent"] = v.consistent();
    r.body["reality"] = std::move(rv);
    r.pass = r.pass && v.consistent();
  }
  return r;
}

Report cmd_cm_check(const Options& o) {
  const Json doc = read_json(o.params);
  const Node root{doc, o.params + ":"};
  CMPair pair;
  pair.mode = root.has("mode")
                  ? validated(root.where + "/mode", [&] { return cm_mode_from_string(root["mode"].string()); })
                  : CMMode::multiplicative;
  pair.Z = root["Z"].matrix();
  pair.Q = root["Q"].matrix();
  if (pair.Z.rows() != pair.Q.rows()) root.fail("Z and Q differ in size");
  if (pair.Z.rows() == 0) root.fail("empty matrices");

  const RankOneResult ro = cm_rank_one(pair);
  Report r;
  r.body["subcommand"] = "cm-check";
  r.body["mode"] = to_string(pair.mode);
  r.body["N"] = pair.Z.rows();
  r.body["rank_one"] = ro.holds;
  r.body["singular_value_ratio"] = ro.ratio;
  Json rf;
  try {
    const RealForm f = realize_real_form(pair, o.tol_or(1e-6));
    rf["found"] = f.C.has_value();
    rf["failure"] = f.failure;
    rf["imag_residual"] = f.imag_residual;
    rf["weights"] = cvec_json(f.weights);
  } catch (const MathError& e) {
    rf["found"] = false;
    rf["failure"] = e.what();
  }
  r.body["real_form"] = std::move(rf);
  r.pass = ro.holds;
  return r;
}

Json form_json(const FormCertificate& c, bool hypotheses) {
  Json j;
  j["hypotheses"] = hypotheses;
  j["symmetric"] = c.symmetric();
  j["symmetry_defect"] = c.symmetry_defect;
  j["min_eig"] = c.min_eigenvalue;
  j["positive_definite"] = c.positive_definite();
  return j;
}

bool form_ok(const FormCertificate& c, bool hypotheses) {
  return c.symmetric() && (!hypotheses || c.positive_definite());
}

Report cmd_bethe_check(const Options& o) {
  TensorSpace ts;
  std::optional<int> s = o.s;
  if (!o.params.empty()) {
    const Json doc = read_json(o.params);
    const Node root{doc, o.params + ":"};
    ts.N = root["N"].integer();
    ts.z = root["z"].cvec();
    ts.Q = root["Q"].cvec();
    if (root.has("n") && root["n"].integer() != ts.n()) root["n"].fail("does not match the length of z");
    if (root.has("s")) s = root["s"].integer();
  } else {
    ts.N = o.N;
    ts.z.assign(o.z.begin(), o.z.end());
    ts.Q.assign(o.q.begin(), o.q.end());
    if (o.n != ts.n()) throw InputError("--n does not match the number of --z values");
  }
  validated("bethe-check", [&] {
    validate(ts);
    return 0;
  });
  if (s && (*s < 0 || *s > ts.n())) throw InputError("--s must lie in [0, n]");

  const bool hyp = untwisted_hypotheses(ts);
  const FormCertificate c = certify_form(ts, CMat::Identity(ts.dim(), ts.dim()));
  Report r;
  r.body["subcommand"] = "bethe-check";
  r.body["N"] = ts.N;
  r.body["n"] = ts.n();
  r.body["z"] = cvec_json(ts.z);
  r.body["Q"] = cvec_json(ts.Q);
  const Json form = form_json(c, hyp);
  for (auto it = form.begin(); it != form.end(); ++it) r.body[it.key()] = it.value();
  r.pass = form_ok(c, hyp);
  if (s) {
    const bool th = twisted_hypotheses(ts, *s);
    const FormCertificate tc = certify_form(ts, twist_G(ts, *s));
    Json tw;
    tw["s"] = *s;
    const Json tform = form_json(tc, th);
    for (auto it = tform.begin(); it != tform.end(); ++it) tw[it.key()] = it.value();
    r.body["twisted"] = std::move(tw);
    r.pass = r.pass && form_ok(tc, th);
  }
  return r;
}

Report cmd_dual_check(const Options& o) {
  const Json doc = read_json(o.params);
  const Node root{doc, o.params + ":"};
  QuasiPolySpace V;
  const Node members = root["members"];
  for (size_t i = 0; i < members.size(); ++i)
    V.members.push_back({members[i]["z"].real(), members[i]["p"].poly()});
  if (V.members.empty()) root.fail("no members");
  const std::string conv_path =
      o.convention.empty() ? std::string(WRONSKI_CONFIG_DIR) + "/dual_convention.json" : o.convention;
  const DualConvention conv = validated(conv_path, [&] { return load_dual_convention(conv_path); });

  const DualityCheck d = check_duality(V, conv, o.tol_or(1e-6));
  Report r;
  r.body["subcommand"] = "dual-check";
  r.body["shift_sign"] = to_string(conv.sign);
  r.body["ordering"] = to_string(conv.ordering);
  r.body["y_shift"] = conv.y_shift;
  r.body["Y"] = poly_json(d.Y);
  r.body["wr_dual"] = poly_json(d.wr_dual);
  r.body["y_distance"] = d.y_distance;
  r.body["base_distance"] = d.base_distance;
  r.body["ok"] = d.ok;
  r.pass = d.ok;
  return r;
}

Report cmd_selftest(const Options& o) {
  if (o.criterion < 0 || o.criterion > kCriteria) throw InputError("--criterion must lie in [1, 10]");
  AcceptanceConfig cfg;
  cfg.seed = o.seed;
  cfg.starts = o.starts;
  cfg.jobs = o.jobs;
  Report r;
  Table t{{"id", "name", "pass", "detail"}, {}};
  Json crit = Json::array();
  int passed = 0, total = 0;
  for (int id = 1; id <= kCriteria; ++id) {
    if (o.criterion != 0 && id != o.criterion) continue;
    CriterionResult c;
    c.id = id;
    try {
      c = run_criterion(id, cfg);
    } catch (const std::exception& e) {
      c.detail = e.what();
    }
    ++total;
    passed += c.pass;
    Json e;
    e["id"] = c.id;
    e["name"] = c.name;
    e["pass"] = c.pass;
    e["detail"] = c.detail;
    crit.push_back(std::move(e));
    t.rows.push_back({std::to_string(id), c.name, c.pass ? "yes" : "no", c.detail});
  }
  r.body["subcommand"] = "selftest";
  r.body["seed"] = o.seed;
  r.body["passed"] = passed;
  r.body["total"] = total;
  r.body["criteria"] = std::move(crit);
  r.table = std::move(t);
  r.pass = passed == total;
  return r;
}

std::string render(const Report& r, const std::string& format) {
  if (format == "csv") return render_csv(r.table ? *r.table : flatten(r.body));
  return dump_json(r.body);
}

std::string choose_format(const Options& o) {
  if (!o.format.empty()) return o.format;
  const auto dot = o.out.rfind('.');
  if (dot != std::string::npos && o.out.substr(dot) == ".csv") return "csv";
  return "json";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Wronskian maps, structured matrices and Bethe-algebra checks"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", o.seed, "RNG seed");
  app.add_option("--tol", o.tol, "tolerance override");
  app.add_option("--starts", o.starts, "random starts per solve")->check(CLI::PositiveNumber);
  app.add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", o.out, "report path (default stdout)");
  app.add_option("--format", o.format, "csv or json (default from --out, else json)")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* wr = app.add_subcommand("wronskian", "Wronskian of a quasi-exponential space");
  wr->add_option("--params", o.params, "space JSON")->required();
  auto* inv = app.add_subcommand("inverse", "all spaces with a given Wronskian");
  inv->add_option("--params", o.params, "problem JSON")->required();
  auto* scan = app.add_subcommand("scan", "reality region of Example 1 or 2");
  scan->add_option("--example", o.example, "1 or 2")->required();
  scan->add_option("--min", o.min, "axis minimum")->required();
  scan->add_option("--max", o.max, "axis maximum")->required();
  scan->add_option("--step", o.step, "axis step")->required();
  scan->add_option("--ymin", o.ymin, "second axis minimum (default --min)");
  scan->add_option("--ymax", o.ymax, "second axis maximum (default --max)");
  scan->add_option("--ystep", o.ystep, "second axis step (default --step)");
  auto* mc = app.add_subcommand("matrix-check", "spectrum and reality of Zd, Z or Qd");
  mc->add_option("--kind", o.kind, "zd, z or qd")->required();
  mc->add_option("--params", o.params, "sites and weights JSON")->required();
  auto* cm = app.add_subcommand("cm-check", "rank-one condition and real form of a pair");
  cm->add_option("--params", o.params, "pair JSON")->required();
  auto* bc = app.add_subcommand("bethe-check", "symmetry and positivity of the Bethe forms");
  bc->add_option("--params", o.params, "tensor space JSON");
  bc->add_option("--N", o.N, "local dimension");
  bc->add_option("--n", o.n, "number of sites");
  bc->add_option("--z", o.z, "evaluation points")->delimiter(',');
  bc->add_option("--q", o.q, "twist entries")->delimiter(',');
  bc->add_option("--s", o.s, "twisted form G_s");
  auto* dc = app.add_subcommand("dual-check", "bispectral duality of a quasi-polynomial space");
  dc->add_option("--params", o.params, "space JSON")->required();
  dc->add_option("--convention", o.convention, "dual convention JSON");
  auto* st = app.add_subcommand("selftest", "acceptance criteria");
  st->add_option("--criterion", o.criterion, "single criterion 1..10 (default all)");

  std::vector<std::string> argv_s{"wronski"};
  argv_s.insert(argv_s.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_s) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (bc->parsed() && o.params.empty() && (o.N == 0 || o.z.empty() || o.q.empty()))
      throw InputError("bethe-check needs --params or all of --N, --n, --z, --q");
    Report r;
    if (wr->parsed()) r = cmd_wronskian(o);
    else if (inv->parsed()) r = cmd_inverse(o);
    else if (scan->parsed()) r = cmd_scan(o);
    else if (mc->parsed()) r = cmd_matrix_check(o);
    else if (cm->parsed()) r = cmd_cm_check(o);
    else if (bc->parsed()) r = cmd_bethe_check(o);
    else if (dc->parsed()) r = cmd_dual_check(o);
    else r = cmd_selftest(o);

    const std::string text = render(r, choose_format(o));
    if (o.out.empty()) {
      out << text;
    } else {
      std::ofstream f(o.out, std::ios::binary);
      if (!(f << text) || !f.flush()) throw InputError(o.out + ": cannot write");
    }
    if (!r.pass) err << "assertion failed\n";
    return r.pass ? kExitPass : kExitAssertion;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitAssertion;
  }
}

}  // namespace wronski::cli
