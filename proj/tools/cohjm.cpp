#include "coh/io.hpp"
#include "coh/model_centro3.hpp"
#include "coh/model_spinboson.hpp"
#include "coh/model_uniform.hpp"
#include "coh/witness.hpp"
#include "svg.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

using namespace coh;
using coh::io::json;

namespace {

enum Exit { kMember = 0, kNotMember = 1, kUnknown = 2, kUsage = 64, kInternal = 70 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// a:b:n, n points from a to b inclusive
std::vector<double> parse_grid(const std::string& spec) {
  double a, b;
  int n;
  char c1, c2, extra;
  std::istringstream in(spec);
  if (!(in >> a >> c1 >> b >> c2 >> n) || c1 != ':' || c2 != ':' || (in >> extra))
    throw UsageError("grid must look like a:b:n, got '" + spec + "'");
  if (n < 1) throw UsageError("grid needs at least one point");
  if (!std::isfinite(a) || !std::isfinite(b)) throw UsageError("grid ends must be finite");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return g;
}

struct Common {
  int jobs = 0;
  double alpha_tol = 1e-4;
  long max_iters = SolverOptions{}.max_iters;
  bool no_seeds = false;
  std::string out;

  void add(CLI::App* app, bool tol = true) {
    app->add_option("--jobs", jobs, "worker threads (0: runtime default)")->check(CLI::NonNegativeNumber);
    if (tol) app->add_option("--alpha-tol", alpha_tol, "bisection tolerance")->check(CLI::PositiveNumber);
    app->add_option("--max-iters", max_iters, "solver iteration budget per instance")
        ->check(CLI::PositiveNumber);
    app->add_option("--out", out, "output file (default: stdout)");
  }
  void apply() const { set_num_threads(jobs); }
  Exec exec() const { return jobs == 1 ? Exec::serial : Exec::parallel; }
  AlphaStarOptions alpha_opts() const {
    AlphaStarOptions o;
    o.bisect_tol = alpha_tol;
    o.use_seeds = !no_seeds;
    o.solver.max_iters = max_iters;
    return o;
  }
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw UsageError("cannot write " + path);
    }
  }
  std::ostream& get() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

int status_exit(Status s) {
  switch (s) {
    case Status::feasible: return kMember;
    case Status::infeasible: return kNotMember;
    case Status::unknown: return kUnknown;
  }
  return kUnknown;
}

std::string schur_name(SchurResult::Kind k) {
  switch (k) {
    case SchurResult::Kind::certified: return "certified";
    case SchurResult::Kind::inconclusive: return "inconclusive";
    case SchurResult::Kind::inapplicable: return "inapplicable";
  }
  return "inapplicable";
}

json pairs(const std::vector<std::pair<Index, Index>>& v) {
  json a = json::array();
  for (const auto& [n, m] : v) a.push_back({n, m});
  return a;
}

// check ---------------------------------------------------------------------

struct CheckArgs {
  Common common;
  std::string coherence, incoherent, povm, witness_out;
};

int run_check(const CheckArgs& a) {
  a.common.apply();
  const CMatrix c = io::matrix_from_json(io::read_json_file(a.coherence));
  const auto p = io::incoherent_from_json(io::read_json_file(a.incoherent));
  require_coherence_matrix(c);
  require_valid(p);
  if (c.rows() != p.dim()) throw DimensionMismatch("coherence matrix and observable differ in dimension");

  json report;
  report["dim"] = c.rows();
  report["cor1_violations"] = pairs(cor1_check(c, p));
  report["cor2"] = to_string(cor2_check(c, p));

  if (!a.povm.empty()) {
    const auto m = io::observable_from_json(io::read_json_file(a.povm));
    require_valid(m);
    if (m.dim() != p.dim()) throw DimensionMismatch("POVM and observable differ in dimension");
    json tw = json::array();
    for (const auto& v : tradeoff_witness(m, to_observable(p))) tw.push_back({{"n", v.n}, {"m", v.m}, {"lhs", v.lhs}});
    report["tradeoff_violations"] = tw;
    report["schur"] = schur_name(schur_sufficient(m, p).kind);
  }

  SolverOptions so;
  so.max_iters = a.common.max_iters;
  const auto v = solve_gii(c, p, so);
  report["verdict"] = io::to_json(v);
  if (v.status == Status::feasible && v.witness) {
    const auto check = verify_gii(c, p, *v.witness);
    report["witness_verified"] = check.ok;
    if (!a.witness_out.empty()) {
      io::write_json_file(a.witness_out, io::to_json(*v.witness));
      report["witness_file"] = a.witness_out;
    }
  }
  Output out(a.common.out);
  out.get() << report.dump(1) << '\n';
  return status_exit(v.status);
}

// sweep-mub -----------------------------------------------------------------

struct SweepArgs {
  Common common;
  int d = 3;
  std::string grid = "0.1:0.9:9";
};

int run_sweep_mub(const SweepArgs& a) {
  a.common.apply();
  if (a.d < 2) throw UsageError("--d must be at least 2");
  const auto ls = parse_grid(a.grid);
  for (double l : ls)
    if (l < -1.0 / (a.d - 1) || l > 1.0) throw UsageError("lambda outside [-1/(d-1), 1]: " + io::fmt(l));
  const auto rows = mub_sweep(a.d, ls, a.common.alpha_opts(), a.common.exec());

  Output out(a.common.out);
  io::CsvWriter csv(out.get(), {"lambda", "cor1_bound", "cor2_bound", "alpha_star", "g_d", "status"});
  bool clean = true;
  for (const auto& r : rows) {
    std::string status = "ok";
    if (r.alpha.gray) status = "gray";
    else if (std::abs(r.alpha.value - r.g) > a.common.alpha_tol) status = "mismatch";
    if (status != "ok") clean = false;
    csv << r.lambda << r.cor1_bound << r.cor2_bound << r.alpha.value << r.g << status;
    csv.end_row();
  }
  return clean ? 0 : kUnknown;
}

// spinboson -----------------------------------------------------------------

struct SpinBosonArgs {
  Common common;
  int N = 10;
  std::string grid = "0.05:0.95:19";
  bool no_sdp = false;
  std::string svg;
};

void spinboson_svg(const SpinBosonArgs& a, const std::vector<CurvePoint>& pts) {
  cohjm::SvgPlot plot(0.0, 1.0, 0.0, 1.0);
  std::vector<cohjm::Pt> u, l, th, above{{0.0, 1.0}}, below{{0.0, 0.0}};
  for (const auto& p : pts) {
    u.emplace_back(p.lambda, p.bounds.U);
    l.emplace_back(p.lambda, p.bounds.L);
    th.emplace_back(p.lambda, p.bounds.theta3);
  }
  above.insert(above.end(), u.begin(), u.end());
  above.emplace_back(pts.back().lambda, 1.0);
  below.insert(below.end(), l.begin(), l.end());
  below.emplace_back(pts.back().lambda, 0.0);
  plot.polygon(above, "#2ca02c", 0.25);
  plot.polygon(below, "#d62728", 0.25);
  plot.polyline(u, "#2ca02c", 2.0);
  plot.polyline(l, "#d62728", 2.0);
  plot.polyline(th, "black", 1.2, "5,4");
  if (a.N == 2) {
    std::vector<cohjm::Pt> exact;
    for (int k = 0; k <= 200; ++k) exact.emplace_back(k / 200.0, alpha2_closed(k / 200.0));
    plot.polyline(exact, "#1f77b4", 1.5);
  }
  for (const auto& p : pts)
    if (p.computed) plot.dot({p.lambda, p.alpha.value}, "#1f77b4");
  plot.axes("lambda", "alpha");
  plot.title("N = " + std::to_string(a.N) + ": U_N (green), L_N (red), theta3 (dashed)");
  plot.save(a.svg);
}

int run_spinboson(const SpinBosonArgs& a) {
  a.common.apply();
  if (a.N < 1) throw UsageError("--N must be at least 1");
  const auto ls = parse_grid(a.grid);
  for (double l : ls)
    if (l < 0.0 || l >= 1.0) throw UsageError("lambda must lie in [0, 1): " + io::fmt(l));
  const auto pts = alpha_N_curve(a.N, ls, !a.no_sdp, a.common.alpha_opts(), a.common.exec());

  Output out(a.common.out);
  io::CsvWriter csv(out.get(), {"lambda", "L_N", "U_N", "alpha_N", "theta3", "status"});
  bool clean = true;
  const double slack = 1e-6 + a.common.alpha_tol;
  for (const auto& p : pts) {
    std::string status = "bounds";
    if (p.computed) {
      status = "ok";
      if (p.alpha.gray) status = "gray";
      if (p.bounds.L > p.alpha.hi + slack || p.alpha.lo > p.bounds.U + slack) status = "sandwich";
    }
    if (status == "gray" || status == "sandwich") clean = false;
    csv << p.lambda << p.bounds.L << p.bounds.U;
    if (p.computed) csv << p.alpha.value;
    else csv << std::string();
    csv << p.bounds.theta3 << status;
    csv.end_row();
  }
  if (!a.svg.empty() && !pts.empty()) spinboson_svg(a, pts);
  return clean ? 0 : kUnknown;
}

// region-n2 -----------------------------------------------------------------

struct RegionArgs {
  Common common;
  double lambda = 0.7;
  int resolution = 41;
  std::string svg;
};

void region_svg(const RegionArgs& a, const Centro3Params& c, const std::vector<MeshSample>& mesh,
                double entry) {
  // (p, q) triangle; each cell shaded by the member fraction of its r column
  const int n = a.resolution;
  const double step = 1.0 / (n - 1);
  cohjm::SvgPlot plot(0.0, 1.0, 0.0, 1.0, 480, 480);
  for (std::size_t i = 0; i < mesh.size(); i += n) {
    int members = 0;
    for (int k = 0; k < n; ++k) members += mesh[i + k].member;
    if (members == 0) continue;
    const auto& pt = mesh[i].pt;
    plot.rect(pt.p - step / 2, pt.q - step / 2, pt.p + step / 2, pt.q + step / 2, "#1f77b4",
              0.15 + 0.85 * members / n);
  }
  plot.polyline({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}}, "black", 1.0);
  std::vector<cohjm::Pt> line;
  for (int k = 0; k <= 100; ++k) {
    const auto pt = centro3_line_point(k / 100.0, 0.25);
    line.emplace_back(pt.p, pt.q);
  }
  plot.polyline(line, "#d62728", 1.5);
  const auto e = centro3_line_point(entry, 0.25);
  plot.dot({e.p, e.q}, "#d62728", 4.0);
  plot.label({e.p + 0.02, e.q + 0.02}, "alpha = " + io::fmt(entry));
  plot.axes("p", "q");
  plot.title("lambda = " + io::fmt(c.lambda) + ": shading = member fraction over r");
  plot.save(a.svg);
}

int run_region_n2(const RegionArgs& a) {
  a.common.apply();
  if (a.lambda < 0.0 || a.lambda > 1.0) throw UsageError("--lambda must lie in [0, 1]");
  const Centro3Params c{a.lambda, std::pow(a.lambda, 4)};
  const auto mesh = centro3_region_mesh(c, a.resolution, a.common.exec());
  const double entry = centro3_line_alpha_numeric(0.25, c);

  Output out(a.common.out);
  io::CsvWriter csv(out.get(), {"p", "q", "r", "member"});
  for (const auto& s : mesh) {
    csv << s.pt.p << s.pt.q << s.pt.r << std::string(s.member ? "1" : "0");
    csv.end_row();
  }
  std::cerr << "entry point of the canonical line: alpha = " << io::fmt(entry)
            << " (closed form " << io::fmt(alpha2_closed(a.lambda)) << ")\n";
  if (!a.svg.empty()) region_svg(a, c, mesh, entry);
  return 0;
}

// gii-demo ------------------------------------------------------------------

struct DemoArgs {
  Common common;
  std::string kind;
  int d = 4;
  int N = 5;
  double alpha = 0.9;
  double p = 0.8, q = 0.3;
  std::optional<double> c;
};

int run_gii_demo(const DemoArgs& a) {
  a.common.apply();
  CMatrix cm;
  IncoherentObservable obs;
  GiiWitness w;
  json params;
  if (a.kind == "corner") {
    if (a.d < 3) throw UsageError("corner needs --d >= 3");
    const double x = -1.0 / (a.d - 1);
    cm = uniform_coherence(a.d, x);
    obs = white_noise_family(a.d, x);
    w = corner_gii(a.d);
    params = {{"d", a.d}, {"lambda", x}, {"alpha", x}};
  } else if (a.kind == "qubit") {
    RMatrix t(2, 2);
    t << a.p, 1 - a.p, a.q, 1 - a.q;
    obs = IncoherentObservable{t};
    require_valid(obs);
    const double gamma = std::sqrt(a.p * a.q) + std::sqrt((1 - a.p) * (1 - a.q));
    const double cv = a.c.value_or(gamma);
    if (std::abs(cv) > gamma + 1e-12) throw UsageError("qubit witness needs |c| <= " + io::fmt(gamma));
    cm.resize(2, 2);
    cm << 1.0, cv, cv, 1.0;
    w = build_gii_schur(cm, obs);
    params = {{"p", a.p}, {"q", a.q}, {"c", cv}, {"gamma", gamma}};
  } else if (a.kind == "appendixH") {
    if (a.N < 5) throw UsageError("appendixH needs --N >= 5");
    if (a.alpha < 0.0 || a.alpha > 1.0) throw UsageError("--alpha must lie in [0, 1]");
    const double l = appendixH_lambda(a.N, a.alpha);
    cm = sb_reduced_matrix(a.N, l);
    obs = sb_reduced_observable(a.N, a.alpha);
    w = appendixH_gii(a.N, a.alpha);
    params = {{"N", a.N}, {"alpha", a.alpha}, {"lambda", l}};
  } else {
    throw UsageError("unknown kind '" + a.kind + "'");
  }
  const auto rep = verify_gii(cm, obs, w);
  json out = {{"kind", a.kind},
              {"params", params},
              {"verified", rep.ok},
              {"max_psd", rep.max_psd},
              {"max_sum", rep.max_sum},
              {"max_diag", rep.max_diag},
              {"witness", io::to_json(w)}};
  Output o(a.common.out);
  o.get() << out.dump(1) << '\n';
  if (!rep.ok) std::cerr << rep.summary() << '\n';
  return rep.ok ? 0 : kNotMember;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint measurability under coherence patterns"};
  app.set_config("--config", "", "TOML/INI file with option values; flags take precedence");
  app.require_subcommand(1);

  CheckArgs check;
  auto* c = app.add_subcommand("check", "decide membership of an incoherent observable");
  check.common.add(c, false);
  c->add_option("--coherence", check.coherence, "coherence matrix JSON")->required();
  c->add_option("--incoherent", check.incoherent, "incoherent observable JSON")->required();
  c->add_option("--povm", check.povm, "second observable for the tradeoff and Schur tests");
  c->add_option("--witness-out", check.witness_out, "write the witness JSON here when feasible");

  SweepArgs sweep;
  auto* s = app.add_subcommand("sweep-mub", "white-noise threshold against uniform coherence");
  sweep.common.add(s);
  s->add_option("--d", sweep.d, "dimension");
  s->add_option("--lambda-grid", sweep.grid, "a:b:n");
  s->add_flag("--no-seeds", sweep.common.no_seeds, "bisect without corollary seeds");

  SpinBosonArgs sb;
  auto* b = app.add_subcommand("spinboson", "threshold curve and analytic bounds");
  sb.common.add(b);
  b->add_option("--N", sb.N, "number of qubits");
  b->add_option("--lambda-grid", sb.grid, "a:b:n");
  b->add_flag("--no-sdp", sb.no_sdp, "analytic bounds only");
  b->add_flag("--no-seeds", sb.common.no_seeds, "bisect without corollary seeds");
  b->add_option("--svg", sb.svg, "write an SVG panel");

  RegionArgs region;
  auto* r = app.add_subcommand("region-n2", "membership mesh of the two-qubit covariant set");
  region.common.add(r, false);
  r->add_option("--lambda", region.lambda, "coherence parameter");
  r->add_option("--resolution", region.resolution, "grid points per axis")->check(CLI::Range(2, 1000));
  r->add_option("--svg", region.svg, "write an SVG panel");

  DemoArgs demo;
  auto* g = app.add_subcommand("gii-demo", "emit and verify an explicit witness");
  demo.common.add(g, false);
  g->add_option("kind", demo.kind, "corner | qubit | appendixH")
      ->required()
      ->check(CLI::IsMember({"corner", "qubit", "appendixH"}));
  g->add_option("--d", demo.d, "dimension (corner)");
  g->add_option("--N", demo.N, "number of qubits (appendixH)");
  g->add_option("--alpha", demo.alpha, "noise parameter (appendixH)");
  g->add_option("--p", demo.p, "P(0) on |0> (qubit)");
  g->add_option("--q", demo.q, "P(0) on |1> (qubit)");
  g->add_option("--c", demo.c, "off-diagonal coherence (qubit, default: the boundary value)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*c) return run_check(check);
    if (*s) return run_sweep_mub(sweep);
    if (*b) return run_spinboson(sb);
    if (*r) return run_region_n2(region);
    if (*g) return run_gii_demo(demo);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const io::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
