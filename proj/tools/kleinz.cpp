// kleinz: dimer and Ising partition functions on the Klein bottle.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kleinz/asympt.hpp"
#include "kleinz/exact.hpp"
#include "kleinz/io.hpp"
#include "kleinz/lattices.hpp"
#include "kleinz/orient.hpp"
#include "kleinz/poly.hpp"
#include "kleinz/spectra.hpp"

using namespace kz;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kConjecture = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::map<std::string, double> parse_assignments(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& s : items) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("expected label=value, got '" + s + "'");
    try {
      out[s.substr(0, eq)] = std::stod(s.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("bad number in '" + s + "'");
    }
  }
  return out;
}

// Couplings per edge: 1 unless overridden by label.
std::vector<double> couplings(const EmbeddedGraph& g, const std::map<std::string, double>& by_label) {
  std::vector<double> J(g.n_edges(), 1.0);
  std::map<std::string, int> used;
  for (int e = 0; e < g.n_edges(); ++e) {
    auto it = by_label.find(g.edges[e].label);
    if (it != by_label.end()) {
      J[e] = it->second;
      ++used[it->first];
    }
  }
  for (const auto& [k, v] : by_label)
    if (!used.count(k)) throw UsageError("no edge labelled '" + k + "'");
  return J;
}

std::string fmt(double x, int digits = 12) {
  if (std::isnan(x)) return "nan";
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

// Z printed from its logarithm so that huge covers do not overflow.
std::string z_from_log(double lz) {
  if (lz < 700) return fmt(std::exp(lz), 13);
  const double k = std::floor(lz / std::log(10.0));
  return fmt(std::pow(10.0, lz / std::log(10.0) - k), 12) + "e+" + fmt(k, 20);
}

struct Common {
  std::string graph;
  std::vector<std::string> weights;
  double tol = 0;  // 0: module defaults

  EmbeddedGraph load() const {
    EmbeddedGraph g = load_lattice(graph);
    if (!weights.empty()) set_weights(g, parse_assignments(weights));
    return g;
  }
  ZeroOptions zero_options() const {
    ZeroOptions z;
    if (tol > 0) {
      z.tol = tol;
      z.roots.tol = tol;
    }
    return z;
  }
};

void add_common(CLI::App* c, Common& o) {
  c->add_option("graph", o.graph, "bundled lattice name or graph JSON file")->required();
  c->add_option("-w,--weight", o.weights, "edge weight override label=value (repeatable)");
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

// ---------------------------------------------------------------- verify

int cmd_verify(const Common& o, bool ising) {
  EmbeddedGraph g = o.load();
  const double tol = o.tol > 0 ? o.tol : 1e-9;
  int failures = 0;
  auto line = [&](bool ok, const std::string& what, const std::string& detail = "") {
    std::cout << (ok ? "ok    " : "FAIL  ") << what << (detail.empty() ? "" : "  " + detail) << "\n";
    if (!ok) ++failures;
  };

  const ValidationReport v = validate(g, {.allow_odd_vertices = ising});
  for (const auto& s : v.issues) line(false, "validate", s);
  if (!v.ok()) return kVerifyFailed;
  line(true, "validate", std::to_string(g.n_vertices) + " vertices, " + std::to_string(g.n_edges()) + " edges");
  if (ising) {
    g = fisher_graph(g, std::vector<double>(g.n_edges(), 1.0), 0.5);
    line(validate(g).ok(), "fisher graph", std::to_string(g.n_vertices) + " vertices");
  }

  const std::vector<int> K = find_klein_orientation(g);
  line(check_kasteleyn_klein(g, K), "orientation", "Kasteleyn on the orientation cover");
  const KleinPolys R = extract_R(g, K);
  const BiLaurentPoly P = extract_P_klein(g, K);
  std::optional<BipartitePolys> B;
  if (!g.colors.empty()) B = extract_bipartite(g, K);
  const IdentityReport ids = poly_identity_suite(g, K, R, P, B ? &*B : nullptr, 1, tol);
  for (const auto& c : ids.checks) line(c.ok, "identity", c.name + "  err=" + fmt(c.err, 3));

  Branch branch = Branch::standard;
  try {
    branch = calibrate_branch(g, K, R, P);
    line(true, "calibration", std::string("branch ") + to_string(branch));
  } catch (const CalibrationError& e) {
    line(false, "calibration", e.what());
  }

  for (int n = 1; n * g.n_vertices <= 16; n += 2)
    for (int m = 1; m * n * g.n_vertices <= 16; ++m) {
      const EmbeddedGraph c = build_cover(g, m, n);
      const double zb = z_bruteforce(c);
      const double zp = z_pfaffian(c, find_klein_orientation(c));
      const double zr = zmn(R.R1, R.Rm1, P, m, n, branch);
      const double scale = std::max(1.0, std::abs(zb));
      const bool ok = std::abs(zp - zb) <= tol * scale && std::abs(zr - zb) <= tol * scale;
      line(ok, "oracle (" + std::to_string(m) + "," + std::to_string(n) + ")",
           "brute=" + fmt(zb) + " pfaffian=" + fmt(zp) + " product=" + fmt(zr));
    }
  std::cout << (failures ? std::to_string(failures) + " check(s) failed" : "all checks passed") << "\n";
  return failures ? kVerifyFailed : kOk;
}

// ---------------------------------------------------------------- charpoly

int cmd_charpoly(const Common& o) {
  const EmbeddedGraph g = o.load();
  const std::vector<int> K = find_klein_orientation(g);
  const KleinPolys R = extract_R(g, K);
  const BiLaurentPoly P = extract_P_klein(g, K);
  json j;
  j["graph"] = g.name;
  j["R(z,1)"] = {{"poly", R.R1.str()}, {"coeffs", to_json(R.R1)}};
  j["R(z,-1)"] = {{"poly", R.Rm1.str()}, {"coeffs", to_json(R.Rm1)}};
  j["P"] = {{"poly", P.str()}, {"coeffs", to_json(P)}};
  j["mod4"] = to_json(mod4_invariants(R.R1, R.Rm1));
  if (!g.colors.empty()) {
    const BipartitePolys B = extract_bipartite(g, K);
    j["S(z,1)"] = B.S1.str();
    j["S(z,-1)"] = B.Sm1.str();
    j["Q"] = B.Q.str();
    j["mod4_bipartite"] = to_json(mod4_invariants_bipartite(B.S1, B.Sm1));
    j["zeros"] = to_json(unit_torus_zeros(B.Q, o.zero_options()));
  } else {
    j["zeros"] = to_json(unit_torus_zeros(P, o.zero_options()));
  }
  print(j);
  return kOk;
}

// ---------------------------------------------------------------- z

int cmd_z(const Common& o, int m, int n, const std::string& method) {
  if (n % 2 == 0) throw UsageError("n must be odd for Klein bottle covers; use torus tooling for even n");
  const EmbeddedGraph g = o.load();
  double lz;
  if (method == "product") {
    const std::vector<int> K = find_klein_orientation(g);
    const KleinPolys R = extract_R(g, K);
    const BiLaurentPoly P = extract_P_klein(g, K);
    lz = log_zmn(R.R1, R.Rm1, P, m, n, calibrate_branch(g, K, R, P));
  } else {
    const EmbeddedGraph c = build_cover(g, m, n);
    const double z = method == "brute" ? z_bruteforce(c) : z_pfaffian(c, find_klein_orientation(c));
    lz = std::log(z);
  }
  std::cout << "Z = " << z_from_log(lz) << "\nlog Z = " << fmt(lz, 15) << "\n";
  return kOk;
}

// ---------------------------------------------------------------- f0

int cmd_f0(const Common& o, int grid) {
  const EmbeddedGraph g = o.load();
  const std::vector<int> K = find_klein_orientation(g);
  const BiLaurentPoly P = extract_P_klein(g, K);
  double f0;
  if (grid > 0) f0 = bulk_free_energy(P, grid);
  else if (!g.colors.empty()) f0 = bulk_free_energy_from_Q(extract_bipartite(g, K).Q, o.tol > 0 ? o.tol : 1e-12);
  else f0 = bulk_free_energy_precise(P, o.tol > 0 ? o.tol : 1e-12);
  std::cout << "f0 = " << fmt(f0, 15) << "\n";
  return kOk;
}

// ---------------------------------------------------------------- shapes

// Zero data of a lattice, reused to evaluate fsc at arbitrary real shape.
struct ShapeBase {
  NodeReport nodes;
  ModFourInvariant mod4;
  Branch branch = Branch::standard;
  bool bipartite = false;
};

ShapeBase dimer_shape(const EmbeddedGraph& g, const ZeroOptions& zo) {
  const std::vector<int> K = find_klein_orientation(g);
  const KleinPolys R = extract_R(g, K);
  const BiLaurentPoly P = extract_P_klein(g, K);
  ShapeBase s;
  s.branch = calibrate_branch(g, K, R, P);
  if (!g.colors.empty()) {
    const BipartitePolys B = extract_bipartite(g, K);
    s.bipartite = true;
    s.nodes = unit_torus_zeros(B.Q, zo);
    s.mod4 = mod4_invariants_bipartite(B.S1, B.Sm1, zo.roots);
  } else {
    s.nodes = unit_torus_zeros(P, zo);
    s.mod4 = mod4_invariants(R.R1, R.Rm1, zo.roots);
  }
  return s;
}

ShapeBase ising_shape(const EmbeddedGraph& g, const std::vector<double>& J, double beta, const ZeroOptions& zo) {
  const IsingModel M = ising_model(g, J, beta);
  return {unit_torus_zeros(M.P, zo), mod4_invariants(M.R.R1, M.R.Rm1, zo.roots), M.branch, false};
}

// fsc with the m-dependent phases of m but the shape rescaled so that the
// first zero has tau = i*tau_im (n = 1).
AsymptoticReport fsc_at_shape(ShapeBase s, int m, double tau_im) {
  if (!s.nodes.zeros.empty()) {
    const double scale = tau_im / (s.nodes.zeros[0].tau_unit.imag() * m);
    for (auto& z : s.nodes.zeros) z.tau_unit *= scale;
  }
  AsymptoticReport r = s.bipartite ? fsc_bipartite(s.nodes, s.mod4, m, 1, s.branch)
                                   : fsc_general(s.nodes, s.mod4, m, 1, s.branch);
  r.warnings.clear();  // m/n is not the shape here
  return r;
}

// ---------------------------------------------------------------- fsc / ising

int cmd_fsc(const Common& o, int m, int n, double aspect, double tau_im, int grid) {
  const EmbeddedGraph g = o.load();
  AsymptOptions opt;
  opt.grid = grid;
  opt.zeros = o.zero_options();
  if (aspect > 0 || tau_im > 0) {
    const ShapeBase s = dimer_shape(g, opt.zeros);
    double t = tau_im;
    if (aspect > 0) {
      if (s.nodes.zeros.empty()) t = aspect;  // shape does not enter
      else t = s.nodes.zeros[0].tau_unit.imag() * aspect;
    }
    AsymptoticReport r = fsc_at_shape(s, m, t);
    json j = to_json(r);
    j["graph"] = g.name;
    j["tau_im"] = t;
    if (aspect > 0) j["aspect"] = aspect;
    print(j);
    return kOk;
  }
  if (n % 2 == 0) throw UsageError("n must be odd for Klein bottle covers; use torus tooling for even n");
  AsymptoticReport r = dimer_asymptotics(g, m, n, opt);
  json j = to_json(r);
  j["graph"] = g.name;
  print(j);
  return kOk;
}

int cmd_ising(const Common& o, const std::vector<std::string>& Jspec, double beta, bool critical, int m, int n,
              int grid) {
  if (n % 2 == 0) throw UsageError("n must be odd for Klein bottle covers; use torus tooling for even n");
  const EmbeddedGraph g = o.load();
  const std::vector<double> J = couplings(g, parse_assignments(Jspec));
  AsymptOptions opt;
  opt.grid = grid;
  opt.zeros = o.zero_options();
  if (critical) beta = ising_critical_beta(g, J, o.tol > 0 ? o.tol : 1e-12);
  AsymptoticReport r = fsc_ising(g, J, beta, m, n, opt);
  json j = to_json(r);
  j["graph"] = g.name;
  print(j);
  return kOk;
}

// ---------------------------------------------------------------- ratio

int cmd_ratio(const Common& o, int m, int n) {
  if (n % 2 == 0) throw UsageError("n must be odd for Klein bottle covers; use torus tooling for even n");
  const EmbeddedGraph g = o.load();
  json j;
  j["graph"] = g.name;
  j["m"] = m;
  j["n"] = n;
  j["log_ratio"] = log_finite_ratio(g, m, n);
  j["ratio"] = std::exp(j["log_ratio"].get<double>());
  if (!g.colors.empty()) {
    // universal limit, available for bipartite graphs
    const ShapeBase s = dimer_shape(g, o.zero_options());
    const auto& zs = s.nodes.zeros;
    double lim;
    if (zs.empty()) {
      lim = ratio_limit(RatioCase::bipartite_no_zeros, {0, 1});
    } else {
      const cplx t = tau(zs[0], m, n);
      lim = zs[0].type == ZeroType::real_node ? ratio_limit(RatioCase::bipartite_real_node, t)
                                              : ratio_limit(RatioCase::bipartite_two_zeros, t, m * zs[0].psi);
    }
    j["limit"] = lim;
    j["case"] = zs.empty() ? "no-zeros" : to_string(zs[0].type);
  }
  print(j);
  return kOk;
}

// ---------------------------------------------------------------- sweep

struct SweepSpec {
  std::string param;
  double lo = 0, hi = 0;
  int steps = 121;
  std::vector<std::string> outputs{"fsc"};
  bool ising = false;
  double beta = -1;  // ising: fixed beta when sweeping something else; <0 = critical
  std::vector<std::string> J;
  int m = 1, n = 1;
  std::string out;
};

struct Row {
  double value = 0;
  std::string kase;
  double tau_im = NAN;
  std::map<std::string, double> vals;
};

void write_csv(std::ostream& os, const std::vector<std::string>& header_comments, const std::string& param,
               const std::vector<std::string>& outputs, const std::vector<Row>& rows) {
  for (const auto& h : header_comments) os << "# " << h << "\n";
  os << "param,value,case,tau_im";
  for (const auto& k : outputs) os << "," << k;
  os << "\n";
  for (const auto& r : rows) {
    os << param << "," << fmt(r.value) << "," << r.kase << "," << fmt(r.tau_im);
    for (const auto& k : outputs) os << "," << fmt(r.vals.count(k) ? r.vals.at(k) : NAN);
    os << "\n";
  }
}

template <class F>
std::vector<Row> evaluate(const std::vector<double>& xs, F f) {
  std::vector<Row> rows(xs.size());
  const size_t batch = static_cast<size_t>(std::max(1, thread_count()));
  for (size_t i = 0; i < xs.size(); i += batch) {
    std::vector<std::future<Row>> fut;
    for (size_t k = i; k < std::min(xs.size(), i + batch); ++k) fut.push_back(std::async(std::launch::async, f, xs[k]));
    for (size_t k = 0; k < fut.size(); ++k) rows[i + k] = fut[k].get();
  }
  return rows;
}

std::vector<double> linspace(double lo, double hi, int steps) {
  if (steps < 2) throw UsageError("sweep: need at least 2 steps");
  if (!(lo < hi)) throw UsageError("sweep: empty range, need lo < hi");
  std::vector<double> xs(steps);
  for (int k = 0; k < steps; ++k) xs[k] = lo + (hi - lo) * k / (steps - 1);
  return xs;
}

std::vector<Row> sweep_log_tau(const ShapeBase& s, int m, const std::vector<double>& xs, const std::string& label) {
  return evaluate(xs, [&](double v) {
    Row r;
    r.value = v;
    r.tau_im = std::exp(v);
    const AsymptoticReport a = fsc_at_shape(s, m, r.tau_im);
    r.kase = label.empty() ? a.zeros_case : label;
    r.vals["fsc"] = a.fsc;
    r.vals["FSC"] = a.FSC;
    return r;
  });
}

int cmd_sweep(const Common& o, SweepSpec sp, const std::string& preset, const std::string& cmdline) {
  std::vector<std::string> header{"kleinz sweep", "command: " + cmdline};
  std::vector<Row> rows;
  const ZeroOptions zo = o.zero_options();

  if (preset == "square-fsc" || preset == "ising-fsc") {
    if (sp.lo == 0 && sp.hi == 0) sp.lo = -3, sp.hi = 3;
    const std::vector<double> xs = linspace(sp.lo, sp.hi, sp.steps);
    sp.outputs = {"fsc", "FSC"};
    if (preset == "square-fsc") {
      sp.param = "log(Mx/(2Ny))";
      header.push_back("M x N square lattice, x = y = 1; tau = i Mx/(2Ny)");
      header.push_back("even x odd: square_2x1; odd x even: square_1x2, m odd; even x even: square_1x2, m even");
      const ShapeBase s21 = dimer_shape(load_lattice("square_2x1"), zo);
      const ShapeBase s12 = dimer_shape(load_lattice("square_1x2"), zo);
      for (auto& r : sweep_log_tau(s21, 1, xs, "even x odd")) rows.push_back(r);
      for (auto& r : sweep_log_tau(s12, 1, xs, "odd x even")) rows.push_back(r);
      for (auto& r : sweep_log_tau(s12, 2, xs, "even x even")) rows.push_back(r);
    } else {
      sp.param = "log|tau|";
      const EmbeddedGraph g = load_lattice("square_ising");
      const std::vector<double> J(g.n_edges(), 1.0);
      const double bc = ising_critical_beta(g, J);
      header.push_back("critical Ising, isotropic square lattice, beta_c = " + fmt(bc, 15));
      for (auto& r : sweep_log_tau(ising_shape(g, J, bc, zo), 1, xs, "critical")) rows.push_back(r);
    }
  } else if (!preset.empty()) {
    throw UsageError("unknown preset '" + preset + "' (square-fsc, ising-fsc)");
  } else {
    if (sp.param.empty()) throw UsageError("sweep: --param is required without --preset");
    const std::vector<double> xs = linspace(sp.lo, sp.hi, sp.steps);
    const EmbeddedGraph g0 = o.load();
    header.push_back("graph: " + g0.name);
    {
      std::string w = "weights:";
      for (const auto& e : g0.edges) w += " " + (e.label.empty() ? std::string("_") : e.label) + "=" + fmt(e.w, 6);
      header.push_back(w);
    }
    header.push_back("m = " + std::to_string(sp.m) + ", n = " + std::to_string(sp.n));
    if (sp.n % 2 == 0) throw UsageError("n must be odd for Klein bottle covers; use torus tooling for even n");
    const auto want = [&](const std::string& k) {
      return std::find(sp.outputs.begin(), sp.outputs.end(), k) != sp.outputs.end();
    };
    for (const auto& k : sp.outputs)
      if (k != "Z" && k != "f0" && k != "fsc" && k != "ratio" && k != "beta_c")
        throw UsageError("unknown output '" + k + "' (Z, f0, fsc, ratio, beta_c)");

    if (sp.param == "log-tau") {
      ShapeBase s;
      if (sp.ising) {
        const std::vector<double> J = couplings(g0, parse_assignments(sp.J));
        const double b = sp.beta < 0 ? ising_critical_beta(g0, J) : sp.beta;
        header.push_back("ising beta = " + fmt(b, 15));
        s = ising_shape(g0, J, b, zo);
      } else {
        s = dimer_shape(g0, zo);
      }
      rows = sweep_log_tau(s, sp.m, xs, "");
      sp.outputs = {"fsc", "FSC"};
    } else if (sp.ising) {
      const auto base_J = parse_assignments(sp.J);
      rows = evaluate(xs, [&](double v) {
        std::map<std::string, double> jl = base_J;
        double beta = sp.beta;
        if (sp.param == "beta") beta = v;
        else jl[sp.param] = v;
        const std::vector<double> J = couplings(g0, jl);
        AsymptOptions opt;
        opt.zeros = zo;
        const double bc = ising_critical_beta(g0, J);
        if (beta < 0) beta = bc;
        const AsymptoticReport a = fsc_ising(g0, J, beta, sp.m, sp.n, opt);
        Row r;
        r.value = v;
        r.kase = a.ising_regime;
        if (!a.tau.empty()) r.tau_im = a.tau[0].imag();
        r.vals["fsc"] = a.fsc;
        r.vals["f0"] = a.f0;
        r.vals["beta_c"] = bc;
        if (want("Z")) r.vals["Z"] = ising_log_partition(ising_model(g0, J, a.ising_regime == "critical" ? bc : beta), sp.m, sp.n);
        if (want("ratio")) {
          const bool crit = a.ising_regime == "critical";
          r.vals["ratio"] = ratio_limit(crit ? RatioCase::ising_critical : RatioCase::ising_off_critical,
                                        crit ? a.tau[0] : cplx(0, 1));
        }
        return r;
      });
    } else {
      rows = evaluate(xs, [&](double v) {
        EmbeddedGraph g = g0;
        set_weights(g, {{sp.param, v}});
        AsymptOptions opt;
        opt.zeros = zo;
        const AsymptoticReport a = dimer_asymptotics(g, sp.m, sp.n, opt);
        Row r;
        r.value = v;
        r.kase = a.zeros_case;
        if (!a.tau.empty()) r.tau_im = a.tau[0].imag();
        r.vals["fsc"] = a.fsc;
        r.vals["f0"] = a.f0;
        if (want("Z")) {
          const std::vector<int> K = find_klein_orientation(g);
          const KleinPolys R = extract_R(g, K);
          const BiLaurentPoly P = extract_P_klein(g, K);
          r.vals["Z"] = log_zmn(R.R1, R.Rm1, P, sp.m, sp.n, calibrate_branch(g, K, R, P));
        }
        if (want("ratio")) r.vals["ratio"] = finite_ratio(g, sp.m, sp.n);
        return r;
      });
    }
    if (want("Z")) header.push_back("column Z holds log Z");
  }

  if (sp.out.empty()) {
    write_csv(std::cout, header, sp.param, sp.outputs, rows);
  } else {
    std::ofstream f(sp.out);
    if (!f) throw std::runtime_error("cannot write " + sp.out);
    write_csv(f, header, sp.param, sp.outputs, rows);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dimer and Ising partition functions on the Klein bottle"};
  app.require_subcommand(1);
  app.fallthrough();
  Common o;
  app.add_option("--tol", o.tol, "override numerical tolerances");

  auto* verify = app.add_subcommand("verify", "run the consistency checks on a graph");
  add_common(verify, o);
  bool verify_ising = false;
  verify->add_flag("--ising", verify_ising, "treat the graph as an Ising base graph (checks its Fisher graph)");

  auto* charpoly = app.add_subcommand("charpoly", "characteristic polynomials, mod-4 invariants and torus zeros");
  add_common(charpoly, o);

  int m = 1, n = 1;
  auto* z = app.add_subcommand("z", "partition function of the m x n cover");
  add_common(z, o);
  std::string method = "product";
  z->add_option("--m", m)->check(CLI::PositiveNumber);
  z->add_option("--n", n)->check(CLI::PositiveNumber);
  z->add_option("--method", method)->check(CLI::IsMember({"product", "pfaffian", "brute"}));

  int grid = 0;
  auto* f0 = app.add_subcommand("f0", "bulk free energy");
  add_common(f0, o);
  f0->add_option("--grid", grid, "Riemann sum on grid x grid points (default: adaptive quadrature)");

  auto* fsc = app.add_subcommand("fsc", "finite-size correction, JSON report");
  add_common(fsc, o);
  double aspect = 0, tau_im = 0;
  fsc->add_option("--m", m)->check(CLI::PositiveNumber);
  fsc->add_option("--n", n)->check(CLI::PositiveNumber);
  auto* asp = fsc->add_option("--aspect", aspect, "real m/n, evaluated at the limit shape")->check(CLI::PositiveNumber);
  fsc->add_option("--tau", tau_im, "imaginary part of tau for the first zero")->check(CLI::PositiveNumber)->excludes(asp);
  fsc->add_option("--grid", grid);

  auto* ising = app.add_subcommand("ising", "Ising model on covers via the Fisher graph, JSON report");
  add_common(ising, o);
  double beta = -1;
  bool critical = false;
  std::vector<std::string> Jspec;
  auto* bopt = ising->add_option("--beta", beta)->check(CLI::NonNegativeNumber);
  ising->add_flag("--critical", critical)->excludes(bopt);
  ising->add_option("-J,--coupling", Jspec, "coupling label=value (default 1)");
  ising->add_option("--m", m)->check(CLI::PositiveNumber);
  ising->add_option("--n", n)->check(CLI::PositiveNumber);
  ising->add_option("--grid", grid);

  auto* ratio = app.add_subcommand("ratio", "Z(cover)^2 / Z(torus cover) and its limit");
  add_common(ratio, o);
  ratio->add_option("--m", m)->check(CLI::PositiveNumber);
  ratio->add_option("--n", n)->check(CLI::PositiveNumber);

  auto* sweep = app.add_subcommand("sweep", "parameter sweep written as CSV");
  SweepSpec sp;
  std::string preset;
  sweep->add_option("graph", o.graph, "bundled lattice name or graph JSON file");
  sweep->add_option("-w,--weight", o.weights);
  sweep->add_option("--preset", preset, "square-fsc or ising-fsc");
  sweep->add_option("--param", sp.param, "beta, log-tau, or an edge label");
  sweep->add_option("--lo", sp.lo);
  sweep->add_option("--hi", sp.hi);
  sweep->add_option("--steps", sp.steps);
  sweep->add_option("--outputs", sp.outputs, "Z f0 fsc ratio beta_c")->delimiter(',');
  sweep->add_flag("--ising", sp.ising);
  sweep->add_option("--beta", sp.beta, "ising: fixed beta (default critical)");
  sweep->add_option("-J,--coupling", sp.J);
  sweep->add_option("--m", sp.m)->check(CLI::PositiveNumber);
  sweep->add_option("--n", sp.n)->check(CLI::PositiveNumber);
  sweep->add_option("-o,--out", sp.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  std::string cmdline;
  for (int i = 0; i < argc; ++i) cmdline += (i ? " " : "") + std::string(argv[i]);

  try {
    if (*verify) return cmd_verify(o, verify_ising);
    if (*charpoly) return cmd_charpoly(o);
    if (*z) return cmd_z(o, m, n, method);
    if (*f0) return cmd_f0(o, grid);
    if (*fsc) return cmd_fsc(o, m, n, aspect, tau_im, grid);
    if (*ising) {
      if (!critical && beta < 0) throw UsageError("ising: give --beta or --critical");
      return cmd_ising(o, Jspec, beta, critical, m, n, grid);
    }
    if (*ratio) return cmd_ratio(o, m, n);
    if (*sweep) {
      if (preset.empty() && o.graph.empty()) throw UsageError("sweep: graph required without --preset");
      return cmd_sweep(o, sp, preset, cmdline);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConjectureViolation& e) {
    std::cerr << "conjecture violation: " << e.what() << "\n";
    return kConjecture;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kVerifyFailed;
  }
  return kUsage;
}
