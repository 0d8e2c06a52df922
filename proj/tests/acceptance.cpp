// Acceptance run: one PASS/FAIL line per criterion, details indented below it.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "kleinz/asympt.hpp"
#include "kleinz/exact.hpp"
#include "kleinz/io.hpp"
#include "kleinz/lattices.hpp"
#include "kleinz/orient.hpp"
#include "kleinz/specfun.hpp"

using namespace kz;

namespace {

constexpr double kPi = std::numbers::pi;

struct Clock {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

// Detail lines are printed under the criterion's result line.
std::string g_details;

void detail(const char* fmt_, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt_, args...);
  g_details += "    " + std::string(buf) + "\n";
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

const std::vector<std::string> kDimerLattices{"square_2x1", "square_1x2", "hexagonal", "triangular"};

// The Ising lattice enters the dimer-level checks through its Fisher graph.
std::vector<EmbeddedGraph> all_bundled_dimer_graphs() {
  std::vector<EmbeddedGraph> out;
  for (const auto& name : kDimerLattices) out.push_back(load_lattice(name));
  const EmbeddedGraph s = load_lattice("square_ising");
  out.push_back(fisher_graph(s, std::vector<double>(s.n_edges(), 1.0), 0.6));
  return out;
}

struct Calibrated {
  std::vector<int> K;
  KleinPolys R;
  BiLaurentPoly P;
  Branch branch;
};

Calibrated calibrated(const EmbeddedGraph& g) {
  Calibrated c;
  c.K = find_klein_orientation(g);
  c.R = extract_R(g, c.K);
  c.P = extract_P_klein(g, c.K);
  c.branch = calibrate_branch(g, c.K, c.R, c.P);
  return c;
}

// ---------------------------------------------------------------------------

bool criterion1() {
  Clock clk;
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> U(0.2, 2.0);
  double worst = 0;
  int cases = 0;
  for (const auto& name : kDimerLattices) {
    for (int set = 0; set < 3; ++set) {
      EmbeddedGraph g = load_lattice(name);
      for (auto& e : g.edges) e.w = U(rng);
      const Calibrated c = calibrated(g);
      for (int n = 1; n * g.n_vertices <= 16; n += 2)
        for (int m = 1; m * n * g.n_vertices <= 16; ++m) {
          const EmbeddedGraph cov = build_cover(g, m, n);
          const double zb = z_bruteforce(cov);
          const double zp = z_pfaffian(cov, find_klein_orientation(cov));
          const double zr = zmn(c.R.R1, c.R.Rm1, c.P, m, n, c.branch);
          worst = std::max({worst, rel(zp, zb), rel(zr, zb)});
          ++cases;
        }
    }
  }
  const double t = clk.seconds();
  detail("%d (lattice, weights, m, n) cases, worst relative deviation %.2e, %.2f s", cases, worst, t);
  return worst <= 1e-9 && t < 10;
}

bool criterion2() {
  Clock clk;
  double worst_mod = 0, worst_arg = 0;
  int cases = 0;
  for (const EmbeddedGraph& g : all_bundled_dimer_graphs()) {
    const std::vector<int> K = find_klein_orientation(g);
    const KleinPolys R = extract_R(g, K);
    const BiLaurentPoly P = extract_P_klein(g, K);
    for (int m = 1; m <= 4; ++m)
      for (int n : {1, 3}) {
        const auto [r1, rm1] = rmn_product(R.R1, R.Rm1, P, m, n);
        for (int s = 0; s < 2; ++s) {
          const LogComplex prod = s == 0 ? r1 : rm1;
          const cplx d = det(lifted_cover_matrix(g, K, m, n, s == 0 ? 1.0 : -1.0));
          const LogComplex direct = LogComplex::from(d);
          worst_mod = std::max(worst_mod, std::abs(std::expm1(prod.log_modulus - direct.log_modulus)));
          // gauge set {alpha, -alpha}: equal arguments or conjugate ones
          const double da = std::min(std::abs(wrap_angle(prod.argument - direct.argument)),
                                     std::abs(wrap_angle(prod.argument + direct.argument)));
          worst_arg = std::max(worst_arg, da);
          ++cases;
        }
      }
  }
  const double t = clk.seconds();
  detail("%d comparisons, worst |R_mn| relative deviation %.2e, worst argument deviation up to conjugation %.2e, %.2f s", cases,
         worst_mod, worst_arg, t);
  return worst_mod <= 1e-9 && worst_arg <= 1e-9 && t < 30;
}

bool criterion3() {
  const EmbeddedGraph g = load_lattice("square_2x1");
  const Calibrated c = calibrated(g);
  const double zr = zmn(c.R.R1, c.R.Rm1, c.P, 2, 1, c.branch);
  const EmbeddedGraph cov = build_cover(g, 2, 1);
  const double zp = z_pfaffian(cov, find_klein_orientation(cov));
  const double zb = z_bruteforce(cov);
  detail("product %.12f, pfaffian %.12f, brute force %.0f", zr, zp, zb);
  return std::abs(zr - 10) < 1e-9 && std::abs(zp - 10) < 1e-9 && zb == 10;
}

bool criterion4() {
  bool ok = true;
  {
    const EmbeddedGraph g = load_lattice("triangular");
    const std::vector<int> K = find_klein_orientation(g);
    const KleinPolys R = extract_R(g, K);
    const ModFourInvariant a = mod4_invariants(R.R1, R.Rm1);
    detail("triangular: A = %d, A' = %d (expected 2, 0)", a.A, a.Ap);
    ok &= a.A == 2 && a.Ap == 0;
  }
  {
    const EmbeddedGraph g = load_lattice("square_1x2");
    const std::vector<int> K = find_klein_orientation(g);
    const KleinPolys R = extract_R(g, K);
    const ModFourInvariant a = mod4_invariants(R.R1, R.Rm1);
    detail("square_1x2: A = %d, A' = %d (expected 1, 1)", a.A, a.Ap);
    ok &= a.A == 1 && a.Ap == 1;
  }
  // parity table for bipartite lattices
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(0, 1);
  struct Region {
    std::string lattice, name, expect;
    std::function<void(EmbeddedGraph&)> draw;
  };
  auto set = [](EmbeddedGraph& g, std::map<std::string, double> w) { set_weights(g, w); };
  std::vector<Region> regions{
      {"square_2x1", "liquid", "real-node",
       [&](EmbeddedGraph& g) {
         const double x = 0.3 + 2 * U(rng), y = 0.3 + 2 * U(rng);
         set(g, {{"x1", x}, {"x2", x}, {"y1", y}, {"y2", y}});
       }},
      {"hexagonal", "liquid", "two-zeros",
       [&](EmbeddedGraph& g) {
         const double n1 = 1, n3 = 0.5 + U(rng), lo = std::abs(n1 - n3), hi = n1 + n3;
         set(g, {{"n1", n1}, {"n3", n3}, {"n2", lo + (0.1 + 0.8 * U(rng)) * (hi - lo)}});
       }},
      {"hexagonal", "frozen, n2 > n1 + n3", "none",
       [&](EmbeddedGraph& g) {
         const double n1 = 1, n3 = 0.5 + U(rng);
         set(g, {{"n1", n1}, {"n3", n3}, {"n2", n1 + n3 + 0.1 + U(rng)}});
       }},
      {"hexagonal", "frozen, n2 < |n1 - n3|", "none",
       [&](EmbeddedGraph& g) {
         const double n1 = 1, n3 = 2 + U(rng);
         set(g, {{"n1", n1}, {"n3", n3}, {"n2", (0.1 + 0.8 * U(rng)) * (n3 - n1)}});
       }},
  };
  for (const Region& reg : regions) {
    int good = 0;
    for (int k = 0; k < 10; ++k) {
      EmbeddedGraph g = load_lattice(reg.lattice);
      reg.draw(g);
      const std::vector<int> K = find_klein_orientation(g);
      const BipartitePolys B = extract_bipartite(g, K);
      const NodeReport z = unit_torus_zeros(B.Q);
      const ModFourInvariant a = mod4_invariants_bipartite(B.S1, B.Sm1);
      const bool parity = z.zeros.empty() ? (a.A + a.Ap) % 2 == 0 : (a.A % 2 != 0 && a.Ap % 2 == 0);
      if (z.kind == reg.expect && parity) ++good;
    }
    detail("%s %s: %d/10 points in the expected case with the expected parities", reg.lattice.c_str(),
           reg.name.c_str(), good);
    ok &= good == 10;
  }
  return ok;
}

bool criterion5() {
  double w14 = 0, w15 = 0;
  for (double t : {0.1, 0.5, 1.0, 2.0, 10.0}) {
    const cplx tau(0, t);
    const cplx e = eta(tau);
    const cplx lhs14 = 2.0 * e * e * e, rhs14 = theta00(0, tau) * theta10(0, tau) * theta01(0, tau);
    const cplx lhs15 = theta00(0, tau) * theta01(0, tau) / (e * e), rhs15 = theta01(0, 2.0 * tau) / eta(2.0 * tau);
    w14 = std::max(w14, std::abs(lhs14 - rhs14) / std::abs(rhs14));
    w15 = std::max(w15, std::abs(lhs15 - rhs15) / std::abs(rhs15));
  }
  detail("2 eta^3 = theta00 theta10 theta01: worst relative error %.2e", w14);
  detail("theta00 theta01 / eta^2 = theta01(2tau) / eta(2tau): worst relative error %.2e", w15);
  return w14 <= 1e-12 && w15 <= 1e-12;
}

// Below this, |e(n)| is rounding noise and monotonicity is meaningless.
constexpr double kNoiseFloor = 1e-10;

bool converges(const char* label, const std::vector<double>& e) {
  bool mono = true;
  for (size_t k = 1; k < e.size(); ++k) mono &= std::abs(e[k]) <= std::max(std::abs(e[k - 1]), kNoiseFloor);
  const bool ok = std::abs(e.back()) < 0.02 && mono;
  detail("%-28s e(11) = %+.3e  e(21) = %+.3e  e(41) = %+.3e  %s", label, e[0], e[1], e[2],
         ok ? "ok" : (mono ? "too large" : "not monotone"));
  return ok;
}

bool criterion6() {
  Clock clk;
  bool ok = true;
  const std::vector<int> ns{11, 21, 41};
  struct Dimer {
    const char* label;
    EmbeddedGraph g;
  };
  EmbeddedGraph frozen = load_lattice("hexagonal");
  set_weights(frozen, {{"n2", 3.0}});
  std::vector<Dimer> dimers{{"square_2x1 (real node)", load_lattice("square_2x1")},
                            {"square_1x2 (two nodes)", load_lattice("square_1x2")},
                            {"hexagonal (two zeros)", load_lattice("hexagonal")},
                            {"hexagonal n2=3 (no zeros)", frozen},
                            {"triangular (no zeros)", load_lattice("triangular")}};
  for (const Dimer& d : dimers) {
    const Calibrated c = calibrated(d.g);
    std::vector<double> e;
    for (int n : ns) {
      const AsymptoticReport r = dimer_asymptotics(d.g, n, n);
      e.push_back(log_zmn(c.R.R1, c.R.Rm1, c.P, n, n, c.branch) - n * n * r.f0 / 2 - r.fsc);
    }
    ok &= converges(d.label, e);
  }
  const EmbeddedGraph s = load_lattice("square_ising");
  const std::vector<double> J(s.n_edges(), 1.0);
  const double bc = ising_critical_beta(s, J);
  for (auto [label, beta] : std::vector<std::pair<const char*, double>>{
           {"square_ising beta=0.2", 0.2}, {"square_ising beta_c", bc}, {"square_ising beta=1.5", 1.5}}) {
    const IsingModel M = ising_model(s, J, beta);
    std::vector<double> e;
    for (int n : ns) {
      const AsymptoticReport r = fsc_ising(s, J, beta, n, n);
      e.push_back(ising_log_partition(M, n, n) - n * n * r.f0 / 2 - r.fsc);
    }
    ok &= converges(label, e);
  }
  const double t = clk.seconds();
  detail("%.2f s", t);
  return ok && t < 60;
}

bool criterion7() {
  const EmbeddedGraph s = load_lattice("square_ising");
  const std::vector<double> J(s.n_edges(), 1.0);
  const double bc = ising_critical_beta(s, J), exact = 0.5 * std::log(1 + std::sqrt(2.0));
  detail("beta_c = %.12f, exact %.12f", bc, exact);
  bool ok = std::abs(bc - exact) < 1e-6;
  for (auto [beta, target] : std::vector<std::pair<double, double>>{{0.2, 0.0}, {1.5, std::log(2.0)}}) {
    const AsymptoticReport r = fsc_ising(s, J, beta, 41, 41);
    const double measured = ising_log_partition(ising_model(s, J, beta), 41, 41) - 41 * 41 * r.f0 / 2;
    detail("beta = %.1f (%s): fsc = %.6f, log Z - n^2 f0/2 at n = 41: %.6f, target %.6f", beta,
           r.ising_regime.c_str(), r.fsc, measured, target);
    ok &= std::abs(r.fsc - target) < 0.02 && std::abs(measured - target) < 0.02;
  }
  for (auto [m, n] : std::vector<std::pair<int, int>>{{41, 41}, {21, 41}, {41, 21}}) {
    const AsymptoticReport r = fsc_ising(s, J, bc, m, n);
    const cplx expect(0, m / (2.0 * n));
    const double err = r.tau.size() == 1 ? std::abs(r.tau[0] - expect) : INFINITY;
    detail("m = %d, n = %d: tau = %.9f%+.9fi, expected %.9fi", m, n, r.tau.empty() ? NAN : r.tau[0].real(),
           r.tau.empty() ? NAN : r.tau[0].imag(), expect.imag());
    ok &= err < 1e-6;
  }
  return ok;
}

bool criterion8() {
  bool ok = true;
  for (auto [M, N] : std::vector<std::pair<int, int>>{{1, 2}, {3, 2}, {3, 4}}) {
    const double r = finite_ratio(square_grid(M, N), 1, 1);
    detail("%d x %d square lattice: Z^2 / Z(torus cover) = %.12f", M, N, r);
    ok &= std::abs(r - 2) < 1e-9;
  }
  EmbeddedGraph frozen = load_lattice("hexagonal");
  set_weights(frozen, {{"n2", 3.0}});
  const double r = finite_ratio(frozen, 41, 41);
  detail("hexagonal n2=3 (no zeros), m = n = 41: ratio %.9f", r);
  return ok && std::abs(r - 1) < 0.02;
}

bool criterion9() {
  const AsymptoticReport b = dimer_asymptotics(load_lattice("square_2x1"), 30, 1);
  const double tb = b.tau[0].imag();
  const double db = b.fsc - kPi * tb / 12 - std::log(2.0);
  detail("square_2x1, m = 30, n = 1: tau_im = %.3f, fsc - pi tau_im/12 - log 2 = %.3e", tb, db);

  const EmbeddedGraph s = load_lattice("square_ising");
  const std::vector<double> J(s.n_edges(), 1.0);
  const AsymptoticReport c = fsc_ising(s, J, ising_critical_beta(s, J), 60, 1);
  const double tc = c.tau[0].imag();
  const double dc = c.fsc - kPi * tc / 48 + std::log(2 - std::sqrt(2.0));
  detail("critical Ising, m = 60, n = 1: tau_im = %.3f, fsc - pi tau_im/48 + log(2 - sqrt 2) = %.3e", tc, dc);
  detail("(for reference: fsc - pi tau_im/24 + log(2 - sqrt 2) = %.3e)",
         c.fsc - kPi * tc / 24 + std::log(2 - std::sqrt(2.0)));
  return std::abs(db) < 0.01 && std::abs(dc) < 0.01;
}

bool criterion10() {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> U(0, 2 * kPi);
  double worst = 0;
  for (const EmbeddedGraph& g : all_bundled_dimer_graphs()) {
    const std::vector<int> K = find_klein_orientation(g);
    const BiLaurentPoly P = extract_P_klein(g, K);
    for (int k = 0; k < 16; ++k) {
      const cplx z = std::polar(1.0, U(rng)), w = std::polar(1.0, U(rng));
      const cplx a = twisted_det2(g, K, z, w), b = P(z * z, w);
      worst = std::max(worst, std::abs(a - b) / std::max(std::abs(b), 1e-6 * P.max_abs()));
    }
  }
  detail("16 random unit points on each of 5 graphs, worst relative error %.2e", worst);
  return worst <= 1e-9;
}

}  // namespace

int main() {
  struct C {
    int id;
    const char* what;
    bool (*run)();
  };
  const std::vector<C> all{
      {1, "exact oracle equivalence on small covers", criterion1},
      {2, "cover characteristic polynomials from the product formula", criterion2},
      {3, "Z = 10 for the 2 x 1 square lattice, m = 2, n = 1", criterion3},
      {4, "mod-4 invariants and bipartite parity table", criterion4},
      {5, "theta and eta identities", criterion5},
      {6, "asymptotic convergence of log Z_nn", criterion6},
      {7, "Ising criticality, regimes and shape", criterion7},
      {8, "ratio identities", criterion8},
      {9, "large tau_im limits", criterion9},
      {10, "twisted determinant spot check", criterion10},
  };
  int failed = 0;
  for (const C& c : all) {
    bool ok = false;
    std::string err;
    g_details.clear();
    try {
      ok = c.run();
    } catch (const std::exception& e) {
      err = e.what();
    }
    if (!err.empty()) detail("exception: %s", err.c_str());
    std::printf("criterion %d: %s  %s\n%s", c.id, ok ? "PASS" : "FAIL", c.what, g_details.c_str());
    std::fflush(stdout);
    failed += !ok;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed ? 1 : 0;
}
