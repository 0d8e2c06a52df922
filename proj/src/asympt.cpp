#include "kleinz/asympt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <numbers>

#include "kleinz/specfun.hpp"

namespace kz {

namespace {

constexpr double kPi = std::numbers::pi;

// Gauss-Kronrod 7-15 nodes on [-1,1]; the Gauss nodes are the odd-indexed ones.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

double gk_adaptive(const std::function<double(double)>& f, double a, double b, double tol, int depth) {
  const double c = (a + b) / 2, h = (b - a) / 2;
  const double fc = f(c);
  double k = kWgk[7] * fc, g = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double s = f(c - h * kXgk[j]) + f(c + h * kXgk[j]);
    k += kWgk[j] * s;
    if (j % 2 == 1) g += kWg[j / 2] * s;
  }
  k *= h;
  g *= h;
  // near a zero of P on the torus, nearby roots in w merge into one cluster
  // and the integrand jumps by ~1e-5 on an interval of width ~1e-5, so the
  // depth is capped instead of resolving that
  if (std::abs(k - g) <= std::max(tol, 1e-15 * std::abs(k)) || depth >= 22) return k;
  return gk_adaptive(f, a, c, tol / 2, depth + 1) + gk_adaptive(f, c, b, tol / 2, depth + 1);
}

// log of the Mahler measure of a one-variable Laurent polynomial
double log_mahler(const LaurentPoly& p0) {
  LaurentPoly p = p0;
  p.trim();
  if (p.zero()) throw std::domain_error("f0: P vanishes identically on a circle");
  double s = std::log(std::abs(p.c.back()));
  if (p.hi() == p.lo) return s;
  for (const Root& r : roots(p).roots) {
    const double a = std::abs(r.z);
    if (a > 1) s += r.multiplicity * std::log(a);
  }
  return s;
}

const char* case_name(const std::string& kind) {
  if (kind == "none") return "no-zeros";
  if (kind == "two-zeros") return "two-zeros";
  if (kind == "real-node") return "real-node";
  return "nodes";
}

void fill_common(AsymptoticReport& r, const NodeReport& nodes, int m, int n) {
  r.m = m;
  r.n = n;
  r.m_parity = m % 2 ? "m-odd" : "m-even";
  r.zeros_case = case_name(nodes.kind);
  for (const TorusZero& t : nodes.zeros) {
    r.tau.push_back(tau(t, m, n));
    r.psi.push_back(t.psi);
  }
  r.warnings = aspect_warnings(m, n);
}

void finish(AsymptoticReport& r) {
  r.fsc = std::log(r.FSC);
  if (!(r.FSC > 0)) r.warnings.push_back("FSC vanishes: the leading term of the expansion cancels");
}

}  // namespace

nlohmann::json to_json(const AsymptoticReport& r) {
  nlohmann::json j;
  j["m"] = r.m;
  j["n"] = r.n;
  j["f0"] = r.f0;
  j["fsc"] = r.fsc;
  j["FSC"] = r.FSC;
  j["FSC(1)"] = r.FSC_plus;
  j["FSC(-1)"] = r.FSC_minus;
  j["case"] = r.zeros_case;
  j["m_parity"] = r.m_parity;
  if (!r.ising_regime.empty()) {
    j["ising_regime"] = r.ising_regime;
    j["beta"] = r.beta;
    j["beta_c"] = r.beta_c;
  }
  j["A"] = r.A;
  j["A_prime"] = r.Ap;
  j["branch"] = to_string(r.branch);
  j["bipartite"] = r.bipartite;
  j["tau"] = nlohmann::json::array();
  for (const cplx& t : r.tau) j["tau"].push_back({t.real(), t.imag()});
  j["psi"] = r.psi;
  j["warnings"] = r.warnings;
  return j;
}

double bulk_free_energy(const BiLaurentPoly& P, int grid) {
  if (grid < 2 || grid % 2) throw std::invalid_argument("bulk_free_energy: grid must be an even integer >= 2");
  const double scale = P.max_abs();
  auto pass = [&](double oz, double ow) {
    const int nt = std::clamp(thread_count(), 1, grid);
    auto rows = [&](int lo, int hi) {
      double s = 0;
      for (int j = lo; j < hi; ++j) {
        const LaurentPoly pw = P.in_w(std::polar(1.0, 2 * kPi * (j + oz) / grid));
        for (int k = 0; k < grid; ++k) {
          const double v = pw(std::polar(1.0, 2 * kPi * (k + ow) / grid)).real();
          if (v < -1e-9 * scale) throw std::domain_error("bulk_free_energy: P is negative on the unit torus");
          s += std::log(std::max(v, 1e-300));
        }
      }
      return s;
    };
    std::vector<std::future<double>> parts;
    for (int t = 0; t < nt; ++t) parts.push_back(std::async(std::launch::async, rows, grid * t / nt, grid * (t + 1) / nt));
    double s = 0;
    for (auto& p : parts) s += p.get();
    return s / (static_cast<double>(grid) * grid);
  };
  return 0.5 * (pass(0.5, 0.5) + pass(0.25, 0.75)) / 2;
}

double bulk_free_energy_precise(const BiLaurentPoly& P, double tol) {
  // P has real coefficients, so the inner integral is even in arg z
  auto g = [&](double theta) { return log_mahler(P.in_w(std::polar(1.0, theta))); };
  return gk_adaptive(g, 0, kPi, tol * kPi, 0) / (2 * kPi);
}

double bulk_free_energy_from_Q(const BiLaurentPoly& Q, double tol) {
  auto g = [&](double theta) { return log_mahler(Q.in_w(std::polar(1.0, theta))); };
  return gk_adaptive(g, 0, kPi, tol * kPi, 0) / kPi;
}

std::vector<std::string> aspect_warnings(int m, int n) {
  const double r = static_cast<double>(m) / n;
  if (r < 0.1 || r > 10)
    return {"aspect ratio m/n = " + std::to_string(r) + " outside [0.1, 10]; the expansion assumes it bounded"};
  return {};
}

double fsc_at(const NodeReport& nodes, int m, int n, double xi, bool from_Q) {
  double out = 1;
  for (const TorusZero& t : nodes.zeros) {
    const cplx u = 1.0 / cpow(t.z0, n), v = xi / cpow(t.w0, m);
    const double x = xi_at(u, v, tau(t, m, n));
    const bool full = from_Q && t.order == 2;
    out *= full ? x : std::sqrt(x);
  }
  return out;
}

AsymptoticReport fsc_general(const NodeReport& nodes, const ModFourInvariant& mod4, int m, int n, Branch branch) {
  AsymptoticReport r;
  fill_common(r, nodes, m, n);
  r.A = mod4.A;
  r.Ap = mod4.Ap;
  r.branch = branch;
  r.FSC_plus = fsc_at(nodes, m, n, 1.0, false);
  r.FSC_minus = fsc_at(nodes, m, n, -1.0, false);
  int A = r.A, Ap = r.Ap;
  if (m % 2) {
    if (branch == Branch::swapped) std::swap(A, Ap);
    r.FSC = std::abs(std::sin(A * kPi / 4)) * r.FSC_plus + std::abs(std::cos(Ap * kPi / 4)) * r.FSC_minus;
  } else {
    r.FSC = std::abs(std::sin((A - Ap) * kPi / 4)) * r.FSC_plus + r.FSC_minus;
  }
  finish(r);
  return r;
}

AsymptoticReport fsc_bipartite(const NodeReport& qnodes, const ModFourInvariant& mod4, int m, int n, Branch branch) {
  AsymptoticReport r;
  fill_common(r, qnodes, m, n);
  r.bipartite = true;
  r.A = mod4.A;
  r.Ap = mod4.Ap;
  r.branch = branch;
  r.FSC_plus = fsc_at(qnodes, m, n, 1.0, true);
  r.FSC_minus = fsc_at(qnodes, m, n, -1.0, true);
  int A = r.A, Ap = r.Ap;
  if (m % 2) {
    if (branch == Branch::swapped) std::swap(A, Ap);
    r.FSC = std::abs(std::sin(A * kPi / 2)) * r.FSC_plus + std::abs(std::cos(Ap * kPi / 2)) * r.FSC_minus;
  } else {
    r.FSC = std::abs(std::sin((A + Ap) * kPi / 2)) * r.FSC_plus + r.FSC_minus;
  }
  finish(r);
  return r;
}

AsymptoticReport dimer_asymptotics(const EmbeddedGraph& g, int m, int n, const AsymptOptions& opt) {
  if (n % 2 == 0) throw std::invalid_argument("asymptotics: n must be odd");
  const std::vector<int> K = find_klein_orientation(g);
  const KleinPolys R = extract_R(g, K);
  const BiLaurentPoly P = extract_P_klein(g, K);
  const Branch branch = calibrate_branch(g, K, R, P);
  AsymptoticReport r;
  if (!g.colors.empty()) {
    const BipartitePolys B = extract_bipartite(g, K);
    r = fsc_bipartite(unit_torus_zeros(B.Q, opt.zeros), mod4_invariants_bipartite(B.S1, B.Sm1, opt.zeros.roots), m,
                      n, branch);
    r.f0 = opt.grid > 0 ? bulk_free_energy(P, opt.grid) : bulk_free_energy_from_Q(B.Q);
  } else {
    r = fsc_general(unit_torus_zeros(P, opt.zeros), mod4_invariants(R.R1, R.Rm1, opt.zeros.roots), m, n, branch);
    r.f0 = opt.grid > 0 ? bulk_free_energy(P, opt.grid) : bulk_free_energy_precise(P);
  }
  return r;
}

double ising_node_pfaffian(const EmbeddedGraph& g, const std::vector<double>& J, double beta) {
  EmbeddedGraph F = fisher_graph(g, J, beta);
  F.orientation = find_klein_orientation(F);
  const EmbeddedGraph t = orientation_cover(F);
  return pfaffian(torus_matrix(t, t.orientation, -1.0, 1.0)).real();
}

double ising_critical_beta(const EmbeddedGraph& g, const std::vector<double>& J, double tol, double lo, double hi) {
  if (!(lo > 0) || !(hi > lo)) throw std::invalid_argument("ising_critical_beta: need 0 < lo < hi");
  // the structure of the Fisher graph does not depend on beta, so one
  // orientation serves every evaluation
  EmbeddedGraph F = fisher_graph(g, J, 1.0);
  F.orientation = find_klein_orientation(F);
  auto pf = [&](double beta) {
    EmbeddedGraph Fb = fisher_graph(g, J, beta);
    Fb.orientation = F.orientation;
    const EmbeddedGraph t = orientation_cover(Fb);
    return pfaffian(torus_matrix(t, t.orientation, -1.0, 1.0)).real();
  };
  const int steps = 400;
  double a = lo, fa = pf(lo);
  for (int k = 1; k <= steps; ++k) {
    double b = lo * std::pow(hi / lo, static_cast<double>(k) / steps);
    const double fb = pf(b);
    if (fa == 0) return a;
    if ((fa < 0) != (fb < 0)) {
      for (int it = 0; it < 200 && b - a > tol; ++it) {
        const double c = (a + b) / 2;
        const double fc = pf(c);
        if ((fc < 0) == (fa < 0)) a = c, fa = fc;
        else b = c;
        if (fc == 0) return c;
      }
      return (a + b) / 2;
    }
    a = b;
    fa = fb;
  }
  throw std::runtime_error("ising_critical_beta: P(-1,1) has no sign-changing square root in the bracket");
}

AsymptoticReport fsc_ising(const EmbeddedGraph& g, const std::vector<double>& J, double beta, int m, int n,
                           const AsymptOptions& opt) {
  if (n % 2 == 0) throw std::invalid_argument("asymptotics: n must be odd");
  if (!(beta >= 0)) throw std::invalid_argument("fsc_ising: beta must be nonnegative");
  const double bc = ising_critical_beta(g, J);
  std::string regime;
  double b = beta;
  if (std::abs(beta - bc) <= 1e-9 * std::max(1.0, bc)) {
    regime = "critical";
    b = bc;
  } else {
    regime = beta < bc ? "sub" : "super";
  }
  const IsingModel M = ising_model(g, J, b);
  const NodeReport nodes = unit_torus_zeros(M.P, opt.zeros);
  if (regime == "critical") {
    if (nodes.zeros.size() != 1 || std::abs(nodes.zeros[0].w0 - 1.0) > 1e-6)
      throw ConjectureViolation("Fisher polynomial at criticality: expected a single node at (-1,1)");
  }
  AsymptoticReport r = fsc_general(nodes, mod4_invariants(M.R.R1, M.R.Rm1, opt.zeros.roots), m, n, M.branch);
  r.ising_regime = regime;
  r.beta = beta;
  r.beta_c = bc;
  const double f0P = opt.grid > 0 ? bulk_free_energy(M.P, opt.grid) : bulk_free_energy_precise(M.P);
  r.f0 = 2 * M.log_cosh_sum + f0P;
  const double expect = regime == "sub" ? 0.0 : regime == "super" ? std::log(2.0) : r.fsc;
  if (std::abs(r.fsc - expect) > 1e-9)
    r.warnings.push_back("fsc differs from the regime value " + std::to_string(expect));
  return r;
}

double ksw_logpmn(const NodeReport& nodes, double f0, int m, int n, cplx zeta, cplx xi) {
  double s = 2.0 * m * n * f0;
  for (const TorusZero& t : nodes.zeros) {
    const cplx u = zeta / cpow(t.z0, n), v = xi / cpow(t.w0, m);
    s += 2 * std::log(xi_at(u, v, tau(t, m, n)));
  }
  return s;
}

double ratio_limit(RatioCase c, cplx tau_, double nu) {
  const cplx t00 = theta00(nu, tau_), t01 = theta01(nu, tau_), t10 = theta10(nu, tau_), t11 = theta11(nu, tau_);
  switch (c) {
    case RatioCase::bipartite_no_zeros:
    case RatioCase::ising_off_critical:
      return 1;
    case RatioCase::bipartite_two_zeros:
      return 2 * std::norm(t00 + t01) / (std::norm(t00) + std::norm(t01) + std::norm(t10) + std::norm(t11));
    case RatioCase::bipartite_real_node:
      return 2 * std::norm(t00 + t01) / (std::norm(t00) + std::norm(t01) + std::norm(t10));
    case RatioCase::square_m_even:
      return 2 * std::norm(t00) / (std::norm(t00) + std::norm(t01) + std::norm(t10));
    case RatioCase::square_m_odd:
      return 2;
    case RatioCase::ising_critical: {
      const double a = std::abs(t00), b = std::abs(t01), d = std::abs(t10);
      return (2 * a + std::sqrt(2 * a * b) + b) / (a + b + d);
    }
  }
  throw std::invalid_argument("ratio_limit: unknown case");
}

double log_finite_ratio(const EmbeddedGraph& g, int m, int n, int max_vertices) {
  if (n % 2 == 0) throw std::invalid_argument("finite_ratio: n must be odd");
  const std::vector<int> K = find_klein_orientation(g);
  const KleinPolys R = extract_R(g, K);
  const BiLaurentPoly P = extract_P_klein(g, K);
  const Branch branch = calibrate_branch(g, K, R, P);
  const double logz = log_zmn(R.R1, R.Rm1, P, m, n, branch);
  double logzt;
  if (!g.colors.empty()) {
    logzt = log_z_torus_product(extract_bipartite(g, K).Q, m, n);
  } else {
    EmbeddedGraph gk = g;
    gk.orientation = K;
    const EmbeddedGraph gt = orientation_cover(build_cover(gk, m, n));
    if (gt.n_vertices > max_vertices)
      throw std::invalid_argument("finite_ratio: torus cover too large for Pfaffians (" +
                                  std::to_string(gt.n_vertices) + " vertices)");
    logzt = std::log(z_torus_pfaffian(gt, find_orientation(gt)));
  }
  return 2 * logz - logzt;
}

double finite_ratio(const EmbeddedGraph& g, int m, int n, int max_vertices) {
  return std::exp(log_finite_ratio(g, m, n, max_vertices));
}

}  // namespace kz
