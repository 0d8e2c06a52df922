#include "kleinz/exact.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <future>
#include <limits>
#include <numbers>
#include <thread>
#include <unordered_map>

namespace kz {

namespace {

constexpr double kPi = std::numbers::pi;

// Splits [0,count) over worker threads and multiplies the partial products.
template <class F>
LogComplex parallel_product(int count, F&& term) {
  const int nt = std::clamp(std::min(thread_count(), count / 256), 1, 64);
  auto chunk = [&](int lo, int hi) {
    LogComplex acc;
    for (int k = lo; k < hi; ++k) acc *= term(k);
    return acc;
  };
  if (nt == 1) return chunk(0, count);
  std::vector<std::future<LogComplex>> parts;
  for (int t = 0; t < nt; ++t)
    parts.push_back(std::async(std::launch::async, chunk, count * t / nt, count * (t + 1) / nt));
  LogComplex acc;
  for (auto& p : parts) acc *= p.get();
  return acc;
}

cplx unit_root(int k, int n) { return std::polar(1.0, 2 * kPi * k / n); }

}  // namespace

int thread_count() {
  static const int env = [] {
    const char* s = std::getenv("KLEINZ_THREADS");
    return s ? std::atoi(s) : 0;
  }();
  if (env > 0) return env;
  return std::max(1u, std::thread::hardware_concurrency());
}

double wrap_angle(double a) {
  a = std::remainder(a, 2 * kPi);  // [-pi, pi]
  return a <= -kPi ? a + 2 * kPi : a;
}

LogComplex LogComplex::from(cplx z) {
  if (z == cplx(0, 0)) return zero();
  return {std::log(std::abs(z)), std::arg(z) <= -kPi ? kPi : std::arg(z)};
}

LogComplex LogComplex::zero() { return {-std::numeric_limits<double>::infinity(), 0}; }

bool LogComplex::is_zero() const { return std::isinf(log_modulus) && log_modulus < 0; }

LogComplex LogComplex::operator*(const LogComplex& o) const {
  LogComplex r = *this;
  return r *= o;
}

LogComplex& LogComplex::operator*=(const LogComplex& o) {
  log_modulus += o.log_modulus;
  argument = wrap_angle(argument + o.argument);
  return *this;
}

LogComplex LogComplex::conj() const { return {log_modulus, argument == kPi ? kPi : -argument}; }

cplx LogComplex::to_complex() const {
  if (is_zero()) return {0, 0};
  if (log_modulus > 709.0 || std::isnan(log_modulus))
    throw std::overflow_error("LogComplex: modulus exceeds double range");
  return std::polar(std::exp(log_modulus), argument);
}

const char* to_string(Branch b) { return b == Branch::standard ? "standard" : "swapped"; }

double z_pfaffian(const EmbeddedGraph& g, const std::vector<int>& K) {
  if (g.n_vertices == 0) return 1.0;
  return pfaffian_combination(det(klein_matrix(g, K, 1.0, 1.0)), det(klein_matrix(g, K, 1.0, -1.0)));
}

double z_bruteforce(const EmbeddedGraph& g) {
  const int nv = g.n_vertices;
  if (nv > 32) throw std::invalid_argument("z_bruteforce: more than 32 vertices");
  if (nv % 2) return 0.0;
  std::vector<std::vector<std::pair<int, double>>> adj(nv);
  for (const auto& e : g.edges) {
    if (e.u == e.v) continue;
    adj[e.u].push_back({e.v, e.w});
    adj[e.v].push_back({e.u, e.w});
  }
  const uint64_t full = (nv == 64) ? ~uint64_t{0} : (uint64_t{1} << nv) - 1;
  std::unordered_map<uint64_t, double> memo;
  auto rec = [&](auto&& self, uint64_t matched) -> double {
    if (matched == full) return 1.0;
    if (auto it = memo.find(matched); it != memo.end()) return it->second;
    int v = 0;
    while ((matched >> v) & 1) ++v;
    double s = 0;
    for (auto [u, w] : adj[v])
      if (!((matched >> u) & 1) && w != 0.0) s += w * self(self, matched | (uint64_t{1} << v) | (uint64_t{1} << u));
    memo.emplace(matched, s);
    return s;
  };
  return rec(rec, 0);
}

LogComplex root_product(const LaurentPoly& p, int n) {
  LogComplex acc;
  for (int l = 0; l < n; ++l) acc *= LogComplex::from(p(unit_root(l, n)));
  return acc;
}

LogComplex pmn_value(const BiLaurentPoly& P, int m, int n, cplx zeta, cplx xi) {
  if (m < 1 || n < 1) throw std::invalid_argument("pmn_value: m, n must be positive");
  // n-th roots of zeta and m-th roots of xi
  const double az = std::arg(zeta) / n, aw = std::arg(xi) / m;
  return parallel_product(n, [&](int l) {
    const cplx z = std::polar(1.0, az + 2 * kPi * l / n);
    const LaurentPoly pw = P.in_w(z);
    LogComplex acc;
    for (int k = 0; k < m; ++k) acc *= LogComplex::from(pw(std::polar(1.0, aw + 2 * kPi * k / m)));
    return acc;
  });
}

std::pair<LogComplex, LogComplex> rmn_product(const LaurentPoly& R1, const LaurentPoly& Rm1,
                                              const BiLaurentPoly& P, int m, int n) {
  if (m < 1 || n < 1) throw std::invalid_argument("rmn_product: m, n must be positive");
  if (n % 2 == 0) throw std::invalid_argument("rmn_product: n must be odd");
  const bool m_odd = m % 2 == 1;
  LogComplex r1, rm1;
  for (int l = 0; l < n; ++l) {
    const cplx z = unit_root(l, n);
    const LaurentPoly pw = P.in_w(z);
    r1 *= LogComplex::from(R1(z));
    if (m_odd)
      rm1 *= LogComplex::from(Rm1(z)).conj();
    else
      r1 *= LogComplex::from(Rm1(z)).conj();
    for (int k = 1; k < m; ++k) {
      // zeta^k with zeta = exp(i pi / m)
      const LogComplex p = LogComplex::from(pw(std::polar(1.0, kPi * k / m)));
      (k % 2 == 0 ? r1 : rm1) *= p;
    }
  }
  return {r1, rm1};
}

namespace {

// log(c1 e^l1 + c2 e^l2) for c1, c2 >= 0
double log_combine(double c1, double l1, double c2, double l2) {
  const bool has1 = c1 > 0 && std::isfinite(l1), has2 = c2 > 0 && std::isfinite(l2);
  if (!has1 && !has2) return -std::numeric_limits<double>::infinity();
  if (!has1) return std::log(c2) + l2;
  if (!has2) return std::log(c1) + l1;
  const double top = std::max(std::log(c1) + l1, std::log(c2) + l2);
  return top + std::log(std::exp(std::log(c1) + l1 - top) + std::exp(std::log(c2) + l2 - top));
}

}  // namespace

double log_zmn(const LaurentPoly& R1, const LaurentPoly& Rm1, const BiLaurentPoly& P, int m, int n,
               Branch branch) {
  if (n % 2 == 0) throw std::invalid_argument("zmn: n must be odd");
  const double alpha = root_product(R1, n).argument;
  const double alpha_p = root_product(Rm1, n).argument;
  const double l1 = pmn_value(P, m, n, 1.0, 1.0).log_modulus / 4;
  const double lm1 = pmn_value(P, m, n, 1.0, -1.0).log_modulus / 4;
  if (m % 2 == 0) return log_combine(std::abs(std::sin((alpha - alpha_p) / 2)), l1, 1.0, lm1);
  if (branch == Branch::swapped)
    return log_combine(std::abs(std::sin(alpha_p / 2)), l1, std::abs(std::cos(alpha / 2)), lm1);
  return log_combine(std::abs(std::sin(alpha / 2)), l1, std::abs(std::cos(alpha_p / 2)), lm1);
}

double zmn(const LaurentPoly& R1, const LaurentPoly& Rm1, const BiLaurentPoly& P, int m, int n,
           Branch branch) {
  return std::exp(log_zmn(R1, Rm1, P, m, n, branch));
}

double log_zmn_bipartite(const BipartitePolys& B, int m, int n, Branch branch) {
  if (n % 2 == 0) throw std::invalid_argument("zmn_bipartite: n must be odd");
  const double beta = root_product(B.S1, n).argument;
  const double beta_p = root_product(B.Sm1, n).argument;
  const double l1 = pmn_value(B.Q, m, n, 1.0, 1.0).log_modulus / 2;
  const double lm1 = pmn_value(B.Q, m, n, 1.0, -1.0).log_modulus / 2;
  if (m % 2 == 0) return log_combine(std::abs(std::sin(beta - beta_p)), l1, 1.0, lm1);
  if (branch == Branch::swapped) return log_combine(std::abs(std::sin(beta_p)), l1, std::abs(std::cos(beta)), lm1);
  return log_combine(std::abs(std::sin(beta)), l1, std::abs(std::cos(beta_p)), lm1);
}

double zmn_bipartite(const BipartitePolys& B, int m, int n, Branch branch) {
  return std::exp(log_zmn_bipartite(B, m, n, branch));
}

cplx pfaffian(CMatrix A) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n) throw std::invalid_argument("pfaffian: square matrix expected");
  if (n % 2) return 0;
  cplx pf = 1;
  for (int k = 0; k + 1 < n; k += 2) {
    int piv = k + 1;
    for (int i = k + 2; i < n; ++i)
      if (std::abs(A(i, k)) > std::abs(A(piv, k))) piv = i;
    if (piv != k + 1) {
      A.row(k + 1).swap(A.row(piv));
      A.col(k + 1).swap(A.col(piv));
      pf = -pf;
    }
    if (A(k + 1, k) == cplx(0, 0)) return 0;
    pf *= A(k, k + 1);
    if (k + 2 < n) {
      const int r = n - k - 2;
      const Eigen::VectorXcd tau = A.row(k).tail(r).transpose() / A(k, k + 1);
      const Eigen::VectorXcd col = A.col(k + 1).tail(r);
      A.bottomRightCorner(r, r) += tau * col.transpose() - col * tau.transpose();
    }
  }
  return pf;
}

namespace {

// max over the four sign patterns with one odd entry of |sum eps_i v_i| / 2,
// for v_i = sign_i exp(l_i); returns the logarithm.
double one_odd_combination(const double (&sign)[4], const double (&l)[4]) {
  double top = -std::numeric_limits<double>::infinity();
  for (double x : l) top = std::max(top, x);
  if (!std::isfinite(top)) return top;
  double best = 0;
  for (int odd = 0; odd < 4; ++odd) {
    double s = 0;
    for (int i = 0; i < 4; ++i) s += (i == odd ? -1.0 : 1.0) * sign[i] * std::exp(l[i] - top);
    best = std::max(best, std::abs(s) / 2);
  }
  return top + std::log(best);
}

}  // namespace

double z_torus_pfaffian(const EmbeddedGraph& gt, const std::vector<int>& Kt) {
  if (gt.surface != Surface::torus) throw std::invalid_argument("z_torus_pfaffian: torus graph expected");
  double sign[4], l[4];
  int i = 0;
  for (double z : {1.0, -1.0})
    for (double w : {1.0, -1.0}) {
      const cplx pf = pfaffian(torus_matrix(gt, Kt, z, w));
      sign[i] = pf.real() < 0 ? -1 : 1;
      l[i] = pf == cplx(0, 0) ? -std::numeric_limits<double>::infinity() : std::log(std::abs(pf.real()));
      ++i;
    }
  return std::exp(one_odd_combination(sign, l));
}

double log_z_torus_product(const BiLaurentPoly& Q, int m, int n) {
  double sign[4], l[4];
  int i = 0;
  for (double z : {1.0, -1.0})
    for (double w : {1.0, -1.0}) {
      const LogComplex v = pmn_value(Q, m, n, z, w);
      sign[i] = std::abs(v.argument) > 1.5707963267948966 ? -1 : 1;
      l[i] = v.log_modulus;
      ++i;
    }
  return one_odd_combination(sign, l);
}

namespace {

// Dimer partition function of the m x n cover computed without product formulas.
double cover_dimers(const EmbeddedGraph& g, int m, int n) {
  const EmbeddedGraph c = build_cover(g, m, n);
  if (c.n_vertices <= 24) return z_bruteforce(c);
  return z_pfaffian(c, find_klein_orientation(c));
}

bool close(double a, double b, double rel = 1e-7) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace

Branch calibrate_branch(const EmbeddedGraph& g, const std::vector<int>& K) {
  return calibrate_branch(g, K, extract_R(g, K), extract_P_klein(g, K));
}

Branch calibrate_branch(const EmbeddedGraph& g, const std::vector<int>& K, const KleinPolys& R,
                        const BiLaurentPoly& P) {
  (void)K;
  bool ok[2] = {true, true};
  // n = 3 as well: the branches can only differ through the arguments alpha_n
  for (auto [m, n] : {std::pair{1, 1}, {3, 1}, {1, 3}, {3, 3}}) {
    const double truth = cover_dimers(g, m, n);
    for (Branch b : {Branch::standard, Branch::swapped})
      if (!close(zmn(R.R1, R.Rm1, P, m, n, b), truth)) ok[static_cast<int>(b)] = false;
  }
  if (!ok[0] && !ok[1])
    throw CalibrationError("calibrate_branch: no branch reproduces the cover partition functions "
                           "(orientation violates condition (i) or graph data inconsistent)");
  const double z21 = cover_dimers(g, 2, 1);
  if (!close(zmn(R.R1, R.Rm1, P, 2, 1), z21))
    throw CalibrationError("calibrate_branch: even-m product formula disagrees with the 2x1 cover");
  return ok[0] ? Branch::standard : Branch::swapped;
}

CMatrix lifted_cover_matrix(const EmbeddedGraph& g, const std::vector<int>& K, int m, int n, double w) {
  const EmbeddedGraph c = build_cover(g, m, n);
  const int ne = g.n_edges();
  CMatrix A = CMatrix::Zero(c.n_vertices, c.n_vertices);
  for (int k = 0; k < c.n_edges(); ++k) {
    const Edge& base = g.edges[k % ne];
    const Edge& le = c.edges[k];
    const cplx coef = static_cast<double>(K[k % ne]) * ipow(std::abs(base.a) + base.ap) * base.w *
                      (le.a != 0 ? w : 1.0);
    A(le.u, le.v) += coef;
    A(le.v, le.u) -= coef;
  }
  return A;
}

cplx twisted_det2(const EmbeddedGraph& g, const std::vector<int>& K, cplx z, cplx w) {
  using M2 = Eigen::Matrix2cd;
  const int nv = g.n_vertices;
  CMatrix A = CMatrix::Zero(2 * nv, 2 * nv);
  M2 Mab, Mb;
  Mab << 0, z, z, 0;
  Mb << w, 0, 0, 1.0 / w;
  auto mpow = [](const M2& M, int k) -> M2 {
    M2 r = M2::Identity();
    const M2 b = k >= 0 ? M : M.inverse();
    for (int j = std::abs(k); j > 0; --j) r *= b;
    return r;
  };
  for (int e = 0; e < g.n_edges(); ++e) {
    const Edge& ed = g.edges[e];
    const M2 phi = mpow(Mb, ed.a) * mpow(Mab, ed.b);
    const cplx c = static_cast<double>(K[e]) * ipow(std::abs(ed.a) + ed.ap) * ed.w;
    A.block<2, 2>(2 * ed.u, 2 * ed.v) += c * phi;
    A.block<2, 2>(2 * ed.v, 2 * ed.u) -= c * phi.inverse();
  }
  return det(A);
}

IsingModel ising_model(const EmbeddedGraph& g, const std::vector<double>& J, double beta) {
  IsingModel M;
  M.fisher = fisher_graph(g, J, beta);
  M.K = find_klein_orientation(M.fisher);
  M.fisher.orientation = M.K;
  M.R = extract_R(M.fisher, M.K);
  M.P = extract_P_klein(M.fisher, M.K);
  M.branch = calibrate_branch(M.fisher, M.K, M.R, M.P);
  for (double j : J) M.log_cosh_sum += std::log(std::cosh(beta * j));
  return M;
}

double ising_log_partition(const IsingModel& M, int m, int n) {
  return m * n * M.log_cosh_sum + log_zmn(M.R.R1, M.R.Rm1, M.P, m, n, M.branch);
}

double ising_partition(const EmbeddedGraph& g, const std::vector<double>& J, double beta, int m, int n) {
  return std::exp(ising_log_partition(ising_model(g, J, beta), m, n));
}

double ising_bruteforce(const EmbeddedGraph& g, const std::vector<double>& J, double beta) {
  const int nv = g.n_vertices;
  if (nv > 20) throw std::invalid_argument("ising_bruteforce: more than 20 spins");
  if (static_cast<int>(J.size()) != g.n_edges()) throw std::invalid_argument("ising_bruteforce: one coupling per edge");
  double z = 0;
  for (uint32_t s = 0; s < (uint32_t{1} << nv); ++s) {
    double energy = 0;
    for (int e = 0; e < g.n_edges(); ++e) {
      const int su = ((s >> g.edges[e].u) & 1) ? 1 : -1, sv = ((s >> g.edges[e].v) & 1) ? 1 : -1;
      energy += J[e] * su * sv;
    }
    z += std::exp(beta * energy);
  }
  return z;
}

double even_subgraph_sum(const EmbeddedGraph& g, const std::vector<double>& x) {
  const int ne = g.n_edges();
  if (ne > 24) throw std::invalid_argument("even_subgraph_sum: more than 24 edges");
  double s = 0;
  std::vector<int> deg(g.n_vertices);
  for (uint32_t sub = 0; sub < (uint32_t{1} << ne); ++sub) {
    std::fill(deg.begin(), deg.end(), 0);
    double p = 1;
    for (int e = 0; e < ne; ++e)
      if ((sub >> e) & 1) {
        ++deg[g.edges[e].u];
        ++deg[g.edges[e].v];
        p *= x[e];
      }
    if (std::all_of(deg.begin(), deg.end(), [](int d) { return d % 2 == 0; })) s += p;
  }
  return std::ldexp(s, g.n_vertices);
}

}  // namespace kz
