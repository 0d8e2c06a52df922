// Bulk free energy, finite-size corrections and ratios of partition functions
// for large covers.
#pragma once

#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"
#include "kleinz/exact.hpp"
#include "kleinz/spectra.hpp"

namespace kz {

struct AsymptoticReport {
  double f0 = std::numeric_limits<double>::quiet_NaN();  // per fundamental domain of the torus cover
  double fsc = std::numeric_limits<double>::quiet_NaN();
  double FSC = std::numeric_limits<double>::quiet_NaN();
  double FSC_plus = 1, FSC_minus = 1;  // FSC(1), FSC(-1)
  std::string zeros_case;    // no-zeros, two-zeros, real-node, nodes
  std::string m_parity;      // m-odd, m-even
  std::string ising_regime;  // sub, critical, super (Ising only)
  std::vector<cplx> tau;
  std::vector<double> psi;
  int A = 0, Ap = 0;
  Branch branch = Branch::standard;
  bool bipartite = false;
  int m = 0, n = 0;
  double beta = 0, beta_c = 0;  // Ising only
  std::vector<std::string> warnings;
};

nlohmann::json to_json(const AsymptoticReport& r);

// f0 = 1/2 int log P over the unit torus, as a Riemann sum on grid x grid
// points, averaged over two offset grids.
double bulk_free_energy(const BiLaurentPoly& P, int grid = 1024);
// Same integral: exact inner integral in w (Jensen's formula on the roots) and
// adaptive Gauss-Kronrod quadrature in the argument of z.
double bulk_free_energy_precise(const BiLaurentPoly& P, double tol = 1e-12);
// Bipartite case: P = |Q|^2 on the torus, so f0 = int log|Q|.  Q has simple
// roots where P has double ones, which keeps the quadrature clean.
double bulk_free_energy_from_Q(const BiLaurentPoly& Q, double tol = 1e-12);

// Warnings for aspect ratios outside [0.1, 10].
std::vector<std::string> aspect_warnings(int m, int n);

// FSC(xi) for xi = +-1 from the zeros of P (exponent 1/2 per node), or of Q
// (exponent 1/2 per simple zero, 1 per real node) when `from_Q`.
double fsc_at(const NodeReport& nodes, int m, int n, double xi, bool from_Q);

AsymptoticReport fsc_general(const NodeReport& nodes, const ModFourInvariant& mod4, int m, int n,
                             Branch branch = Branch::standard);
// `qnodes` are the zeros of Q; `mod4` from S(z,+-1).
AsymptoticReport fsc_bipartite(const NodeReport& qnodes, const ModFourInvariant& mod4, int m, int n,
                               Branch branch = Branch::standard);

struct AsymptOptions {
  int grid = 0;  // > 0: grid quadrature for f0; 0: precise quadrature
  ZeroOptions zeros;
};

// Whole pipeline for the dimer model on covers of a Klein bottle graph.
AsymptoticReport dimer_asymptotics(const EmbeddedGraph& g, int m, int n, const AsymptOptions& opt = {});

// Zero of the Pfaffian of the Fisher torus matrix at (z,w) = (-1,1), whose
// square is P(-1,1; beta).
double ising_critical_beta(const EmbeddedGraph& g, const std::vector<double>& J, double tol = 1e-12,
                           double lo = 1e-4, double hi = 10);
// Signed square root of P(-1,1; beta) used by the bisection.
double ising_node_pfaffian(const EmbeddedGraph& g, const std::vector<double>& J, double beta);

AsymptoticReport fsc_ising(const EmbeddedGraph& g, const std::vector<double>& J, double beta, int m, int n,
                           const AsymptOptions& opt = {});

// 2 mn f0 + sum_j 2 log Xi(zeta / z_j^n, xi / w_j^m | tau_j)
double ksw_logpmn(const NodeReport& nodes, double f0, int m, int n, cplx zeta, cplx xi);

enum class RatioCase {
  bipartite_no_zeros,
  bipartite_two_zeros,
  bipartite_real_node,
  square_m_even,         // M x N square lattice, M and N even
  square_m_odd,          // N even, M odd
  ising_off_critical,
  ising_critical,
};

// lim Z(Gamma_mn)^2 / Z(torus cover); `nu` is m psi for two zeros.
double ratio_limit(RatioCase c, cplx tau, double nu = 0);

// Z(Gamma_mn)^2 / Z(torus double cover of Gamma_mn), returned as a logarithm.
// Bipartite graphs use the product formula; others genuine Pfaffians (at most
// `max_vertices` vertices on the torus cover).
double log_finite_ratio(const EmbeddedGraph& g, int m, int n, int max_vertices = 1200);
double finite_ratio(const EmbeddedGraph& g, int m, int n, int max_vertices = 1200);

}  // namespace kz
