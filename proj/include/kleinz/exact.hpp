// Exact partition functions: Pfaffian formula, product formulas over roots of
// unity for covers, Ising via the Fisher graph, and enumeration oracles.
#pragma once

#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kleinz/graph.hpp"
#include "kleinz/orient.hpp"
#include "kleinz/poly.hpp"

namespace kz {

// Complex number stored as (log|x|, arg x); zero has log_modulus = -inf.
struct LogComplex {
  double log_modulus = 0;
  double argument = 0;  // in (-pi, pi]

  static LogComplex from(cplx z);
  static LogComplex zero();
  bool is_zero() const;
  LogComplex operator*(const LogComplex& o) const;
  LogComplex& operator*=(const LogComplex& o);
  LogComplex conj() const;
  // Refuses (throws std::overflow_error) when |log_modulus| would overflow a double.
  cplx to_complex() const;
};

double wrap_angle(double a);

// Worker threads for product accumulation (KLEINZ_THREADS, else hardware).
int thread_count();

enum class Branch { standard, swapped };
const char* to_string(Branch b);

// |Im sqrt R(1,1)| + |Re sqrt R(1,-1)|.  K must satisfy conditions (i) and (ii).
double z_pfaffian(const EmbeddedGraph& g, const std::vector<int>& K);

// Sum over perfect matchings; at most 32 vertices.
double z_bruteforce(const EmbeddedGraph& g);

// R_mn(1,1), R_mn(1,-1) of the m x n cover from the base polynomials (n odd).
std::pair<LogComplex, LogComplex> rmn_product(const LaurentPoly& R1, const LaurentPoly& Rm1,
                                              const BiLaurentPoly& P, int m, int n);

// prod_{z^n = zeta} prod_{w^m = xi} P(z,w)
LogComplex pmn_value(const BiLaurentPoly& P, int m, int n, cplx zeta = 1.0, cplx xi = 1.0);

// prod_{z^n=1} p(z) accumulated in log form.
LogComplex root_product(const LaurentPoly& p, int n);

double zmn(const LaurentPoly& R1, const LaurentPoly& Rm1, const BiLaurentPoly& P, int m, int n,
           Branch branch = Branch::standard);
// log Z_mn; stays finite where Z_mn overflows a double.
double log_zmn(const LaurentPoly& R1, const LaurentPoly& Rm1, const BiLaurentPoly& P, int m, int n,
               Branch branch = Branch::standard);

// Bipartite form of zmn through S and Q (n odd).
double zmn_bipartite(const BipartitePolys& B, int m, int n, Branch branch = Branch::standard);
double log_zmn_bipartite(const BipartitePolys& B, int m, int n, Branch branch = Branch::standard);

// Pfaffian of a skew-symmetric matrix (Parlett-Reid elimination with pivoting).
cplx pfaffian(CMatrix A);

// Dimer partition function of a torus graph from the four Pfaffians at
// (z,w) = (+-1,+-1).  The four signs of a Kasteleyn orientation form a
// pattern with exactly one odd entry; the right one gives the largest value.
double z_torus_pfaffian(const EmbeddedGraph& gt, const std::vector<int>& Kt);
// Same for the m x n torus cover of a bipartite torus graph with polynomial Q,
// from the signed products Q_mn(+-1,+-1); returns the logarithm.
double log_z_torus_product(const BiLaurentPoly& Q, int m, int n);

struct CalibrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Picks the branch for which zmn matches the dimer count on the (1,1), (3,1),
// (1,3) and (3,3) covers; also checks the (2,1) cover, where the branch must not
// matter.  Ties (both branches always agree) resolve to standard.
Branch calibrate_branch(const EmbeddedGraph& g, const std::vector<int>& K);
Branch calibrate_branch(const EmbeddedGraph& g, const std::vector<int>& K, const KleinPolys& R,
                        const BiLaurentPoly& P);

// Kasteleyn matrix of the m x n cover built with the lifted orientation and
// lifted cocycle; its determinant is R_mn(1,w) for w = +-1.
CMatrix lifted_cover_matrix(const EmbeddedGraph& g, const std::vector<int>& K, int m, int n, double w);

// Determinant of the 2|V| matrix twisted by the 2-dimensional representation
// a -> [[0,z],[z,0]], b -> diag(w,1/w); equals P(z^2,w).
cplx twisted_det2(const EmbeddedGraph& g, const std::vector<int>& K, cplx z, cplx w);

// Everything needed to evaluate Ising partition functions on covers of g.
struct IsingModel {
  EmbeddedGraph fisher;
  std::vector<int> K;
  KleinPolys R;
  BiLaurentPoly P;
  Branch branch = Branch::standard;
  double log_cosh_sum = 0;  // sum_e log cosh(beta J_e) on the base graph
};

IsingModel ising_model(const EmbeddedGraph& g, const std::vector<double>& J, double beta);
// log Z of the Ising model on the m x n cover (n odd).
double ising_log_partition(const IsingModel& model, int m, int n);
double ising_partition(const EmbeddedGraph& g, const std::vector<double>& J, double beta, int m, int n);
// Direct sum over spins; at most 20 vertices.
double ising_bruteforce(const EmbeddedGraph& g, const std::vector<double>& J, double beta);
// 2^|V| * sum over even subgraphs of prod x_e; at most 24 edges.
double even_subgraph_sum(const EmbeddedGraph& g, const std::vector<double>& x);

}  // namespace kz
