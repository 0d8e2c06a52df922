// Roots of one-variable polynomials, zeros of characteristic polynomials on
// the unit torus, shape parameters tau and the mod 4 invariants A, A'.
#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "kleinz/poly.hpp"

namespace kz {

struct RootError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A zero of a characteristic polynomial off z = -1, or a unit-circle root of
// R(z,+-1) other than +-i: outside the hypotheses of the asymptotic results.
struct ConjectureViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RootOptions {
  double tol = 1e-10;          // residual / unit-circle snapping
  double cluster = 1e-5;       // roots closer than this (relative) are one multiple root
  double snap_imag_unit = 1e-8;
  int max_iter = 2000;
};

struct Root {
  cplx z;
  int multiplicity = 1;
};

struct RootSet {
  std::vector<Root> roots;
  int degree = 0;              // hi - lo of the Laurent polynomial
  double max_residual = 0;     // relative residual |p(z)| / sum |c_k||z|^k
  double tol = 0;
  int count() const;
};

RootSet roots(const LaurentPoly& p, const RootOptions& opt = {});

struct Mod4Components {
  int lambda = 0, p = 0, r_minus = 0, r_plus = 0, m_minus = 0, m_plus = 0;
  int A = 0;  // lambda + 2p + r_minus - r_plus + (m_minus - m_plus)/2 mod 4
};

struct ModFourInvariant {
  int A = 0, Ap = 0;
  Mod4Components c1, cm1;  // from R(z,1) and R(z,-1)
};

Mod4Components mod4_components(const LaurentPoly& R, const RootOptions& opt = {});
ModFourInvariant mod4_invariants(const LaurentPoly& R1, const LaurentPoly& Rm1, const RootOptions& opt = {});
// Bipartite variant from S(z,+-1): A = lambda + r with r the number of roots outside the unit disc.
ModFourInvariant mod4_invariants_bipartite(const LaurentPoly& S1, const LaurentPoly& Sm1,
                                           const RootOptions& opt = {});

// Prediction for Arg prod_{z^n=1} R(z) given its components (n odd).
double predicted_root_product_arg(const Mod4Components& c, int n);

enum class ZeroType { simple_pair, real_node };
const char* to_string(ZeroType t);

struct TorusZero {
  cplx z0, w0;
  ZeroType type = ZeroType::real_node;
  double psi = 0;    // w0 = exp(2 pi i psi), psi in (-1/2, 1/2]
  int order = 2;     // 1: simple zero (first derivatives), 2: node (second derivatives)
  cplx dz, dw;       // first derivatives F_z, F_w at the zero
  cplx dzz, dww, dzw;
  double Az = 0, Aw = 0, B = 0, D = 0;  // quadratic form in angle coordinates (order 2)
  cplx tau_unit;     // tau for m/n = 1
};

struct NodeReport {
  std::vector<TorusZero> zeros;
  std::string kind;  // none, two-zeros, real-node, nodes
  double scale = 0;  // sum |coefficients|
  double tol = 0;
};

struct ZeroOptions {
  double tol = 1e-9;  // |F(z0,w0)| < tol * scale
  int grid = 64;      // safety-net scan of the whole torus; 0 disables
  RootOptions roots;
};

// Zeros of F on the unit torus.  F is P (nonnegative there) or, for bipartite
// graphs, Q.  Throws ConjectureViolation for zeros with z0 != -1 and
// std::runtime_error for degenerate quadratic forms.
NodeReport unit_torus_zeros(const BiLaurentPoly& F, const ZeroOptions& opt = {});

// Shape parameter of one zero for the m x n cover.
cplx tau(const TorusZero& zero, int m, int n);

// Roots of S(z,1) and S(z,-1) purely imaginary, simple and alternating.
bool interlacing_check(const LaurentPoly& S1, const LaurentPoly& Sm1, double tol = 1e-8);

nlohmann::json to_json(const RootSet& r);
nlohmann::json to_json(const ModFourInvariant& m);
nlohmann::json to_json(const NodeReport& r);

}  // namespace kz
