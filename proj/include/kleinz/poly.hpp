// Laurent polynomials and characteristic polynomials extracted from determinants.
#pragma once

#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kleinz/graph.hpp"
#include "json.hpp"

namespace kz {

using cplx = std::complex<double>;

// Sum_k c[k] z^(lo+k).
struct LaurentPoly {
  int lo = 0;
  std::vector<cplx> c;

  int hi() const { return lo + static_cast<int>(c.size()) - 1; }
  bool zero() const { return c.empty(); }
  cplx coeff(int k) const;
  cplx operator()(cplx z) const;
  // d^k/dz^k evaluated at z
  cplx derivative(cplx z, int k = 1) const;
  // Drop leading/trailing coefficients below rel * max|c|.
  void trim(double rel = 1e-12);
  LaurentPoly operator*(const LaurentPoly& o) const;
  LaurentPoly scaled(cplx s) const;
  // p(1/z)
  LaurentPoly reversed() const;
  std::string str(int digits = 6) const;
};

// Sum a_ij z^i w^j with real coefficients.
struct BiLaurentPoly {
  std::map<std::pair<int, int>, double> a;

  double coeff(int i, int j) const;
  cplx operator()(cplx z, cplx w) const;
  // d^p/dz^p d^q/dw^q evaluated at (z,w)
  cplx derivative(cplx z, cplx w, int p, int q) const;
  // Polynomial in w for fixed z: sum_j (sum_i a_ij z^i) w^j.
  LaurentPoly in_w(cplx z) const;
  LaurentPoly in_z(cplx w) const;
  void trim(double rel = 1e-12);
  double max_abs() const;
  BiLaurentPoly scaled(double s) const;
  // Newton polygon area (shoelace on the convex hull of the support).
  double newton_area() const;
  std::string str(int digits = 6) const;
};

nlohmann::json to_json(const LaurentPoly& p);
nlohmann::json to_json(const BiLaurentPoly& p);

struct KleinPolys {
  LaurentPoly R1, Rm1;  // R(z,1), R(z,-1)
};

struct BipartitePolys {
  LaurentPoly S1, Sm1;  // S(z,1), S(z,-1)
  BiLaurentPoly Q;
};

// Thrown when interpolation does not reproduce direct evaluation.
struct InterpolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

KleinPolys extract_R(const EmbeddedGraph& g, const std::vector<int>& K);
// P from the orientation cover (torus graph with its orientation).
BiLaurentPoly extract_P(const EmbeddedGraph& gt, const std::vector<int>& Kt);
// P of a Klein graph: builds the orientation cover and lifts K.
BiLaurentPoly extract_P_klein(const EmbeddedGraph& g, const std::vector<int>& K);
// S and Q normalized so that R(z,w) = S(z,w) S(1/z,w) and, up to one global
// sign, Q(z,w) = S(z^1/2,w) S(-z^1/2,w) for w = +-1.  The first fixes S only
// up to a phase; S(-z,w) = conj S(z,w) may then hold only up to sign.
BipartitePolys extract_bipartite(const EmbeddedGraph& g, const std::vector<int>& K);

struct IdentityCheck {
  std::string name;
  double err = 0;
  bool ok = false;
};

struct IdentityReport {
  std::vector<IdentityCheck> checks;
  bool ok() const;
};

// Relations between R, P (and S, Q when bipartite) at random unit points.
IdentityReport poly_identity_suite(const EmbeddedGraph& g, const std::vector<int>& K,
                                   const KleinPolys& R, const BiLaurentPoly& P,
                                   const BipartitePolys* bip = nullptr, unsigned seed = 1,
                                   double tol = 1e-9);

}  // namespace kz
