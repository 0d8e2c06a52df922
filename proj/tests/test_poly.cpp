#include <random>

#include "doctest.h"
#include "kleinz/io.hpp"
#include "kleinz/exact.hpp"
#include "kleinz/lattices.hpp"
#include "kleinz/poly.hpp"

using namespace kz;

TEST_CASE("identity suite passes on every bundled lattice") {
  for (const auto& name : lattice_names()) {
    CAPTURE(name);
    const EmbeddedGraph g = load_lattice(name);
    const std::vector<int> K = find_klein_orientation(g);
    const KleinPolys R = extract_R(g, K);
    const BiLaurentPoly P = extract_P_klein(g, K);
    std::optional<BipartitePolys> B;
    if (!g.colors.empty()) B = extract_bipartite(g, K);
    const IdentityReport rep = poly_identity_suite(g, K, R, P, B ? &*B : nullptr);
    for (const auto& c : rep.checks) {
      CAPTURE(c.name);
      CHECK(c.ok);
    }
  }
}

TEST_CASE("triangular R(z,1) and R(z,-1)") {
  const EmbeddedGraph g = load_lattice("triangular");
  const KleinPolys R = extract_R(g, find_klein_orientation(g));
  // 2(z^2 + z^-2) +- 4i(z + z^-1) - 4 and the constant 4, up to an overall sign
  const double s = R.Rm1.coeff(0).real() > 0 ? 1 : -1;
  CHECK(std::abs(R.Rm1.coeff(0) - s * 4.0) < 1e-9);
  CHECK(std::abs(R.R1.coeff(2) - s * 2.0) < 1e-9);
  CHECK(std::abs(R.R1.coeff(-2) - s * 2.0) < 1e-9);
  CHECK(std::abs(R.R1.coeff(1).real()) < 1e-9);
  CHECK(std::abs(std::abs(R.R1.coeff(1).imag()) - 4) < 1e-9);
  CHECK(std::abs(R.R1.coeff(1) - R.R1.coeff(-1)) < 1e-9);
  CHECK(std::abs(R.R1.coeff(0) + s * 4.0) < 1e-9);
}

TEST_CASE("square_2x1 Q = x^2(z + 1/z + 2) + y^2(w + 1/w + 2)") {
  EmbeddedGraph g = load_lattice("square_2x1");
  const double x = 1.3, y = 0.8;
  set_weights(g, {{"x1", x}, {"x2", x}, {"y1", y}, {"y2", y}});
  const BipartitePolys B = extract_bipartite(g, find_klein_orientation(g));
  const double s = B.Q.coeff(1, 0) > 0 ? 1 : -1;
  CHECK(s * B.Q.coeff(1, 0) == doctest::Approx(x * x));
  CHECK(s * B.Q.coeff(0, 1) == doctest::Approx(y * y));
  CHECK(s * B.Q.coeff(0, 0) == doctest::Approx(2 * x * x + 2 * y * y));
}

TEST_CASE("P = |Q|^2 on the unit torus for bipartite lattices") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> U(0, 6.283185307179586);
  for (const char* name : {"square_2x1", "hexagonal"}) {
    const EmbeddedGraph g = load_lattice(name);
    const std::vector<int> K = find_klein_orientation(g);
    const BiLaurentPoly P = extract_P_klein(g, K);
    const BipartitePolys B = extract_bipartite(g, K);
    for (int k = 0; k < 8; ++k) {
      const cplx z = std::polar(1.0, U(rng)), w = std::polar(1.0, U(rng));
      CHECK(P(z, w).real() == doctest::Approx(std::norm(B.Q(z, w))).epsilon(1e-10));
    }
  }
}

TEST_CASE("twisted determinant equals P(z^2, w)") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(0, 6.283185307179586);
  for (const auto& name : lattice_names()) {
    const EmbeddedGraph g = load_lattice(name);
    const std::vector<int> K = find_klein_orientation(g);
    const BiLaurentPoly P = extract_P_klein(g, K);
    for (int k = 0; k < 4; ++k) {
      const cplx z = std::polar(1.0, U(rng)), w = std::polar(1.0, U(rng));
      CHECK(std::abs(twisted_det2(g, K, z, w) - P(z * z, w)) < 1e-9 * P.max_abs());
    }
  }
}

TEST_CASE("Laurent polynomial arithmetic") {
  LaurentPoly p{-1, {1.0, 2.0, 3.0}};  // z^-1 + 2 + 3z
  CHECK(p.hi() == 1);
  CHECK(std::abs(p(2.0) - cplx(0.5 + 2 + 6)) < 1e-14);
  CHECK(std::abs(p.derivative(2.0) - cplx(-0.25 + 3)) < 1e-14);
  const LaurentPoly q = p * p.reversed();
  CHECK(q.lo == -2);
  CHECK(std::abs(q(cplx(0.3, 0.4)) - p(cplx(0.3, 0.4)) * p(1.0 / cplx(0.3, 0.4))) < 1e-12);
}
