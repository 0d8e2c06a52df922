#include <cmath>
#include <random>

#include "doctest.h"
#include "kleinz/io.hpp"
#include "kleinz/exact.hpp"
#include "kleinz/lattices.hpp"

using namespace kz;

TEST_CASE("Z = 10 on the 2 x 1 cover of the square lattice") {
  const EmbeddedGraph g = load_lattice("square_2x1");
  const std::vector<int> K = find_klein_orientation(g);
  const KleinPolys R = extract_R(g, K);
  const BiLaurentPoly P = extract_P_klein(g, K);
  CHECK(zmn(R.R1, R.Rm1, P, 2, 1, calibrate_branch(g, K, R, P)) == doctest::Approx(10).epsilon(1e-12));
  CHECK(z_bruteforce(build_cover(g, 2, 1)) == 10);
}

TEST_CASE("weighted Z on the 2 x 1 cover: 4x^2 + 4xy + 2y^2") {
  EmbeddedGraph g = load_lattice("square_2x1");
  const double x = 1.7, y = 0.6;
  set_weights(g, {{"x1", x}, {"x2", x}, {"y1", y}, {"y2", y}});
  CHECK(z_bruteforce(build_cover(g, 2, 1)) == doctest::Approx(4 * x * x + 4 * x * y + 2 * y * y));
}

TEST_CASE("log_zmn agrees with zmn and with the bipartite form") {
  for (const char* name : {"square_2x1", "hexagonal"}) {
    const EmbeddedGraph g = load_lattice(name);
    const std::vector<int> K = find_klein_orientation(g);
    const KleinPolys R = extract_R(g, K);
    const BiLaurentPoly P = extract_P_klein(g, K);
    const BipartitePolys B = extract_bipartite(g, K);
    const Branch br = calibrate_branch(g, K, R, P);
    for (int m : {1, 2, 3, 4, 7})
      for (int n : {1, 3, 5}) {
        CAPTURE(name);
        CAPTURE(m);
        CAPTURE(n);
        const double a = log_zmn(R.R1, R.Rm1, P, m, n, br);
        CHECK(std::exp(a) == doctest::Approx(zmn(R.R1, R.Rm1, P, m, n, br)).epsilon(1e-10));
        CHECK(log_zmn_bipartite(B, m, n, br) == doctest::Approx(a).epsilon(1e-11));
      }
  }
}

TEST_CASE("Pfaffian squares to the determinant") {
  std::mt19937 rng(3);
  std::normal_distribution<double> N01;
  for (int n : {2, 4, 6, 10}) {
    CMatrix A = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        A(i, j) = cplx(N01(rng), N01(rng));
        A(j, i) = -A(i, j);
      }
    const cplx p = pfaffian(A);
    CHECK(std::abs(p * p - det(A)) < 1e-10 * std::max(1.0, std::abs(det(A))));
  }
}

TEST_CASE("torus Pfaffians and products count matchings of the torus cover") {
  const EmbeddedGraph g = load_lattice("hexagonal");
  const std::vector<int> K = find_klein_orientation(g);
  const BipartitePolys B = extract_bipartite(g, K);
  for (auto [m, n] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {3, 1}, {2, 3}}) {
    EmbeddedGraph gk = g;
    gk.orientation = K;
    const EmbeddedGraph gt = orientation_cover(build_cover(gk, m, n));
    const double zb = z_bruteforce(gt);
    CHECK(z_torus_pfaffian(gt, find_orientation(gt)) == doctest::Approx(zb).epsilon(1e-10));
    CHECK(std::exp(log_z_torus_product(B.Q, m, n)) == doctest::Approx(zb).epsilon(1e-10));
  }
}

TEST_CASE("Ising partition function matches the spin sum") {
  const EmbeddedGraph s = load_lattice("square_ising");
  const std::vector<double> J{1.0, 0.7};
  for (double beta : {0.1, 0.44, 0.9})
    for (auto [m, n] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {3, 3}, {4, 3}}) {
      const EmbeddedGraph c = build_cover(s, m, n);
      std::vector<double> Jc(c.n_edges());
      for (int e = 0; e < c.n_edges(); ++e) Jc[e] = J[e % s.n_edges()];
      CAPTURE(beta);
      CAPTURE(m);
      CAPTURE(n);
      CHECK(ising_partition(s, J, beta, m, n) == doctest::Approx(ising_bruteforce(c, Jc, beta)).epsilon(1e-10));
    }
}

TEST_CASE("LogComplex refuses to overflow") {
  LogComplex big;
  big.log_modulus = 1e4;
  CHECK_THROWS_AS(big.to_complex(), std::overflow_error);
  CHECK(LogComplex::zero().is_zero());
}
