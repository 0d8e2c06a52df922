#include <cmath>
#include <numbers>

#include "doctest.h"
#include "kleinz/asympt.hpp"
#include "kleinz/lattices.hpp"
#include "kleinz/specfun.hpp"

using namespace kz;

namespace {
constexpr double kCatalan = 0.915965594177219015;
}

TEST_CASE("bulk free energy: square lattice and both quadratures") {
  const EmbeddedGraph g = load_lattice("square_1x2");
  const BiLaurentPoly P = extract_P_klein(g, find_klein_orientation(g));
  // 4 vertices per torus domain, G/pi per vertex
  const double exact = 4 * kCatalan / std::numbers::pi;
  CHECK(bulk_free_energy_precise(P) == doctest::Approx(exact).epsilon(1e-10));
  CHECK(bulk_free_energy(P, 1024) == doctest::Approx(exact).epsilon(1e-5));

  const EmbeddedGraph h = load_lattice("square_2x1");
  const BipartitePolys B = extract_bipartite(h, find_klein_orientation(h));
  CHECK(bulk_free_energy_from_Q(B.Q) == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("bulk free energy away from zeros is grid independent") {
  const EmbeddedGraph g = load_lattice("triangular");
  const BiLaurentPoly P = extract_P_klein(g, find_klein_orientation(g));
  CHECK(bulk_free_energy(P, 64) == doctest::Approx(bulk_free_energy_precise(P)).epsilon(1e-12));
  CHECK_THROWS(bulk_free_energy(P, 7));
}

TEST_CASE("triangular lattice: fsc = log 2") {
  const AsymptoticReport r = dimer_asymptotics(load_lattice("triangular"), 7, 9);
  CHECK(r.zeros_case == "no-zeros");
  CHECK(r.fsc == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("square_2x1 at tau = i: FSC = (theta00 + theta01)/eta") {
  const AsymptoticReport r = dimer_asymptotics(load_lattice("square_2x1"), 5, 5);
  REQUIRE(r.tau.size() == 1);
  CHECK(std::abs(r.tau[0] - cplx(0, 1)) < 1e-9);
  const cplx i(0, 1);
  const double expect = std::abs((theta00(0, i) + theta01(0, i)) / eta(i));
  CHECK(r.FSC == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("square lattice with N = 2: closed forms for M odd and M even") {
  const EmbeddedGraph g = load_lattice("square_1x2");
  for (int m : {3, 4}) {
    const AsymptoticReport r = dimer_asymptotics(g, m, 3);
    const cplx tau(0, m / (2.0 * 2 * 3));
    double expect;
    if (m % 2) expect = std::sqrt(std::abs(2.0 * theta01(0, 2.0 * tau) / eta(2.0 * tau)));
    else expect = std::abs(theta00(0, tau) / eta(tau));
    CAPTURE(m);
    CHECK(r.FSC == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("hexagonal: FSC = (theta00(m/3) + theta01(m/3))/eta") {
  const EmbeddedGraph g = load_lattice("hexagonal");
  for (int m : {4, 5, 6}) {
    const int n = 3;
    const AsymptoticReport r = dimer_asymptotics(g, m, n);
    const cplx tau(0, m / (n * std::sqrt(3.0)));
    const double expect = std::abs(theta00(m / 3.0, tau) / eta(tau)) + std::abs(theta01(m / 3.0, tau) / eta(tau));
    CAPTURE(m);
    CHECK(r.FSC == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("theta-function asymptotics of products over roots of unity") {
  const EmbeddedGraph g = load_lattice("square_1x2");
  const BiLaurentPoly P = extract_P_klein(g, find_klein_orientation(g));
  const NodeReport nodes = unit_torus_zeros(P);
  const double f0 = bulk_free_energy_precise(P);
  // zeta = -1 would put a root of unity on the node itself
  for (cplx zeta : {cplx(1), cplx(0, 1)})
    for (cplx xi : {cplx(1), cplx(-1)}) {
      const LogComplex v = pmn_value(P, 81, 81, zeta, xi);
      CHECK(std::abs(v.log_modulus - ksw_logpmn(nodes, f0, 81, 81, zeta, xi)) < 2e-3);
    }
}

TEST_CASE("Ising: critical point, regimes and shape") {
  const EmbeddedGraph s = load_lattice("square_ising");
  const std::vector<double> J(s.n_edges(), 1.0);
  const double bc = ising_critical_beta(s, J);
  CHECK(bc == doctest::Approx(0.5 * std::log(1 + std::sqrt(2.0))).epsilon(1e-10));
  CHECK(fsc_ising(s, J, 0.0, 5, 5).fsc == doctest::Approx(0.0));
  CHECK(fsc_ising(s, J, 3 * bc, 5, 5).fsc == doctest::Approx(std::log(2.0)));
  const AsymptoticReport c = fsc_ising(s, J, bc, 6, 5);
  CHECK(c.ising_regime == "critical");
  REQUIRE(c.tau.size() == 1);
  CHECK(std::abs(c.tau[0] - cplx(0, 0.6)) < 1e-8);
}

TEST_CASE("anisotropic Ising: sinh(2 beta J1) sinh(2 beta J2) = 1 at criticality") {
  const EmbeddedGraph s = load_lattice("square_ising");
  const std::vector<double> J{1.0, 0.5};
  const double bc = ising_critical_beta(s, J);
  CHECK(std::sinh(2 * bc) * std::sinh(bc) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("ratio limits") {
  const cplx tau(0, 0.8);
  CHECK(ratio_limit(RatioCase::bipartite_no_zeros, tau) == 1);
  CHECK(ratio_limit(RatioCase::square_m_odd, tau) == 2);
  // large tau: theta10 -> 0, theta00, theta01 -> 1
  CHECK(ratio_limit(RatioCase::square_m_even, cplx(0, 40)) == doctest::Approx(1.0));
  CHECK(ratio_limit(RatioCase::bipartite_real_node, cplx(0, 40)) == doctest::Approx(4.0));
  CHECK(ratio_limit(RatioCase::ising_critical, cplx(0, 40)) == doctest::Approx(1.5 + std::sqrt(0.5)));
}

TEST_CASE("finite ratio of the M x N square lattice with N even, M odd is 2") {
  for (auto [M, N] : std::vector<std::pair<int, int>>{{1, 2}, {3, 2}, {1, 4}})
    CHECK(finite_ratio(square_grid(M, N, 1.4, 0.6), 1, 1) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(finite_ratio(square_grid(1, 2), 3, 3) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("aspect ratio guard") {
  CHECK(aspect_warnings(5, 5).empty());
  CHECK(aspect_warnings(30, 1).size() == 1);
  CHECK(aspect_warnings(1, 31).size() == 1);
}
