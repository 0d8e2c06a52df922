#include <cmath>
#include <numbers>

#include "doctest.h"
#include "kleinz/io.hpp"
#include "kleinz/exact.hpp"
#include "kleinz/lattices.hpp"
#include "kleinz/spectra.hpp"

using namespace kz;

namespace {
LaurentPoly from_roots(const std::vector<cplx>& rs, cplx lead = 1.0) {
  LaurentPoly p{0, {lead}};
  for (const cplx& r : rs) p = p * LaurentPoly{0, {-r, 1.0}};
  return p;
}
}  // namespace

TEST_CASE("roots of a product of linear factors") {
  const std::vector<cplx> rs{{2, 1}, {-0.3, 0.1}, {0, 1}, {0, -1}, {1.5, 0}};
  const RootSet got = roots(from_roots(rs, 2.5));
  REQUIRE(got.count() == 5);
  for (const cplx& r : rs) {
    double best = 1;
    for (const Root& g : got.roots) best = std::min(best, std::abs(g.z - r));
    CHECK(best < 1e-12);
  }
}

TEST_CASE("double roots are clustered and polished") {
  const RootSet got = roots(from_roots({{0.7, 0.2}, {0.7, 0.2}, {-2, 0}}));
  REQUIRE(got.roots.size() == 2);
  for (const Root& r : got.roots) {
    if (r.multiplicity == 2) CHECK(std::abs(r.z - cplx(0.7, 0.2)) < 1e-12);
    else CHECK(std::abs(r.z + 2.0) < 1e-12);
  }
}

TEST_CASE("Laurent offset does not change the roots") {
  LaurentPoly p = from_roots({{3, 0}, {0, 0.5}});
  p.lo = -4;
  CHECK(roots(p).count() == 2);
}

TEST_CASE("mod-4 invariants of the bundled lattices") {
  auto inv = [](const char* name) {
    const EmbeddedGraph g = load_lattice(name);
    const KleinPolys R = extract_R(g, find_klein_orientation(g));
    return mod4_invariants(R.R1, R.Rm1);
  };
  const ModFourInvariant t = inv("triangular");
  CHECK(t.A == 2);
  CHECK(t.Ap == 0);
  const ModFourInvariant s = inv("square_1x2");
  CHECK(s.A == 1);
  CHECK(s.Ap == 1);
}

TEST_CASE("root product argument approaches the mod-4 prediction") {
  for (const auto& name : lattice_names()) {
    const EmbeddedGraph g = load_lattice(name);
    const KleinPolys R = extract_R(g, find_klein_orientation(g));
    for (const LaurentPoly* p : {&R.R1, &R.Rm1}) {
      const Mod4Components c = mod4_components(*p);
      for (int n : {101, 103}) {
        const LogComplex v = root_product(*p, n);
        if (v.is_zero()) continue;
        CAPTURE(name);
        CAPTURE(n);
        CHECK(std::abs(wrap_angle(v.argument - predicted_root_product_arg(c, n))) < 1e-3);
      }
    }
  }
}

TEST_CASE("torus zeros: square lattice nodes and hexagonal zeros") {
  {
    const EmbeddedGraph g = load_lattice("square_1x2");
    const NodeReport r = unit_torus_zeros(extract_P_klein(g, find_klein_orientation(g)));
    REQUIRE(r.zeros.size() == 2);
    for (const TorusZero& z : r.zeros) {
      CHECK(std::abs(z.z0 + 1.0) < 1e-9);
      CHECK(std::abs(std::abs(z.w0.real()) - 1) < 1e-9);
      CHECK(std::abs(z.tau_unit - cplx(0, 0.25)) < 1e-8);
    }
  }
  {
    const EmbeddedGraph g = load_lattice("hexagonal");
    const BipartitePolys B = extract_bipartite(g, find_klein_orientation(g));
    const NodeReport r = unit_torus_zeros(B.Q);
    CHECK(r.kind == "two-zeros");
    REQUIRE(r.zeros.size() == 2);
    for (const TorusZero& z : r.zeros) {
      CHECK(std::abs(std::abs(z.psi) - 1.0 / 3) < 1e-10);
      CHECK(std::abs(z.tau_unit - cplx(0, 1 / std::sqrt(3.0))) < 1e-8);
    }
    CHECK(interlacing_check(B.S1, B.Sm1));
  }
  {
    const EmbeddedGraph g = load_lattice("triangular");
    CHECK(unit_torus_zeros(extract_P_klein(g, find_klein_orientation(g))).zeros.empty());
  }
}

TEST_CASE("hexagonal tau follows the closed form for anisotropic weights") {
  EmbeddedGraph g = load_lattice("hexagonal");
  const double n1 = 1.0, n2 = 1.2, n3 = 0.8;
  set_weights(g, {{"n1", n1}, {"n2", n2}, {"n3", n3}});
  const BipartitePolys B = extract_bipartite(g, find_klein_orientation(g));
  const NodeReport r = unit_torus_zeros(B.Q);
  REQUIRE(r.zeros.size() == 2);
  // n1^2 + n3^2 + n1 n3 (w0 + 1/w0) = n2^2 and tau = i n2^2 / (n1 n3 |1 - w0^2|)
  const double c = (n2 * n2 - n1 * n1 - n3 * n3) / (2 * n1 * n3);
  const cplx w0 = std::polar(1.0, std::acos(c));
  CHECK(std::abs(r.zeros[0].w0.real() - c) < 1e-9);
  CHECK(r.zeros[0].tau_unit.imag() == doctest::Approx(n2 * n2 / (n1 * n3 * std::abs(1.0 - w0 * w0))).epsilon(1e-8));
}
