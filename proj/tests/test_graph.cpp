#include <filesystem>

#include "doctest.h"
#include "kleinz/graph.hpp"
#include "kleinz/io.hpp"
#include "kleinz/lattices.hpp"

using namespace kz;

TEST_CASE("bundled lattices are valid and have Euler characteristic 0") {
  for (const auto& name : lattice_names()) {
    CAPTURE(name);
    const EmbeddedGraph g = load_lattice(name);
    CHECK(validate(g).ok());
    CHECK(euler_characteristic(g) == 0);
    CHECK(euler_characteristic(orientation_cover(g)) == 0);
  }
  const EmbeddedGraph s = load_lattice("square_ising");
  CHECK(validate(s, {.allow_odd_vertices = true}).ok());
  CHECK_FALSE(validate(s).ok());
}

TEST_CASE("JSON round trip") {
  const auto path = std::filesystem::temp_directory_path() / "kleinz_roundtrip.json";
  for (const auto& name : lattice_names()) {
    const EmbeddedGraph g = load_lattice(name);
    save_graph(g, path.string());
    const EmbeddedGraph h = load_graph(path.string());
    CHECK(graph_to_json(g) == graph_to_json(h));
  }
  std::filesystem::remove(path);
}

TEST_CASE("parity violations are named") {
  EmbeddedGraph g = load_lattice("square_2x1");
  g.edges[0].ap = 1 - g.edges[0].ap;
  const ValidationReport r = validate(g);
  REQUIRE_FALSE(r.ok());
  CHECK(r.issues[0].find("parity") != std::string::npos);
}

TEST_CASE("unknown weight labels are rejected") {
  EmbeddedGraph g = load_lattice("hexagonal");
  CHECK_THROWS(set_weights(g, {{"nope", 1.0}}));
  set_weights(g, {{"n2", 2.5}});
  CHECK(g.edges[2].w == 2.5);
}

TEST_CASE("covers have the right size and stay valid") {
  const EmbeddedGraph g = load_lattice("triangular");
  for (int m : {1, 2, 3})
    for (int n : {1, 3}) {
      const EmbeddedGraph c = build_cover(g, m, n);
      CHECK(c.n_vertices == m * n * g.n_vertices);
      CHECK(c.n_edges() == m * n * g.n_edges());
      CHECK(validate(c).ok());
      CHECK(euler_characteristic(c) == 0);
    }
  CHECK_THROWS(build_cover(g, 1, 2));
}

TEST_CASE("square_grid generator") {
  for (auto [M, N] : std::vector<std::pair<int, int>>{{1, 2}, {2, 3}, {3, 4}, {4, 1}}) {
    if (N < 2) {
      CHECK_THROWS(square_grid(M, N));
      continue;
    }
    const EmbeddedGraph g = square_grid(M, N);
    CHECK(g.n_vertices == M * N);
    CHECK(validate(g).ok());
    CHECK(euler_characteristic(g) == 0);
    CHECK(g.colors.empty() == !(M % 2 == 0 && N % 2 == 1));
  }
}

TEST_CASE("Fisher graph has three vertices per unit of degree") {
  const EmbeddedGraph s = load_lattice("square_ising");
  const EmbeddedGraph f = fisher_graph(s, {1.0, 1.0}, 0.3);
  CHECK(validate(f).ok());
  CHECK(f.n_vertices % 2 == 0);
  CHECK(euler_characteristic(f) == 0);
}
