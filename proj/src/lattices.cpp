#include "kleinz/lattices.hpp"

#include <cstdlib>
#include <filesystem>
#include <stdexcept>

#include "kleinz/io.hpp"

namespace kz {

std::vector<std::string> lattice_names() {
  return {"square_2x1", "square_1x2", "hexagonal", "triangular"};
}

std::string lattice_path(const std::string& name) {
  const char* env = std::getenv("KLEINZ_DATA_DIR");
  const std::string dir = env ? env : KLEINZ_DATA_DIR;
  return dir + "/lattices/" + name + ".json";
}

EmbeddedGraph load_lattice(const std::string& name) {
  if (std::filesystem::exists(name)) return load_graph(name);
  return load_graph(lattice_path(name));
}

EmbeddedGraph square_grid(int M, int N, double x, double y) {
  if (M < 1 || N < 2) throw std::invalid_argument("square_grid: need M >= 1 and N >= 2");
  EmbeddedGraph g;
  g.name = "square_grid_" + std::to_string(M) + "x" + std::to_string(N);
  g.surface = Surface::klein;
  g.n_vertices = M * N;
  auto id = [&](int r, int c) { return r * N + c; };
  // a' runs just above the middle row when M is odd
  auto up = [&](int r) { return 2 * r > M - 1 ? 1 : 0; };
  g.upper.resize(g.n_vertices);
  for (int r = 0; r < M; ++r)
    for (int c = 0; c < N; ++c) g.upper[id(r, c)] = up(r);
  if (M % 2 == 0 && N % 2 == 1) {
    g.colors.resize(g.n_vertices);
    for (int r = 0; r < M; ++r)
      for (int c = 0; c < N; ++c) g.colors[id(r, c)] = (r + c) % 2;
  }
  std::vector<int> east(g.n_vertices), west(g.n_vertices), north(g.n_vertices), south(g.n_vertices);
  auto add = [&](int u, int v, double w, int a, int ap, int b, const char* label) {
    g.edges.push_back({u, v, w, a, ap, b, label});
    return static_cast<int>(g.edges.size()) - 1;
  };
  for (int r = 0; r < M; ++r)
    for (int c = 0; c < N; ++c) {
      int e;
      if (c + 1 < N) {
        e = add(id(r, c), id(r, c + 1), x, 0, 0, 0, "x");
        west[id(r, c + 1)] = end_id(e, true);
      } else {
        // through the flipped side: row r comes back as row M-1-r
        const int r2 = M - 1 - r;
        e = add(id(r, c), id(r2, 0), x, 0, r2 == r ? 1 : 0, 1, "x");
        west[id(r2, 0)] = end_id(e, true);
      }
      east[id(r, c)] = end_id(e, false);
      if (r + 1 < M) {
        e = add(id(r, c), id(r + 1, c), y, 0, up(r) != up(r + 1) ? 1 : 0, 0, "y");
        south[id(r + 1, c)] = end_id(e, true);
      } else {
        e = add(id(r, c), id(0, c), y, 1, M == 1 ? 1 : 0, 0, "y");
        south[id(0, c)] = end_id(e, true);
      }
      north[id(r, c)] = end_id(e, false);
    }
  g.rotation.resize(g.n_vertices);
  for (int v = 0; v < g.n_vertices; ++v) g.rotation[v] = {east[v], north[v], west[v], south[v]};
  return g;
}

}  // namespace kz
