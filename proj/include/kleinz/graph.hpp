// Weighted graphs drawn in a fundamental domain of the Klein bottle or torus.
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace kz {

enum class Surface { klein, torus };

// Crossing data for the edge traversed u -> v.
//
// Klein: the domain is [0,1]^2, horizontal sides glued by translation (curve a),
// vertical sides glued with a flip (1,y) ~ (0,1-y) (curve b), and a' is the
// horizontal midline.  `a` is the signed vertical displacement (in copies of
// the domain) of v relative to u, as seen from an unflipped copy of u; |a| is
// the intersection number with a.  An edge crossing both a' and a meets a'
// first.
//
// Torus: `a` and `b` are the algebraic intersection numbers with the
// horizontal and vertical sides; `ap` is unused.
struct Edge {
  int u = 0, v = 0;
  double w = 1.0;
  int a = 0, ap = 0, b = 0;
  std::string label;  // optional weight name, e.g. "x1"
};

struct Curves {
  std::vector<int> C, Cp;
};

// Edge-end ids: 2e is the end of edge e at e.u, 2e+1 the end at e.v.
inline int end_id(int e, bool at_v) { return 2 * e + (at_v ? 1 : 0); }
inline int end_edge(int h) { return h >> 1; }

struct EmbeddedGraph {
  std::string name;
  Surface surface = Surface::klein;
  int n_vertices = 0;
  std::vector<int> colors;   // empty or 0/1 per vertex
  std::vector<int> upper;    // klein only: 1 if the vertex lies above a'
  std::vector<Edge> edges;
  std::vector<std::vector<int>> rotation;  // ccw edge-ends per vertex
  std::vector<int> orientation;            // +1 means u -> v
  std::optional<Curves> curves;

  int n_edges() const { return static_cast<int>(edges.size()); }
  bool has_rotation() const { return !rotation.empty(); }
  bool is_upper(int v) const { return !upper.empty() && upper[v] != 0; }
  int endpoint(int h) const { return (h & 1) ? edges[h >> 1].v : edges[h >> 1].u; }
};

struct ValidationReport {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
};

struct ValidateOptions {
  bool allow_odd_vertices = false;  // Ising base graphs may have any vertex count
};

ValidationReport validate(const EmbeddedGraph& g, ValidateOptions opt = {});
void require_valid(const EmbeddedGraph& g, ValidateOptions opt = {});

// Euler characteristic V - E + F from the rotation system (0 for both surfaces).
int euler_characteristic(const EmbeddedGraph& g);

// Faces as cyclic sequences of darts (edge-end ids where the traversal starts).
std::vector<std::vector<int>> faces(const EmbeddedGraph& g);

// Two-sheeted torus cover; vertex v lifts to v (sheet 0) and v + |V| (sheet 1,
// reflected).  Edge e lifts to e and e + |E|.  The lifted orientation follows
// the rule needed for condition (i) if g carries one.
EmbeddedGraph orientation_cover(const EmbeddedGraph& g);

struct CoverIndex {
  int row = 0, col = 0;
  bool flipped() const { return col & 1; }
};

// m x n cover of the Klein bottle by itself (n odd).  Vertex (i,j,v) has index
// (i*n + j)*|V| + v; lifted edges are indexed the same way by their u-copy.
EmbeddedGraph build_cover(const EmbeddedGraph& g, int m, int n);
CoverIndex cover_index(const EmbeddedGraph& base, int m, int n, int vertex);

// Lifted orientation and the lifted cocycle exponent |a|+ap of the base edge,
// for the matrix of the cover built from base data.
std::vector<int> lifted_orientation(const EmbeddedGraph& base, int m, int n);
std::vector<int> lifted_cocycle(const EmbeddedGraph& base, int m, int n);

EmbeddedGraph build_torus_cover(const EmbeddedGraph& g, int m, int n);

// Fisher graph of an Ising model: each vertex of degree d becomes d triangles
// joined in a ring (one extra ring vertex when d is odd).  Original edge e
// gets weight tanh(beta*J_e); gadget edges weight 1.
EmbeddedGraph fisher_graph(const EmbeddedGraph& g, const std::vector<double>& J, double beta);

// Degree of each vertex counting loops twice.
std::vector<int> degrees(const EmbeddedGraph& g);

}  // namespace kz
