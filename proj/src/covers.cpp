#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kleinz/graph.hpp"

namespace kz {

namespace {

int floordiv(int a, int b) { return (a >= 0) ? a / b : -((-a + b - 1) / b); }
int mod(int a, int b) { return ((a % b) + b) % b; }

struct Lift {
  int copy_v;      // linear copy index of v's endpoint
  int a, ap, b;    // crossing data in the cover
};

// Where the lift of edge e starting in copy (i,j) of the m x n Klein cover ends.
Lift klein_lift(const Edge& ed, int i, int j, int m, int n) {
  const int sigma = (j & 1) ? -1 : 1;
  int ip = i + sigma * ed.a;
  int jp = j + ed.b;
  Lift L{};
  L.a = ip >= m ? 1 : (ip < 0 ? -1 : 0);
  if (m % 2 == 0) {
    const int lo = std::min(i, ip), hi = std::max(i, ip);
    L.ap = (lo == m / 2 - 1 && hi == m / 2) ? 1 : 0;
  } else {
    L.ap = (ed.ap == 1 && i == (m - 1) / 2) ? 1 : 0;
  }
  int row = mod(ip, m);
  L.b = 0;
  if (jp >= n || jp < 0) {
    L.b = jp >= n ? 1 : -1;
    jp = jp >= n ? jp - n : jp + n;
    row = m - 1 - row;
  }
  L.copy_v = row * n + jp;
  return L;
}

// Rotation of a cover from the per-copy rotation of the base.  `target` maps
// lifted edge -> linear copy of its v-end; copies listed in `reflected` get
// their cyclic order reversed.
std::vector<std::vector<int>> lift_rotation(const EmbeddedGraph& g, int copies,
                                            const std::vector<int>& target,
                                            const std::vector<char>& reflected) {
  const int nv = g.n_vertices, ne = g.n_edges();
  // arriving[(copy of v-end) * ne + e] = lifted edge
  std::vector<int> arriving(static_cast<size_t>(copies) * ne, -1);
  for (int c = 0; c < copies; ++c)
    for (int e = 0; e < ne; ++e) arriving[static_cast<size_t>(target[c * ne + e]) * ne + e] = c * ne + e;
  std::vector<std::vector<int>> rot(static_cast<size_t>(copies) * nv);
  for (int c = 0; c < copies; ++c)
    for (int v = 0; v < nv; ++v) {
      auto& r = rot[c * nv + v];
      for (int h : g.rotation[v]) {
        const int e = end_edge(h);
        if ((h & 1) == 0)
          r.push_back(end_id(c * ne + e, false));
        else
          r.push_back(end_id(arriving[static_cast<size_t>(c) * ne + e], true));
      }
      if (reflected[c]) std::reverse(r.begin(), r.end());
    }
  return rot;
}

}  // namespace

EmbeddedGraph build_cover(const EmbeddedGraph& g, int m, int n) {
  if (g.surface != Surface::klein) throw std::invalid_argument("build_cover: klein graph expected");
  if (m < 1 || n < 1) throw std::invalid_argument("build_cover: m, n must be positive");
  if (n % 2 == 0) throw std::invalid_argument("build_cover: n must be odd (use the torus cover for even n)");
  require_valid(g, {.allow_odd_vertices = true});
  const int nv = g.n_vertices, ne = g.n_edges(), copies = m * n;

  EmbeddedGraph c;
  c.name = g.name + "[" + std::to_string(m) + "x" + std::to_string(n) + "]";
  c.surface = Surface::klein;
  c.n_vertices = copies * nv;
  c.edges.resize(static_cast<size_t>(copies) * ne);
  c.upper.resize(c.n_vertices);
  if (!g.colors.empty()) c.colors.resize(c.n_vertices);
  std::vector<int> target(static_cast<size_t>(copies) * ne);
  std::vector<char> reflected(copies);

  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      const int cu = i * n + j;
      reflected[cu] = j & 1;
      for (int v = 0; v < nv; ++v) {
        const int half = 2 * i + ((g.is_upper(v) ? 1 : 0) ^ (j & 1));
        c.upper[cu * nv + v] = half >= m ? 1 : 0;
        if (!g.colors.empty()) c.colors[cu * nv + v] = g.colors[v];
      }
      for (int e = 0; e < ne; ++e) {
        const Edge& ed = g.edges[e];
        Lift L = klein_lift(ed, i, j, m, n);
        Edge le = ed;
        le.u = cu * nv + ed.u;
        le.v = L.copy_v * nv + ed.v;
        le.a = L.a;
        le.ap = L.ap;
        le.b = L.b;
        c.edges[cu * ne + e] = le;
        target[cu * ne + e] = L.copy_v;
      }
    }
  if (g.has_rotation()) c.rotation = lift_rotation(g, copies, target, reflected);
  return c;
}

CoverIndex cover_index(const EmbeddedGraph& base, int /*m*/, int n, int vertex) {
  const int copy = vertex / base.n_vertices;
  return CoverIndex{copy / n, copy % n};
}

std::vector<int> lifted_orientation(const EmbeddedGraph& base, int m, int n) {
  std::vector<int> K(static_cast<size_t>(m) * n * base.n_edges());
  for (size_t k = 0; k < K.size(); ++k)
    K[k] = base.orientation.empty() ? 1 : base.orientation[k % base.n_edges()];
  return K;
}

std::vector<int> lifted_cocycle(const EmbeddedGraph& base, int m, int n) {
  std::vector<int> w(static_cast<size_t>(m) * n * base.n_edges());
  for (size_t k = 0; k < w.size(); ++k) {
    const Edge& e = base.edges[k % base.n_edges()];
    w[k] = std::abs(e.a) + e.ap;
  }
  return w;
}

EmbeddedGraph build_torus_cover(const EmbeddedGraph& g, int m, int n) {
  if (g.surface != Surface::torus) throw std::invalid_argument("build_torus_cover: torus graph expected");
  if (m < 1 || n < 1) throw std::invalid_argument("build_torus_cover: m, n must be positive");
  require_valid(g);
  const int nv = g.n_vertices, ne = g.n_edges(), copies = m * n;
  EmbeddedGraph c;
  c.name = g.name + "[" + std::to_string(m) + "x" + std::to_string(n) + "]";
  c.surface = Surface::torus;
  c.n_vertices = copies * nv;
  c.edges.resize(static_cast<size_t>(copies) * ne);
  if (!g.colors.empty()) c.colors.resize(c.n_vertices);
  std::vector<int> target(static_cast<size_t>(copies) * ne);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      const int cu = i * n + j;
      for (int v = 0; v < nv && !g.colors.empty(); ++v) c.colors[cu * nv + v] = g.colors[v];
      for (int e = 0; e < ne; ++e) {
        const Edge& ed = g.edges[e];
        const int ip = i + ed.a, jp = j + ed.b;
        const int cv = mod(ip, m) * n + mod(jp, n);
        Edge le = ed;
        le.u = cu * nv + ed.u;
        le.v = cv * nv + ed.v;
        le.a = floordiv(ip, m);
        le.b = floordiv(jp, n);
        c.edges[cu * ne + e] = le;
        target[cu * ne + e] = cv;
      }
    }
  if (!g.orientation.empty()) {
    c.orientation.resize(c.edges.size());
    for (size_t k = 0; k < c.edges.size(); ++k) c.orientation[k] = g.orientation[k % ne];
  }
  if (g.has_rotation()) c.rotation = lift_rotation(g, copies, target, std::vector<char>(copies, 0));
  return c;
}

EmbeddedGraph fisher_graph(const EmbeddedGraph& g, const std::vector<double>& J, double beta) {
  if (!g.has_rotation()) throw std::invalid_argument("fisher_graph: rotation system required");
  if (static_cast<int>(J.size()) != g.n_edges()) throw std::invalid_argument("fisher_graph: one coupling per edge");
  if (beta < 0) throw std::invalid_argument("fisher_graph: beta must be nonnegative");
  require_valid(g, {.allow_odd_vertices = true});

  EmbeddedGraph f;
  f.name = g.name + "^F";
  f.surface = g.surface;
  const int ne = g.n_edges();
  // terminal[h] = fisher vertex carrying original edge-end h
  std::vector<int> terminal(2 * ne, -1);
  std::vector<std::vector<int>> rot;
  auto new_vertex = [&](int up) {
    rot.emplace_back();
    if (g.surface == Surface::klein) f.upper.push_back(up);
    return f.n_vertices++;
  };
  auto add_edge = [&](int u, int v) {
    Edge e;
    e.u = u;
    e.v = v;
    e.w = 1.0;
    f.edges.push_back(e);
    return static_cast<int>(f.edges.size()) - 1;
  };

  // External edges come first, so edge-end ids of the original graph survive.
  f.edges.resize(ne);
  for (int v = 0; v < g.n_vertices; ++v) {
    const auto& hv = g.rotation[v];
    const int d = static_cast<int>(hv.size());
    const int up = g.is_upper(v) ? 1 : 0;
    std::vector<int> t(d), l(d), r(d);
    for (int k = 0; k < d; ++k) {
      t[k] = new_vertex(up);
      l[k] = new_vertex(up);
      r[k] = new_vertex(up);
      terminal[hv[k]] = t[k];
    }
    const int s = (d % 2 == 1) ? new_vertex(up) : -1;
    std::vector<int> tl(d), tr(d), lr(d), ring(d);
    for (int k = 0; k < d; ++k) {
      tl[k] = add_edge(t[k], l[k]);
      tr[k] = add_edge(t[k], r[k]);
      lr[k] = add_edge(l[k], r[k]);
    }
    // ring[k] joins r_k to l_{k+1}; with odd d the last link passes through s
    int s_in = -1, s_out = -1;
    for (int k = 0; k < d; ++k) {
      if (k == d - 1 && s >= 0) {
        s_in = add_edge(r[k], s);
        s_out = add_edge(s, l[0]);
      } else {
        ring[k] = add_edge(r[k], l[(k + 1) % d]);
      }
    }
    for (int k = 0; k < d; ++k) {
      const int prev = (k + d - 1) % d;
      rot[t[k]] = {hv[k], end_id(tr[k], false), end_id(tl[k], false)};
      const int to_next = (k == d - 1 && s >= 0) ? end_id(s_in, false) : end_id(ring[k], false);
      rot[r[k]] = {end_id(tr[k], true), to_next, end_id(lr[k], true)};
      const int from_prev = (k == 0 && s >= 0) ? end_id(s_out, true) : end_id(ring[prev], true);
      rot[l[k]] = {end_id(tl[k], true), end_id(lr[k], false), from_prev};
    }
    if (s >= 0) rot[s] = {end_id(s_out, false), end_id(s_in, true)};
  }
  for (int e = 0; e < ne; ++e) {
    Edge fe = g.edges[e];
    fe.u = terminal[end_id(e, false)];
    fe.v = terminal[end_id(e, true)];
    fe.w = std::tanh(beta * J[e]);
    f.edges[e] = fe;
  }
  f.rotation = std::move(rot);
  return f;
}

}  // namespace kz
