#include "kleinz/graph.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace kz {

ValidationReport validate(const EmbeddedGraph& g, ValidateOptions opt) {
  ValidationReport r;
  auto add = [&](std::string s) { r.issues.push_back(std::move(s)); };
  const int nv = g.n_vertices;
  if (nv < 0) add("negative vertex count");
  if (nv % 2 != 0 && !opt.allow_odd_vertices) add("odd vertex count");
  if (!g.colors.empty() && static_cast<int>(g.colors.size()) != nv)
    add("colors: expected one entry per vertex");
  if (!g.upper.empty() && static_cast<int>(g.upper.size()) != nv)
    add("upper: expected one entry per vertex");
  if (g.surface == Surface::torus && !g.upper.empty()) add("upper bits only apply to klein graphs");

  for (int e = 0; e < g.n_edges(); ++e) {
    const Edge& ed = g.edges[e];
    const std::string tag = "edge " + std::to_string(e) + ": ";
    if (ed.u < 0 || ed.u >= nv || ed.v < 0 || ed.v >= nv) {
      add(tag + "endpoint out of range");
      continue;
    }
    if (!(ed.w >= 0.0)) add(tag + "negative weight");
    if (g.colors.size() == static_cast<size_t>(nv) && g.colors[ed.u] == g.colors[ed.v])
      add(tag + "joins two vertices of the same color");
    if (g.surface == Surface::klein) {
      if (ed.a < -1 || ed.a > 1) add(tag + "a must be in {-1,0,1}");
      if (ed.ap != 0 && ed.ap != 1) add(tag + "ap must be 0 or 1");
      if (ed.b < -1 || ed.b > 1) add(tag + "b must be in {-1,0,1}");
      int halves = 0;
      if (g.upper.size() == static_cast<size_t>(nv)) halves = g.upper[ed.u] + g.upper[ed.v];
      if (((std::abs(ed.a) + ed.ap + std::abs(ed.b) + halves) & 1) != 0)
        add(tag + "violation of mod-2 parity between a+ap and b");
    }
  }

  if (g.has_rotation()) {
    if (static_cast<int>(g.rotation.size()) != nv) {
      add("rotation: expected one list per vertex");
    } else {
      std::vector<int> seen(2 * g.n_edges(), 0);
      for (int v = 0; v < nv; ++v)
        for (int h : g.rotation[v]) {
          if (h < 0 || h >= 2 * g.n_edges()) {
            add("rotation: bad edge-end id " + std::to_string(h));
            continue;
          }
          ++seen[h];
          if (g.endpoint(h) != v)
            add("rotation: end " + std::to_string(h) + " listed at wrong vertex");
        }
      for (size_t h = 0; h < seen.size(); ++h)
        if (seen[h] != 1) add("rotation: end " + std::to_string(h) + " listed " + std::to_string(seen[h]) + " times");
    }
  }
  if (!g.orientation.empty()) {
    if (static_cast<int>(g.orientation.size()) != g.n_edges()) add("orientation: expected one sign per edge");
    for (int s : g.orientation)
      if (s != 1 && s != -1) { add("orientation: signs must be +1 or -1"); break; }
  }
  if (g.curves) {
    for (const auto* c : {&g.curves->C, &g.curves->Cp})
      for (int e : *c)
        if (e < 0 || e >= g.n_edges()) add("curves: bad edge id " + std::to_string(e));
  }
  return r;
}

void require_valid(const EmbeddedGraph& g, ValidateOptions opt) {
  auto r = validate(g, opt);
  if (!r.ok()) throw std::invalid_argument("invalid graph '" + g.name + "': " + r.issues.front());
}

std::vector<int> degrees(const EmbeddedGraph& g) {
  std::vector<int> d(g.n_vertices, 0);
  for (const auto& e : g.edges) {
    ++d[e.u];
    ++d[e.v];
  }
  return d;
}

std::vector<std::vector<int>> faces(const EmbeddedGraph& g) {
  if (!g.has_rotation()) throw std::invalid_argument("faces: graph has no rotation system");
  const int nh = 2 * g.n_edges();
  // position of each end inside its vertex's ccw list
  std::vector<int> pos(nh, -1);
  for (int v = 0; v < g.n_vertices; ++v)
    for (size_t k = 0; k < g.rotation[v].size(); ++k) pos[g.rotation[v][k]] = static_cast<int>(k);

  std::vector<char> used(nh, 0);
  std::vector<std::vector<int>> out;
  for (int start = 0; start < nh; ++start) {
    if (used[start]) continue;
    std::vector<int> f;
    int h = start;
    while (!used[h]) {
      used[h] = 1;
      f.push_back(h);
      const int arr = h ^ 1;
      const auto& rot = g.rotation[g.endpoint(arr)];
      const int k = pos[arr];
      // next dart: the end just clockwise of the arrival end
      h = rot[(k + rot.size() - 1) % rot.size()];
    }
    out.push_back(std::move(f));
  }
  return out;
}

int euler_characteristic(const EmbeddedGraph& g) {
  // face tracing needs an orientable surface; chi of a double cover is twice chi
  if (g.surface == Surface::klein) return euler_characteristic(orientation_cover(g)) / 2;
  return g.n_vertices - g.n_edges() + static_cast<int>(faces(g).size());
}

EmbeddedGraph orientation_cover(const EmbeddedGraph& g) {
  if (g.surface != Surface::klein) throw std::invalid_argument("orientation_cover: klein graph expected");
  require_valid(g, {.allow_odd_vertices = true});
  const int nv = g.n_vertices, ne = g.n_edges();
  EmbeddedGraph t;
  t.name = g.name + "~";
  t.surface = Surface::torus;
  t.n_vertices = 2 * nv;
  if (!g.colors.empty()) {
    t.colors = g.colors;
    t.colors.insert(t.colors.end(), g.colors.begin(), g.colors.end());
  }
  auto up_t = [&](int v, int c) { return (g.is_upper(v) ? 1 : 0) ^ c; };
  t.edges.resize(2 * ne);
  for (int c = 0; c < 2; ++c)
    for (int e = 0; e < ne; ++e) {
      const Edge& ed = g.edges[e];
      const int sigma = c ? -1 : 1;
      const int col = c + ed.b;  // plane column of v's copy
      Edge te = ed;
      te.u = ed.u + c * nv;
      te.v = ed.v + ((col % 2 + 2) % 2) * nv;
      te.a = sigma * ed.a;
      te.ap = 0;
      te.b = col == 2 ? 1 : (col == -1 ? -1 : 0);
      t.edges[e + c * ne] = te;
    }
  if (!g.orientation.empty()) {
    t.orientation.resize(2 * ne);
    for (int c = 0; c < 2; ++c)
      for (int e = 0; e < ne; ++e) {
        // Sign of i^{|a|+ap} d(u) d(v) with d = 1 on the lower half and -i on
        // the upper half (always real by the parity rule).  For |a|+ap <= 1
        // this just reverses edges with both ends upper.
        const Edge& ed = g.edges[e];
        const Edge& te = t.edges[e + c * ne];
        const int q = std::abs(ed.a) + ed.ap + 3 * (up_t(te.u % nv, te.u / nv) + up_t(te.v % nv, te.v / nv));
        t.orientation[e + c * ne] = (q % 4 == 2) ? -g.orientation[e] : g.orientation[e];
      }
  }
  if (g.has_rotation()) {
    t.rotation.resize(2 * nv);
    for (int c = 0; c < 2; ++c)
      for (int v = 0; v < nv; ++v) {
        auto& rot = t.rotation[v + c * nv];
        for (int h : g.rotation[v]) {
          const int e = end_edge(h);
          if ((h & 1) == 0) {
            rot.push_back(end_id(e + c * ne, false));
          } else {
            const int cu = ((c - g.edges[e].b) % 2 + 2) % 2;
            rot.push_back(end_id(e + cu * ne, true));
          }
        }
        if (c == 1) std::reverse(rot.begin(), rot.end());
      }
  }
  return t;
}

}  // namespace kz
