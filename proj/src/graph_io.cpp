#include <fstream>
#include <set>
#include <stdexcept>

#include "kleinz/io.hpp"

namespace kz {

using nlohmann::json;

EmbeddedGraph graph_from_json(const json& j) {
  EmbeddedGraph g;
  g.name = j.value("name", "");
  const std::string s = j.value("surface", "klein");
  if (s == "klein")
    g.surface = Surface::klein;
  else if (s == "torus")
    g.surface = Surface::torus;
  else
    throw std::invalid_argument("unknown surface '" + s + "'");
  g.n_vertices = j.at("vertices").get<int>();
  if (j.contains("colors")) g.colors = j["colors"].get<std::vector<int>>();
  if (j.contains("upper")) g.upper = j["upper"].get<std::vector<int>>();
  for (const auto& je : j.at("edges")) {
    Edge e;
    e.u = je.at("u").get<int>();
    e.v = je.at("v").get<int>();
    e.w = je.value("w", 1.0);
    e.a = je.value("a", 0);
    e.ap = je.value("ap", 0);
    e.b = je.value("b", 0);
    e.label = je.value("label", "");
    g.edges.push_back(e);
  }
  if (j.contains("rotation")) g.rotation = j["rotation"].get<std::vector<std::vector<int>>>();
  if (j.contains("orientation")) g.orientation = j["orientation"].get<std::vector<int>>();
  if (j.contains("curves")) {
    Curves c;
    c.C = j["curves"].at("C").get<std::vector<int>>();
    c.Cp = j["curves"].at("Cp").get<std::vector<int>>();
    g.curves = c;
  }
  return g;
}

json graph_to_json(const EmbeddedGraph& g) {
  json j;
  j["name"] = g.name;
  j["surface"] = g.surface == Surface::klein ? "klein" : "torus";
  j["vertices"] = g.n_vertices;
  if (!g.colors.empty()) j["colors"] = g.colors;
  if (!g.upper.empty()) j["upper"] = g.upper;
  json edges = json::array();
  for (const auto& e : g.edges) {
    json je{{"u", e.u}, {"v", e.v}, {"w", e.w}, {"a", e.a}, {"ap", e.ap}, {"b", e.b}};
    if (!e.label.empty()) je["label"] = e.label;
    edges.push_back(je);
  }
  j["edges"] = edges;
  if (g.has_rotation()) j["rotation"] = g.rotation;
  if (!g.orientation.empty()) j["orientation"] = g.orientation;
  if (g.curves) j["curves"] = {{"C", g.curves->C}, {"Cp", g.curves->Cp}};
  return j;
}

EmbeddedGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return graph_from_json(j);
}

void save_graph(const EmbeddedGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << graph_to_json(g).dump(2) << "\n";
}

void set_weights(EmbeddedGraph& g, const std::map<std::string, double>& by_label) {
  std::set<std::string> hit;
  for (auto& e : g.edges) {
    auto it = by_label.find(e.label);
    if (it != by_label.end()) {
      e.w = it->second;
      hit.insert(it->first);
    }
  }
  for (const auto& [k, v] : by_label)
    if (!hit.count(k)) throw std::invalid_argument("no edge labelled '" + k + "' in " + g.name);
}

}  // namespace kz
