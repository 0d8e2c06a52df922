// JSON (de)serialization of graphs.
#pragma once

#include <map>
#include <string>

#include "kleinz/graph.hpp"
#include "json.hpp"

namespace kz {

EmbeddedGraph graph_from_json(const nlohmann::json& j);
nlohmann::json graph_to_json(const EmbeddedGraph& g);
EmbeddedGraph load_graph(const std::string& path);
void save_graph(const EmbeddedGraph& g, const std::string& path);

// Overrides weights of edges whose label matches a key.  Throws on unknown labels.
void set_weights(EmbeddedGraph& g, const std::map<std::string, double>& by_label);

}  // namespace kz
