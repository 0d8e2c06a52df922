// Bundled lattices shipped under data/lattices.
#pragma once

#include <string>
#include <vector>

#include "kleinz/graph.hpp"

namespace kz {

std::vector<std::string> lattice_names();
std::string lattice_path(const std::string& name);
// Loads a bundled lattice by name, or a JSON file if `name` is a path.
EmbeddedGraph load_lattice(const std::string& name);

// M x N square lattice drawn directly in the Klein bottle: M rows glued
// periodically, N columns glued with the flip.  Horizontal weight x, vertical y.
EmbeddedGraph square_grid(int M, int N, double x = 1.0, double y = 1.0);

}  // namespace kz
