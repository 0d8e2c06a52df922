// Kasteleyn orientations and twisted Kasteleyn matrices.
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "kleinz/graph.hpp"

namespace kz {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

// Number of boundary edges of each face oriented clockwise (against the
// counterclockwise traversal produced by faces()).
std::vector<int> clockwise_counts(const EmbeddedGraph& g, const std::vector<int>& K);

// Torus graph: every face has an odd number of clockwise edges.
bool check_kasteleyn(const EmbeddedGraph& gt, const std::vector<int>& K);
// Klein graph: condition (i), i.e. the lifted orientation on the orientation cover.
bool check_kasteleyn_klein(const EmbeddedGraph& g, const std::vector<int>& K);

// Orientation of a torus graph satisfying condition (i).
std::vector<int> find_orientation(const EmbeddedGraph& gt);

// Orientation of a Klein graph satisfying condition (i); among the two
// classes differing by the edges crossing a, picks the one whose Pfaffian
// formula counts matchings (condition (ii)).
std::vector<int> find_klein_orientation(const EmbeddedGraph& g, unsigned seed = 7);

// (n^K(C) + n^K(C')) mod 2 for closed walks given as edge lists.  A walk
// starts at the u-end of its first edge.
int check_curve_condition(const EmbeddedGraph& g, const std::vector<int>& K,
                          const std::vector<int>& C, const std::vector<int>& Cp);

// A(z,w) with entries eps * i^{|a|+ap} * nu * z^{b} * w^{|a|}.  `cocycle`, if
// given, replaces |a|+ap per edge (used for lifted matrices of covers).
CMatrix klein_matrix(const EmbeddedGraph& g, const std::vector<int>& K, cplx z, cplx w,
                     const std::vector<int>* cocycle = nullptr);
// A~(z,w) with entries eps * nu * z^{tb} * w^{ta}.
CMatrix torus_matrix(const EmbeddedGraph& gt, const std::vector<int>& K, cplx z, cplx w);

// Rows: color-0 vertices, columns: color-1 vertices (in index order).
CMatrix bipartite_block(const EmbeddedGraph& g, const CMatrix& A);

cplx det(const CMatrix& A);

// i^k for any integer k.
cplx ipow(int k);
// z^k by repeated multiplication (exact for z = +-1, +-i).
cplx cpow(cplx z, int k);

// The Pfaffian combination |Im sqrt(r1)| + |Re sqrt(rm1)|.
double pfaffian_combination(cplx r1, cplx rm1);

}  // namespace kz
