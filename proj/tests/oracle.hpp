#pragma once

// Independent reference implementations used only by the tests.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "cubehom/graph.hpp"
#include "cubehom/sparse_matrix.hpp"

namespace oracle {

struct NamedGraph {
    std::string name;
    cubehom::Graph graph;
};

/// Every connected graph on 1..max_vertices vertices, one per isomorphism
/// class, found by brute-force canonical forms over all labelings.
std::vector<NamedGraph> connected_graphs(std::size_t max_vertices);

/// True when some vertex permutation maps a onto b.
bool isomorphic(const cubehom::Graph& a, const cubehom::Graph& b);

std::size_t components(const cubehom::Graph& g);

/// Rank over Q of a dense integer or rational matrix by fraction-free
/// (Bareiss) elimination on the cleared-denominator integer matrix.
std::size_t bareiss_rank(std::vector<std::vector<mpq_class>> rows);

std::vector<std::vector<mpq_class>> to_dense(const cubehom::SparseRationalMatrix& m);

/// Coordinates of cube vertex m: x_k = bit k-1.
inline int coord(std::size_t m, int k) { return static_cast<int>((m >> (k - 1)) & 1U); }

}  // namespace oracle
