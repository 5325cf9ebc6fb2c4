#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qrl {

// Undirected, unweighted, simple graph. Edges are stored as (i, j) with
// i < j in ascending lexicographic order; `label` records how the instance
// was generated (family, parameters, seed).
struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
    std::string label;

    int edge_count() const { return static_cast<int>(edges.size()); }
    bool has_edge(int i, int j) const;

    // Throws std::invalid_argument on self-loops, duplicates, out-of-range
    // endpoints or unsorted edge lists.
    void validate() const;
};

// Erdos-Renyi G(n, e_p): one uniform draw per vertex pair (i, j), i < j, in
// lexicographic order; the edge is present iff the draw is < e_p.
Graph gen_erdos_renyi(int n, double edge_prob, std::uint64_t seed);

// Ladder of given length: two rails of `length` vertices plus the rungs,
// 3*length - 2 edges in total.
Graph gen_ladder(int length);

// Two cliques K_clique joined by a single bridge edge.
Graph gen_barbell(int clique);

// Connected caveman: `cliques` copies of K_clique_size on a cycle, with one
// edge per clique rewired to reach the previous clique.
Graph gen_caveman(int cliques, int clique_size);

// Relabel vertices: vertex v becomes perm[v]. Used by symmetry tests.
Graph permute_vertices(const Graph& g, const std::vector<int>& perm);

// Text format: first line "<n> <m>", then m lines "<i> <j>" with i < j in
// ascending lexicographic order.
std::string serialize_graph(const Graph& g);

// Inverse of serialize_graph. Parse errors name the offending line number.
Graph parse_graph(const std::string& text);

}  // namespace qrl
