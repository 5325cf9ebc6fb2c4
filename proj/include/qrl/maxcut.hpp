#pragma once

#include <cstdint>
#include <string>

#include "qrl/graph.hpp"

namespace qrl {

// Exhaustive enumeration is capped here; beyond it the cost is prohibitive.
inline constexpr int kMaxCutEnumLimit = 24;

struct CutResult {
    int value = 0;             // C_opt
    std::uint32_t mask = 0;    // bit v = side of vertex v
    int n = 0;

    // Bitstring form, character v = side of vertex v.
    std::string assignment() const;
};

// Exact Max-Cut by enumerating the 2^(n-1) bipartitions with vertex 0 pinned
// to side 0 (cut values are complementation-invariant). Ties resolve to the
// lexicographically smallest assignment string. OpenMP-parallel for large n.
CutResult brute_force_maxcut(const Graph& g);

namespace ref {
// Serial reference: walks all 2^n masks and counts crossing edges one by one.
// Kept for testing and the kernel benchmark.
CutResult brute_force_maxcut(const Graph& g);
}  // namespace ref

}  // namespace qrl
