#include "qrl/maxcut.hpp"

#include <bit>
#include <stdexcept>
#include <vector>

namespace qrl {

namespace {

// Lexicographic order on assignment strings, i.e. on masks read from bit 0
// upward. The lowest differing bit decides.
bool lex_less(std::uint32_t a, std::uint32_t b) {
    std::uint32_t diff = a ^ b;
    if (diff == 0) return false;
    return ((a >> std::countr_zero(diff)) & 1u) == 0;
}

void check_capacity(const Graph& g) {
    g.validate();
    if (g.n > kMaxCutEnumLimit)
        throw std::invalid_argument("brute_force_maxcut: graph has " + std::to_string(g.n) +
                                    " vertices, enumeration is capped at " +
                                    std::to_string(kMaxCutEnumLimit));
}

}  // namespace

std::string CutResult::assignment() const {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int v = 0; v < n; ++v)
        if ((mask >> v) & 1u) s[static_cast<std::size_t>(v)] = '1';
    return s;
}

CutResult brute_force_maxcut(const Graph& g) {
    check_capacity(g);
    const int n = g.n;

    std::vector<std::uint32_t> adj(static_cast<std::size_t>(n), 0);
    for (auto [i, j] : g.edges) {
        adj[static_cast<std::size_t>(i)] |= 1u << j;
        adj[static_cast<std::size_t>(j)] |= 1u << i;
    }

    // Vertex 0 stays on side 0; enumerate sides of vertices 1..n-1.
    const std::uint64_t total = 1ull << (n - 1);
    int best_value = -1;
    std::uint32_t best_mask = 0;

#pragma omp parallel if (total >= (1ull << 16))
    {
        int local_value = -1;
        std::uint32_t local_mask = 0;
#pragma omp for schedule(static) nowait
        for (std::int64_t w = 0; w < static_cast<std::int64_t>(total); ++w) {
            const std::uint32_t mask = static_cast<std::uint32_t>(w) << 1;
            int cut = 0;
            std::uint32_t side1 = mask;
            while (side1) {
                int v = std::countr_zero(side1);
                side1 &= side1 - 1;
                cut += std::popcount(adj[static_cast<std::size_t>(v)] & ~mask);
            }
            if (cut > local_value || (cut == local_value && lex_less(mask, local_mask))) {
                local_value = cut;
                local_mask = mask;
            }
        }
#pragma omp critical
        {
            if (local_value > best_value ||
                (local_value == best_value && lex_less(local_mask, best_mask))) {
                best_value = local_value;
                best_mask = local_mask;
            }
        }
    }

    return CutResult{best_value, best_mask, n};
}

namespace ref {

CutResult brute_force_maxcut(const Graph& g) {
    check_capacity(g);
    const std::uint64_t total = 1ull << g.n;

    int best_value = -1;
    std::uint32_t best_mask = 0;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        int cut = 0;
        for (auto [i, j] : g.edges) cut += static_cast<int>(((mask >> i) ^ (mask >> j)) & 1u);
        const auto m32 = static_cast<std::uint32_t>(mask);
        if (cut > best_value || (cut == best_value && lex_less(m32, best_mask))) {
            best_value = cut;
            best_mask = m32;
        }
    }
    return CutResult{best_value, best_mask, g.n};
}

}  // namespace ref

}  // namespace qrl
