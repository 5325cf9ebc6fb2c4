#include "qrl/graph.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qrl/rng.hpp"

namespace qrl {

bool Graph::has_edge(int i, int j) const {
    if (i > j) std::swap(i, j);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(i, j));
}

void Graph::validate() const {
    if (n < 2) throw std::invalid_argument("graph: vertex count must be >= 2");
    for (std::size_t k = 0; k < edges.size(); ++k) {
        auto [i, j] = edges[k];
        if (i == j) throw std::invalid_argument("graph: self-loop at vertex " + std::to_string(i));
        if (i > j) throw std::invalid_argument("graph: edge endpoints not ordered i < j");
        if (i < 0 || j >= n) throw std::invalid_argument("graph: edge endpoint out of range");
        if (k > 0 && !(edges[k - 1] < edges[k]))
            throw std::invalid_argument("graph: edges not in ascending order or duplicated");
    }
}

Graph gen_erdos_renyi(int n, double edge_prob, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("gen_erdos_renyi: n must be >= 2");
    if (!(edge_prob >= 0.0 && edge_prob <= 1.0))
        throw std::invalid_argument("gen_erdos_renyi: edge probability must lie in [0, 1]");

    Graph g;
    g.n = n;
    SplitMix64 rng(seed);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform() < edge_prob) g.edges.emplace_back(i, j);

    std::ostringstream label;
    label << "erdos_n" << n << "_p" << edge_prob << "_s" << seed;
    g.label = label.str();
    return g;
}

Graph gen_ladder(int length) {
    if (length < 2) throw std::invalid_argument("gen_ladder: length must be >= 2");

    Graph g;
    g.n = 2 * length;
    for (int i = 0; i + 1 < length; ++i) g.edges.emplace_back(i, i + 1);
    for (int i = 0; i < length; ++i) g.edges.emplace_back(i, length + i);
    for (int i = 0; i + 1 < length; ++i) g.edges.emplace_back(length + i, length + i + 1);
    std::sort(g.edges.begin(), g.edges.end());
    g.label = "ladder_n" + std::to_string(length);
    return g;
}

Graph gen_barbell(int clique) {
    if (clique < 3) throw std::invalid_argument("gen_barbell: clique size must be >= 3");

    Graph g;
    g.n = 2 * clique;
    for (int base : {0, clique})
        for (int i = 0; i < clique; ++i)
            for (int j = i + 1; j < clique; ++j) g.edges.emplace_back(base + i, base + j);
    g.edges.emplace_back(clique - 1, clique);  // the bridge
    std::sort(g.edges.begin(), g.edges.end());
    g.label = "barbell_n" + std::to_string(clique);
    return g;
}

Graph gen_caveman(int cliques, int clique_size) {
    if (cliques < 2) throw std::invalid_argument("gen_caveman: clique count must be >= 2");
    if (clique_size < 3) throw std::invalid_argument("gen_caveman: clique size must be >= 3");

    const int n = cliques * clique_size;
    std::set<std::pair<int, int>> edges;
    auto add = [&edges](int a, int b) {
        if (a > b) std::swap(a, b);
        edges.emplace(a, b);
    };

    for (int c = 0; c < cliques; ++c) {
        int base = c * clique_size;
        for (int i = 0; i < clique_size; ++i)
            for (int j = i + 1; j < clique_size; ++j) add(base + i, base + j);
    }
    // Rewire one edge per clique: drop (start, start+1), connect start to the
    // last vertex of the previous clique around the cycle.
    for (int c = 0; c < cliques; ++c) {
        int start = c * clique_size;
        edges.erase({start, start + 1});
        add(start, (start - 1 + n) % n);
    }

    Graph g;
    g.n = n;
    g.edges.assign(edges.begin(), edges.end());
    g.label = "caveman_c" + std::to_string(cliques) + "_k" + std::to_string(clique_size);
    return g;
}

Graph permute_vertices(const Graph& g, const std::vector<int>& perm) {
    if (static_cast<int>(perm.size()) != g.n)
        throw std::invalid_argument("permute_vertices: permutation size mismatch");
    Graph out;
    out.n = g.n;
    out.label = g.label + "_perm";
    out.edges.reserve(g.edges.size());
    for (auto [i, j] : g.edges) {
        int a = perm[i], b = perm[j];
        if (a > b) std::swap(a, b);
        out.edges.emplace_back(a, b);
    }
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

std::string serialize_graph(const Graph& g) {
    g.validate();
    std::ostringstream out;
    out << g.n << ' ' << g.edges.size() << '\n';
    for (auto [i, j] : g.edges) out << i << ' ' << j << '\n';
    return out.str();
}

namespace {

[[noreturn]] void parse_fail(int line, const std::string& what) {
    throw std::runtime_error("parse_graph: line " + std::to_string(line) + ": " + what);
}

}  // namespace

Graph parse_graph(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;

    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty()) return true;
        }
        ++lineno;
        return false;
    };

    if (!next_line()) parse_fail(lineno, "missing header");
    std::istringstream header(line);
    int n = 0;
    long m = -1;
    if (!(header >> n >> m) || n < 2 || m < 0) parse_fail(lineno, "expected header '<n> <m>'");

    Graph g;
    g.n = n;
    g.edges.reserve(static_cast<std::size_t>(m));
    for (long k = 0; k < m; ++k) {
        if (!next_line()) parse_fail(lineno, "unexpected end of file, expected edge");
        std::istringstream es(line);
        int i = -1, j = -1;
        std::string rest;
        if (!(es >> i >> j) || (es >> rest)) parse_fail(lineno, "expected edge '<i> <j>'");
        if (i < 0 || j >= n || i >= j) parse_fail(lineno, "invalid edge endpoints");
        if (!g.edges.empty() && !(g.edges.back() < std::make_pair(i, j)))
            parse_fail(lineno, "edges not in ascending order");
        g.edges.emplace_back(i, j);
    }
    return g;
}

}  // namespace qrl
