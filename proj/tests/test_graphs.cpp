#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "qrl/graph.hpp"
#include "qrl/rng.hpp"

using namespace qrl;

namespace {

bool connected(const Graph& g) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.n));
    for (auto [i, j] : g.edges) {
        adj[static_cast<std::size_t>(i)].push_back(j);
        adj[static_cast<std::size_t>(j)].push_back(i);
    }
    std::vector<bool> seen(static_cast<std::size_t>(g.n), false);
    std::vector<int> stack = {0};
    seen[0] = true;
    int count = 0;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        ++count;
        for (int w : adj[static_cast<std::size_t>(v)])
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = true;
                stack.push_back(w);
            }
    }
    return count == g.n;
}

}  // namespace

TEST_CASE("erdos-renyi edge probability extremes") {
    CHECK(gen_erdos_renyi(4, 0.0, 7).edge_count() == 0);
    const Graph k4 = gen_erdos_renyi(4, 1.0, 7);
    CHECK(k4.edge_count() == 6);
    CHECK(k4.n == 4);
    CHECK_NOTHROW(k4.validate());
}

TEST_CASE("erdos-renyi rejects bad probabilities") {
    CHECK_THROWS_AS(gen_erdos_renyi(4, -0.1, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_erdos_renyi(4, 1.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_erdos_renyi(1, 0.5, 1), std::invalid_argument);
}

TEST_CASE("erdos-renyi is a frozen function of the seed") {
    const Graph g = gen_erdos_renyi(8, 0.5, 1);
    CHECK(g.n == 8);
    // Regression fixture: the exact edge set produced by the splitmix64
    // stream for (n=8, e_p=0.5, seed=1).
    const std::vector<std::pair<int, int>> expected = {
        {0, 4}, {0, 5}, {1, 3}, {1, 5}, {1, 7}, {2, 4}, {2, 5},
        {3, 6}, {3, 7}, {4, 5}, {4, 6}, {4, 7}, {5, 6}};
    CHECK(g.edges == expected);

    const Graph again = gen_erdos_renyi(8, 0.5, 1);
    CHECK(again.edges == g.edges);
    CHECK(gen_erdos_renyi(8, 0.5, 2).edges != g.edges);
    CHECK(g.label == "erdos_n8_p0.5_s1");
}

TEST_CASE("ladder structure") {
    const Graph l2 = gen_ladder(2);
    CHECK(l2.n == 4);
    CHECK(l2.edge_count() == 4);  // the 4-cycle
    for (int v = 0; v < 4; ++v) {
        int deg = 0;
        for (auto [i, j] : l2.edges) deg += (i == v || j == v);
        CHECK(deg == 2);
    }

    CHECK(gen_ladder(8).n == 16);
    CHECK(gen_ladder(8).edge_count() == 22);
    CHECK(gen_ladder(11).n == 22);
    CHECK(gen_ladder(11).edge_count() == 31);
    CHECK_THROWS_AS(gen_ladder(1), std::invalid_argument);
}

TEST_CASE("barbell structure") {
    for (int b : {3, 4, 5}) {
        const Graph g = gen_barbell(b);
        CHECK(g.n == 2 * b);
        CHECK(g.edge_count() == b * (b - 1) + 1);
        CHECK_NOTHROW(g.validate());
        // Exactly one edge crosses between the halves.
        int crossings = 0;
        for (auto [i, j] : g.edges) crossings += (i < b && j >= b);
        CHECK(crossings == 1);
    }
    CHECK_THROWS_AS(gen_barbell(2), std::invalid_argument);
}

TEST_CASE("caveman structure") {
    const Graph c23 = gen_caveman(2, 3);
    CHECK(c23.n == 6);
    CHECK(connected(c23));

    CHECK(gen_caveman(2, 8).n == 16);

    const Graph c54 = gen_caveman(5, 4);
    CHECK(c54.n == 20);
    CHECK(connected(c54));
    int inter = 0;
    for (auto [i, j] : c54.edges) inter += (i / 4 != j / 4);
    CHECK(inter == 5);
    // Frozen edge set of the construction.
    const std::vector<std::pair<int, int>> expected = {
        {0, 2},   {0, 3},   {0, 19},  {1, 2},   {1, 3},   {2, 3},   {3, 4},   {4, 6},
        {4, 7},   {5, 6},   {5, 7},   {6, 7},   {7, 8},   {8, 10},  {8, 11},  {9, 10},
        {9, 11},  {10, 11}, {11, 12}, {12, 14}, {12, 15}, {13, 14}, {13, 15}, {14, 15},
        {15, 16}, {16, 18}, {16, 19}, {17, 18}, {17, 19}, {18, 19}};
    CHECK(c54.edges == expected);

    CHECK_THROWS_AS(gen_caveman(1, 4), std::invalid_argument);
    CHECK_THROWS_AS(gen_caveman(3, 2), std::invalid_argument);
}

TEST_CASE("all caveman test-suite parameters give connected graphs") {
    for (auto [c, k] : std::vector<std::pair<int, int>>{
             {3, 4}, {4, 4}, {5, 4}, {3, 3}, {5, 3}, {7, 3},
             {2, 3}, {2, 4}, {2, 5}, {2, 6}, {2, 7}, {2, 8}, {2, 9}, {2, 10}}) {
        const Graph g = gen_caveman(c, k);
        CHECK_NOTHROW(g.validate());
        CHECK(connected(g));
        CHECK(g.n == c * k);
    }
}

TEST_CASE("serialize / parse round trip") {
    const Graph k3 = gen_erdos_renyi(3, 1.0, 1);
    const std::string text = serialize_graph(k3);
    CHECK(text == "3 3\n0 1\n0 2\n1 2\n");
    const Graph back = parse_graph(text);
    CHECK(back.n == 3);
    CHECK(back.edges == k3.edges);

    Graph empty;
    empty.n = 2;
    CHECK(serialize_graph(empty) == "2 0\n");
    CHECK(parse_graph("2 0\n").edges.empty());

    const Graph ladder3 = gen_ladder(3);
    CHECK(parse_graph(serialize_graph(ladder3)).edges == ladder3.edges);
}

TEST_CASE("parse errors carry line numbers") {
    CHECK_THROWS_WITH_AS(parse_graph(""), doctest::Contains("line 1"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_graph("3 2\n0 1\n"), doctest::Contains("line 3"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_graph("3 1\n1 0\n"), doctest::Contains("line 2"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_graph("3 2\n0 1\n0 1\n"), doctest::Contains("line 3"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_graph("3 1\n0 5\n"), doctest::Contains("line 2"),
                         std::runtime_error);
}

TEST_CASE("random graphs satisfy the invariants") {
    SplitMix64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform() * 14);
        const Graph g = gen_erdos_renyi(n, rng.uniform(), rng.next());
        CHECK_NOTHROW(g.validate());
        std::set<std::pair<int, int>> unique(g.edges.begin(), g.edges.end());
        CHECK(unique.size() == g.edges.size());
    }
}
