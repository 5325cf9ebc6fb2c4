#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "dense_oracle.hpp"
#include "qrl/graph.hpp"
#include "qrl/maxcut.hpp"
#include "qrl/qsim.hpp"
#include "qrl/rng.hpp"

using namespace qrl;

namespace {

constexpr double kPi = 3.14159265358979323846;

Graph k2() {
    Graph g;
    g.n = 2;
    g.edges = {{0, 1}};
    g.label = "k2";
    return g;
}

QaoaParams random_params(int p, SplitMix64& rng) {
    std::vector<double> beta(static_cast<std::size_t>(p)), gamma(static_cast<std::size_t>(p));
    for (double& b : beta) b = rng.uniform(-kPi, kPi);
    for (double& g : gamma) g = rng.uniform(-kPi, kPi);
    return QaoaParams(std::move(beta), std::move(gamma));
}

double max_elem_diff(const StateVector& s, const std::vector<oracle::cd>& dense) {
    double worst = 0.0;
    for (std::size_t z = 0; z < s.amps.size(); ++z)
        worst = std::max(worst, std::abs(s.amps[z] - dense[z]));
    return worst;
}

double max_state_diff(const StateVector& a, const StateVector& b) {
    double worst = 0.0;
    for (std::size_t z = 0; z < a.amps.size(); ++z)
        worst = std::max(worst, std::abs(a.amps[z] - b.amps[z]));
    return worst;
}

}  // namespace

TEST_CASE("cost diagonal holds cut sizes") {
    const Graph k3 = gen_erdos_renyi(3, 1.0, 1);
    const CostDiagonal d = cost_diagonal(k3);
    CHECK(d.value(0b000) == 0);
    CHECK(d.value(0b001) == 2);
    CHECK(d.value(0b010) == 2);
    CHECK(d.value(0b111) == 0);

    const Graph barbell = gen_barbell(3);
    const CostDiagonal db = cost_diagonal(barbell);
    CHECK(db.max_value() == brute_force_maxcut(barbell).value);
    for (std::size_t z = 0; z < db.size(); ++z) {
        CHECK(db.value(z) >= 0);
        CHECK(db.value(z) <= barbell.edge_count());
    }
}

TEST_CASE("cost diagonal matches the edge-loop oracle") {
    SplitMix64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform() * 9);
        const Graph g = gen_erdos_renyi(n, rng.uniform(), rng.next());
        const CostDiagonal d = cost_diagonal(g);
        for (std::size_t z = 0; z < d.size(); ++z)
            CHECK(d.value(z) == oracle::cut_value(g, z));
    }
}

TEST_CASE("plus state is uniform and normalized") {
    const StateVector s1 = plus_state(1);
    CHECK(s1.amps[0].real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(s1.amps[1].real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));

    const StateVector s2 = plus_state(2);
    for (const auto& a : s2.amps) {
        CHECK(a.real() == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(a.imag() == 0.0);
    }

    CHECK(plus_state(8).norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(plus_state(0), CapacityError);
    CHECK_THROWS_AS(plus_state(25), CapacityError);
}

TEST_CASE("cost layer phases") {
    const Graph g = gen_erdos_renyi(4, 0.6, 9);
    const CostDiagonal d = cost_diagonal(g);

    StateVector s = plus_state(4);
    apply_cost_layer(s, 0.0, d);
    CHECK(max_state_diff(s, plus_state(4)) == 0.0);

    apply_cost_layer(s, 2.0 * kPi, d);
    CHECK(max_state_diff(s, plus_state(4)) < 1e-12);

    // K2 at gamma = pi/2 from |++>: the cut-1 basis states pick up phase -i.
    const CostDiagonal dk2 = cost_diagonal(k2());
    StateVector sk = plus_state(2);
    apply_cost_layer(sk, kPi / 2.0, dk2);
    CHECK(std::abs(sk.amps[0] - oracle::cd(0.5, 0.0)) < 1e-15);
    CHECK(std::abs(sk.amps[1] - oracle::cd(0.0, -0.5)) < 1e-15);
    CHECK(std::abs(sk.amps[2] - oracle::cd(0.0, -0.5)) < 1e-15);
    CHECK(std::abs(sk.amps[3] - oracle::cd(0.5, 0.0)) < 1e-15);
}

TEST_CASE("mixer layer against the dense matrix exponential") {
    SplitMix64 rng(21);
    StateVector s;
    s.n = 2;
    s.amps.resize(4);
    double norm = 0.0;
    for (auto& a : s.amps) {
        a = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
        norm += std::norm(a);
    }
    for (auto& a : s.amps) a /= std::sqrt(norm);

    StateVector expected = s;
    const oracle::Mat u = oracle::mixer_unitary(2, 0.3);
    std::vector<oracle::cd> dense = oracle::matvec(u, s.amps);

    apply_mixer_layer(s, 0.3);
    CHECK(max_elem_diff(s, dense) < 1e-10);

    // beta = 0 is the identity; beta = pi is the global phase (-1)^n.
    apply_mixer_layer(expected, 0.0);
    StateVector phase = expected;
    apply_mixer_layer(phase, kPi);
    for (std::size_t z = 0; z < 4; ++z)
        CHECK(std::abs(phase.amps[z] - expected.amps[z]) < 1e-12);  // (-1)^2 = +1
}

TEST_CASE("grouped mixer kernel equals the per-qubit reference sweep") {
    SplitMix64 rng(31);
    for (int n = 1; n <= 10; ++n) {
        StateVector fast;
        fast.n = n;
        fast.amps.resize(std::size_t(1) << n);
        for (auto& a : fast.amps) a = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
        StateVector slow = fast;

        const double beta = rng.uniform(-kPi, kPi);
        apply_mixer_layer(fast, beta);
        ref::apply_mixer_layer(slow, beta);
        CHECK(max_state_diff(fast, slow) < 1e-13);
    }
}

TEST_CASE("evolve with zero angles is the plus state") {
    const Graph g = gen_erdos_renyi(5, 0.5, 2);
    const CostDiagonal d = cost_diagonal(g);
    const StateVector s = evolve(d, QaoaParams({0.0, 0.0}, {0.0, 0.0}));
    CHECK(max_state_diff(s, plus_state(5)) < 1e-15);
}

TEST_CASE("evolve matches the dense construction at p <= 2") {
    SplitMix64 rng(77);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform() * 3);
        const Graph g = gen_erdos_renyi(n, 0.3 + 0.7 * rng.uniform(), rng.next());
        const int p = 1 + static_cast<int>(rng.uniform() * 2);
        const QaoaParams params = random_params(p, rng);

        const StateVector s = evolve(cost_diagonal(g), params);
        CHECK(max_elem_diff(s, oracle::evolve_dense(g, params)) < 1e-10);
        CHECK(s.norm_sq() == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("p=2 evolve equals two stacked p=1 layer applications") {
    SplitMix64 rng(13);
    const Graph g = gen_erdos_renyi(6, 0.5, 4);
    const CostDiagonal d = cost_diagonal(g);
    const QaoaParams params = random_params(2, rng);

    const StateVector direct = evolve(d, params);
    StateVector staged = evolve(d, QaoaParams({params.beta[0]}, {params.gamma[0]}));
    apply_cost_layer(staged, params.gamma[1], d);
    apply_mixer_layer(staged, params.beta[1]);
    CHECK(max_state_diff(direct, staged) < 1e-12);
}

TEST_CASE("optimized evolve equals the serial reference path") {
    SplitMix64 rng(41);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform() * 10);
        const Graph g = gen_erdos_renyi(std::max(2, n), 0.5, rng.next());
        const CostDiagonal d = cost_diagonal(g);
        const int p = 1 + static_cast<int>(rng.uniform() * 3);
        const QaoaParams params = random_params(p, rng);
        CHECK(max_state_diff(evolve(d, params), ref::evolve(d, params)) < 1e-13);
    }
}

TEST_CASE("expected energy basics") {
    const Graph g = gen_erdos_renyi(6, 0.7, 5);
    const CostDiagonal d = cost_diagonal(g);

    CHECK(expected_energy(plus_state(6), d) ==
          doctest::Approx(g.edge_count() / 2.0).epsilon(1e-12));

    // A basis state reads off its diagonal entry.
    StateVector basis;
    basis.n = 6;
    basis.amps.assign(64, {0.0, 0.0});
    basis.amps[37] = {1.0, 0.0};
    CHECK(expected_energy(basis, d) == doctest::Approx(d.value(37)).epsilon(1e-12));

    CHECK(ref::expected_energy(plus_state(6), d) ==
          doctest::Approx(g.edge_count() / 2.0).epsilon(1e-12));
}

TEST_CASE("single edge is solved exactly at (pi/8, pi/2)") {
    const CostDiagonal d = cost_diagonal(k2());
    const StateVector s = evolve(d, QaoaParams({kPi / 8.0}, {kPi / 2.0}));
    CHECK(expected_energy(s, d) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("energy range and symmetry properties") {
    SplitMix64 rng(55);
    for (int trial = 0; trial < 10; ++trial) {
        const Graph g = gen_erdos_renyi(7, 0.5, rng.next());
        const CostDiagonal d = cost_diagonal(g);
        const int p = 1 + static_cast<int>(rng.uniform() * 2);

        for (int draw = 0; draw < 10; ++draw) {
            const QaoaParams params = random_params(p, rng);
            const double f = expected_energy(evolve(d, params), d);
            CHECK(f >= -1e-12);
            CHECK(f <= d.max_value() + 1e-12);

            // beta periodic with period pi (per component, global phase only).
            QaoaParams shifted = params;
            for (double& b : shifted.beta) b += kPi;
            CHECK(expected_energy(evolve(d, shifted), d) == doctest::Approx(f).epsilon(1e-9));

            // gamma periodic with period 2*pi (integer diagonal).
            shifted = params;
            for (double& gm : shifted.gamma) gm += 2.0 * kPi;
            CHECK(expected_energy(evolve(d, shifted), d) == doctest::Approx(f).epsilon(1e-9));

            // conjugation symmetry f(-beta, -gamma) = f(beta, gamma).
            QaoaParams negated = params;
            for (double& b : negated.beta) b = -b;
            for (double& gm : negated.gamma) gm = -gm;
            CHECK(expected_energy(evolve(d, negated), d) == doctest::Approx(f).epsilon(1e-9));
        }
    }
}

TEST_CASE("energy is invariant under vertex relabeling") {
    SplitMix64 rng(66);
    const Graph g = gen_erdos_renyi(6, 0.5, 8);
    const QaoaParams params = random_params(2, rng);
    const double f = expected_energy(evolve(cost_diagonal(g), params), cost_diagonal(g));

    std::vector<int> perm = {3, 0, 5, 1, 4, 2};
    const Graph h = permute_vertices(g, perm);
    CHECK(expected_energy(evolve(cost_diagonal(h), params), cost_diagonal(h)) ==
          doctest::Approx(f).epsilon(1e-10));
}

TEST_CASE("evaluate charges the budget exactly once per call") {
    const CostDiagonal d = cost_diagonal(k2());
    const QaoaParams params({0.4}, {0.9});

    EvalCounter one(1);
    const double f = evaluate(d, params, one);
    CHECK(one.used() == 1);
    CHECK_THROWS_AS(evaluate(d, params, one), BudgetExhausted);
    CHECK(one.used() == 1);

    EvalCounter many(192);
    for (int i = 0; i < 192; ++i) CHECK(evaluate(d, params, many) == f);
    CHECK(many.used() == 192);
    CHECK_THROWS_AS(evaluate(d, params, many), BudgetExhausted);
}

TEST_CASE("landscape grid layout and values") {
    const CostDiagonal d = cost_diagonal(k2());

    const std::vector<double> corners = landscape_grid(d, 2);
    REQUIRE(corners.size() == 4);
    // Rows beta = -pi and beta = +pi are equal (two beta periods apart).
    CHECK(corners[0] == doctest::Approx(corners[2]).epsilon(1e-9));
    CHECK(corners[1] == doctest::Approx(corners[3]).epsilon(1e-9));

    const int res = 65;
    const std::vector<double> grid = landscape_grid(d, res);
    REQUIRE(grid.size() == static_cast<std::size_t>(res * res));
    // The zero-angle grid point sits at the center and gives |E|/2.
    CHECK(grid[static_cast<std::size_t>(res) * 32 + 32] == doctest::Approx(0.5).epsilon(1e-12));
    double best = 0.0;
    for (double f : grid) best = std::max(best, f);
    CHECK(best == doctest::Approx(1.0).epsilon(1e-2));

    std::ostringstream csv;
    write_landscape_csv(csv, grid, res);
    const std::string text = csv.str();
    CHECK(text.substr(0, 13) == "beta,gamma,f\n");
    CHECK(std::count(text.begin(), text.end(), '\n') == res * res + 1);
}

TEST_CASE("norm is preserved through deep circuits") {
    SplitMix64 rng(91);
    const Graph g = gen_erdos_renyi(8, 0.5, 10);
    const CostDiagonal d = cost_diagonal(g);
    const StateVector s = evolve(d, random_params(6, rng));
    CHECK(s.norm_sq() == doctest::Approx(1.0).epsilon(1e-10));
}
