#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qrl/graph.hpp"
#include "qrl/qsim.hpp"
#include "qrl/rlenv.hpp"

using namespace qrl;

namespace {

// Smooth deterministic toy objective; no budget.
ObjectiveFn quadratic() {
    return [](std::span<const double> x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return -s;
    };
}

}  // namespace

TEST_CASE("reset yields a zero observation of the right length") {
    for (const auto& [p, L, want] : std::vector<std::tuple<int, int, int>>{
             {1, 4, 12}, {4, 4, 36}, {2, 3, 15}}) {
        EnvConfig cfg;
        cfg.p = p;
        cfg.history_len = L;
        CHECK(cfg.obs_dim() == want);

        Env env(cfg, quadratic());
        SplitMix64 rng(3);
        const std::vector<double> obs = env.reset(rng);
        REQUIRE(obs.size() == static_cast<std::size_t>(want));
        for (double v : obs) CHECK(v == 0.0);
    }
}

TEST_CASE("step updates parameters, reward and history") {
    EnvConfig cfg;
    cfg.p = 1;
    cfg.history_len = 2;
    Env env(cfg, quadratic());

    env.reset_at({1.0, 0.0});
    CHECK(env.current_f() == -1.0);

    // Zero action: reward 0, front slot stays all-zero.
    StepResult r0 = env.step(std::vector<double>{0.0, 0.0});
    CHECK(r0.reward == 0.0);
    CHECK(r0.obs[0] == 0.0);
    CHECK(r0.obs[1] == 0.0);
    CHECK(r0.obs[2] == 0.0);

    // Move to (0.5, 0): f goes -1.0 -> -0.25, reward 0.75.
    StepResult r1 = env.step(std::vector<double>{-0.5, 0.0});
    CHECK(r1.reward == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(r1.obs[0] == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(r1.obs[1] == -0.5);
    CHECK(r1.obs[2] == 0.0);
    // Previous slot shifted back one position.
    CHECK(r1.obs[3] == 0.0);
    CHECK(env.params()[0] == doctest::Approx(0.5));
}

TEST_CASE("history fills one slot per step") {
    EnvConfig cfg;
    cfg.p = 1;
    cfg.history_len = 4;
    Env env(cfg, quadratic());
    env.reset_at({2.0, 2.0});

    const std::size_t slot = 3;
    for (int k = 1; k <= 4; ++k) {
        const StepResult r = env.step(std::vector<double>{0.1, -0.05});
        int nonzero_slots = 0;
        for (int s = 0; s < cfg.history_len; ++s) {
            bool any = false;
            for (std::size_t i = 0; i < slot; ++i) any |= (r.obs[s * slot + i] != 0.0);
            nonzero_slots += any;
        }
        CHECK(nonzero_slots == std::min(k, 4));
    }
}

TEST_CASE("episode ends after exactly T steps") {
    EnvConfig cfg;
    cfg.p = 1;
    cfg.horizon = 5;
    Env env(cfg, quadratic());
    SplitMix64 rng(1);
    env.reset(rng);

    for (int t = 0; t < 5; ++t) {
        CHECK_FALSE(env.done());
        const StepResult r = env.step(std::vector<double>{0.01, 0.01});
        CHECK(r.done == (t == 4));
    }
    CHECK(env.done());
    CHECK_THROWS_AS(env.step(std::vector<double>{0.0, 0.0}), std::logic_error);

    env.reset(rng);
    CHECK_FALSE(env.done());
}

TEST_CASE("rewards telescope to the total objective change") {
    EnvConfig cfg;
    cfg.p = 2;
    cfg.horizon = 32;
    Env env(cfg, quadratic());
    SplitMix64 rng(7);

    env.reset(rng);
    const double f0 = env.current_f();
    double sum = 0.0;
    double f_last = f0;
    for (int t = 0; t < cfg.horizon; ++t) {
        std::vector<double> action(4);
        for (double& a : action) a = rng.uniform(-0.2, 0.2);
        const StepResult r = env.step(action);
        sum += r.reward;
        f_last = r.f;
    }
    CHECK(sum == doctest::Approx(f_last - f0).epsilon(1e-9));
}

TEST_CASE("one objective evaluation per reset and per step") {
    const Graph g = gen_erdos_renyi(4, 0.7, 2);
    const CostDiagonal d = cost_diagonal(g);
    auto counter = std::make_shared<EvalCounter>();
    ObjectiveFn obj = [&d, counter](std::span<const double> x) {
        return evaluate(d, QaoaParams::from_flat({x.begin(), x.end()}), *counter);
    };

    EnvConfig cfg;
    cfg.p = 1;
    cfg.horizon = 8;
    Env env(cfg, obj);
    SplitMix64 rng(2);

    env.reset(rng);
    CHECK(counter->used() == 1);
    for (int t = 0; t < 8; ++t) env.step(std::vector<double>{0.05, 0.05});
    CHECK(counter->used() == 9);  // T + 1

    env.reset(rng);
    CHECK(counter->used() == 10);
}

TEST_CASE("rollout resets every horizon and tracks the best point") {
    EnvConfig cfg;
    cfg.p = 1;
    cfg.horizon = 4;

    int evals = 0;
    ObjectiveFn obj = [&evals](std::span<const double> x) {
        ++evals;
        double s = 0.0;
        for (double v : x) s += v * v;
        return -s;
    };

    SplitMix64 rng(11);
    PolicyMeanFn drift = [](const std::vector<double>&) {
        return std::vector<double>{0.3, -0.2};
    };
    const RolloutResult r = rollout(drift, 0.0, cfg, obj, 9, rng, true);
    CHECK(r.transitions.size() == 9);
    // 9 steps spanning 3 episodes: 3 resets + 9 steps.
    CHECK(evals == 12);
    CHECK(std::isfinite(r.best_f));
    REQUIRE(r.best_params.size() == 2);
}

TEST_CASE("deterministic rollouts repeat exactly") {
    EnvConfig cfg;
    cfg.p = 1;
    cfg.horizon = 16;

    PolicyMeanFn mean = [](const std::vector<double>& obs) {
        return std::vector<double>{0.1 * obs[0] + 0.02, -0.01};
    };
    const std::vector<double> x0 = {0.7, -0.4};

    SplitMix64 rng_a(5), rng_b(5);
    const RolloutResult a = rollout(mean, 0.0, cfg, quadratic(), 16, rng_a, true, &x0);
    const RolloutResult b = rollout(mean, 0.0, cfg, quadratic(), 16, rng_b, true, &x0);
    REQUIRE(a.transitions.size() == b.transitions.size());
    for (std::size_t i = 0; i < a.transitions.size(); ++i) {
        CHECK(a.transitions[i].action == b.transitions[i].action);
        CHECK(a.transitions[i].reward == b.transitions[i].reward);
    }
    CHECK(a.best_f == b.best_f);

    // The best point includes the start, so it can never be worse than f(x0).
    CHECK(a.best_f >= -(0.7 * 0.7 + 0.4 * 0.4) - 1e-12);
}
