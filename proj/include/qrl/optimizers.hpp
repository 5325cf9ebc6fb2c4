#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qrl/ppo.hpp"
#include "qrl/qsim.hpp"
#include "qrl/rlenv.hpp"

namespace qrl {

// Full trace of one optimizer attempt: every objective query in order, plus
// the running best. `evals` always matches fs.size() and never exceeds the
// attempt budget.
struct OptRunRecord {
    std::string optimizer;
    int attempt = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<double>> points;
    std::vector<double> fs;
    std::uint64_t evals = 0;
    std::vector<double> best_params;
    double best_f = -std::numeric_limits<double>::infinity();

    void record(std::span<const double> x, double f);
};

nlohmann::json record_to_json(const OptRunRecord& rec);

// Simplex maximization (run as minimization of -f) with reflection 1,
// expansion 2, contraction 0.5, shrink 0.5. The initial simplex is x0 plus
// one vertex offset +0.25 along each coordinate. No convergence test: the
// only stopping rule is exhausting the counter, so comparisons between
// optimizers stay evaluation-matched. The objective must charge `counter`
// once per call.
OptRunRecord nelder_mead(const ObjectiveFn& objective, EvalCounter& counter,
                         const std::vector<double>& x0);

// Deterministic mean-policy rollout: one uninterrupted trajectory from x0
// spending the whole budget (the evaluation at x0 included).
OptRunRecord rl_rollout_opt(const PolicyCheckpoint& ck, const CostDiagonal& d,
                            const std::vector<double>& x0, std::uint64_t budget);

// Budget split in half: RL rollout, then Nelder-Mead restarted from the best
// point the rollout visited.
OptRunRecord rlnm(const PolicyCheckpoint& ck, const CostDiagonal& d,
                  const std::vector<double>& x0, std::uint64_t budget);

enum class OptimizerKind { nelder_mead, rl, rlnm };

const char* optimizer_name(OptimizerKind kind);

struct OptimizerSpec {
    OptimizerKind kind = OptimizerKind::nelder_mead;
    const PolicyCheckpoint* checkpoint = nullptr;  // required for rl / rlnm
};

struct MultiStartResult {
    std::vector<OptRunRecord> attempts;
    double best_f = -std::numeric_limits<double>::infinity();
    std::vector<double> best_params;
};

// Start point for attempt k: 2p uniforms in [-pi, pi] from the substream
// derive_seed(seed, k) — a function of (seed, k) only, so every optimizer
// sees the same starts and comparisons are paired.
std::vector<double> attempt_start_point(std::uint64_t seed, int attempt, int p);

MultiStartResult multi_start(const OptimizerSpec& spec, const CostDiagonal& d, int p,
                             int attempts, std::uint64_t budget, std::uint64_t seed);

}  // namespace qrl
