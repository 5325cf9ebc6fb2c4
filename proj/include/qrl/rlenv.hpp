#pragma once

#include <functional>
#include <span>
#include <vector>

#include "qrl/rng.hpp"

namespace qrl {

// Objective over the flat 2p parameter vector (beta then gamma). Implementations
// charge their own evaluation counter and may throw BudgetExhausted.
using ObjectiveFn = std::function<double(std::span<const double>)>;

struct EnvConfig {
    int p = 1;
    int history_len = 4;  // L, iterations of finite-difference memory
    int horizon = 64;     // T, steps per episode
    double init_lo = -3.14159265358979323846;
    double init_hi = 3.14159265358979323846;

    int obs_dim() const { return (2 * p + 1) * history_len; }
    int action_dim() const { return 2 * p; }
};

struct StepResult {
    std::vector<double> obs;
    double reward = 0.0;
    bool done = false;
    double f = 0.0;  // objective at the point just reached
};

// Episodic MDP around an objective: the observation is the history of the
// last L (delta_f, delta_beta, delta_gamma) tuples, most recent first; an
// action is the parameter step; the reward is the objective change. One
// objective evaluation per reset and per step.
class Env {
public:
    Env(EnvConfig cfg, ObjectiveFn objective);

    std::vector<double> reset(SplitMix64& rng);
    std::vector<double> reset_at(std::vector<double> params);
    StepResult step(std::span<const double> action);

    const EnvConfig& config() const { return cfg_; }
    const std::vector<double>& params() const { return params_; }
    double current_f() const { return f_; }
    int steps_taken() const { return t_; }
    bool done() const { return active_ && t_ >= cfg_.horizon; }

private:
    std::vector<double> start_episode(std::vector<double> params);

    EnvConfig cfg_;
    ObjectiveFn objective_;
    std::vector<double> params_;
    std::vector<double> history_;
    double f_ = 0.0;
    int t_ = 0;
    bool active_ = false;
};

struct Transition {
    std::vector<double> obs;
    std::vector<double> action;
    double reward = 0.0;
    std::vector<double> next_obs;
    bool done = false;
};

struct RolloutResult {
    std::vector<Transition> transitions;
    std::vector<double> best_params;
    double best_f = 0.0;
};

// Mean function of a policy: observation -> action mean.
using PolicyMeanFn = std::function<std::vector<double>(const std::vector<double>&)>;

// Runs the policy for `steps` env steps, resetting whenever an episode ends
// (and at the start: from `x0` if given, else randomly). deterministic=true
// uses the mean action without noise. Tracks the best point ever evaluated.
RolloutResult rollout(const PolicyMeanFn& mean_fn, double sigma, const EnvConfig& cfg,
                      const ObjectiveFn& objective, int steps, SplitMix64& rng,
                      bool deterministic, const std::vector<double>* x0 = nullptr);

}  // namespace qrl
