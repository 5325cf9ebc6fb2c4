#include "qrl/rlenv.hpp"

#include <cmath>
#include <stdexcept>

namespace qrl {

Env::Env(EnvConfig cfg, ObjectiveFn objective) : cfg_(cfg), objective_(std::move(objective)) {
    if (cfg_.p < 1 || cfg_.history_len < 1 || cfg_.horizon < 1)
        throw std::invalid_argument("env: p, L and T must all be >= 1");
}

std::vector<double> Env::start_episode(std::vector<double> params) {
    params_ = std::move(params);
    history_.assign(static_cast<std::size_t>(cfg_.obs_dim()), 0.0);
    f_ = objective_(params_);
    t_ = 0;
    active_ = true;
    return history_;
}

std::vector<double> Env::reset(SplitMix64& rng) {
    std::vector<double> params(static_cast<std::size_t>(cfg_.action_dim()));
    for (double& x : params) x = rng.uniform(cfg_.init_lo, cfg_.init_hi);
    return start_episode(std::move(params));
}

std::vector<double> Env::reset_at(std::vector<double> params) {
    if (params.size() != static_cast<std::size_t>(cfg_.action_dim()))
        throw std::invalid_argument("env: start point has wrong dimension");
    return start_episode(std::move(params));
}

StepResult Env::step(std::span<const double> action) {
    if (!active_) throw std::logic_error("env: step before reset");
    if (t_ >= cfg_.horizon) throw std::logic_error("env: episode already finished");
    if (action.size() != static_cast<std::size_t>(cfg_.action_dim()))
        throw std::invalid_argument("env: action has wrong dimension");
    for (double a : action)
        if (!std::isfinite(a)) throw std::invalid_argument("env: non-finite action");

    for (std::size_t i = 0; i < params_.size(); ++i) params_[i] += action[i];
    const double f_new = objective_(params_);
    const double reward = f_new - f_;
    f_ = f_new;

    // Shift the history one slot toward the past and fill the front with the
    // newest finite differences.
    const std::size_t slot = 2 * static_cast<std::size_t>(cfg_.p) + 1;
    for (std::size_t k = history_.size(); k-- > slot;) history_[k] = history_[k - slot];
    history_[0] = reward;
    for (std::size_t i = 0; i < action.size(); ++i) history_[1 + i] = action[i];

    ++t_;
    return StepResult{history_, reward, t_ >= cfg_.horizon, f_new};
}

RolloutResult rollout(const PolicyMeanFn& mean_fn, double sigma, const EnvConfig& cfg,
                      const ObjectiveFn& objective, int steps, SplitMix64& rng,
                      bool deterministic, const std::vector<double>* x0) {
    if (steps < 1) throw std::invalid_argument("rollout: steps must be >= 1");

    Env env(cfg, objective);
    RolloutResult result;
    result.best_f = -std::numeric_limits<double>::infinity();

    auto note_point = [&result, &env](double f) {
        if (f > result.best_f) {
            result.best_f = f;
            result.best_params = env.params();
        }
    };

    std::vector<double> obs =
        (x0 != nullptr) ? env.reset_at(*x0) : env.reset(rng);
    note_point(env.current_f());

    for (int t = 0; t < steps; ++t) {
        if (env.done()) {
            obs = env.reset(rng);
            note_point(env.current_f());
        }
        std::vector<double> action = mean_fn(obs);
        if (!deterministic)
            for (double& a : action) a += sigma * rng.normal();

        Transition tr;
        tr.obs = obs;
        tr.action = action;
        StepResult sr = env.step(action);
        tr.reward = sr.reward;
        tr.next_obs = sr.obs;
        tr.done = sr.done;
        note_point(sr.f);
        obs = std::move(sr.obs);
        result.transitions.push_back(std::move(tr));
    }
    return result;
}

}  // namespace qrl
