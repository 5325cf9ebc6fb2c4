#include "qrl/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "qrl/qsim.hpp"

namespace qrl {

namespace {

constexpr double kTwoPi = 6.283185307179586;

std::vector<int> actor_sizes(int obs_dim, int act_dim) { return {obs_dim, 64, 64, act_dim}; }
std::vector<int> critic_sizes(int obs_dim) { return {obs_dim, 64, 64, 1}; }

}  // namespace

std::pair<std::vector<double>, double> GaussianPolicy::sample(std::span<const double> obs,
                                                              SplitMix64& rng) const {
    std::vector<double> mu = actor.forward(obs);
    const double sigma = std::sqrt(sigma2);
    std::vector<double> action(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) action[i] = mu[i] + sigma * rng.normal();
    const double logp = log_prob(mu, action);
    return {std::move(action), logp};
}

double GaussianPolicy::log_prob(std::span<const double> mean,
                                std::span<const double> action) const {
    if (mean.size() != action.size())
        throw std::invalid_argument("policy: mean/action dimension mismatch");
    double quad = 0.0;
    for (std::size_t i = 0; i < mean.size(); ++i) {
        const double d = action[i] - mean[i];
        quad += d * d;
    }
    return -0.5 * (quad / sigma2 + static_cast<double>(mean.size()) * std::log(kTwoPi * sigma2));
}

EpochBatch collect_epoch(const GaussianPolicy& policy, const EnvFactory& make_env,
                         const TrainConfig& cfg, std::uint64_t epoch_seed) {
    const int episodes = cfg.episodes_per_epoch;
    const int horizon = cfg.horizon;
    if (episodes < 1 || horizon < 1)
        throw std::invalid_argument("collect_epoch: episodes and horizon must be >= 1");

    EpochBatch batch;
    batch.act_dim = policy.action_dim();
    batch.horizon = horizon;
    batch.episodes = episodes;

    {
        Env probe = make_env();
        batch.obs_dim = probe.config().obs_dim();
        if (probe.config().horizon != horizon)
            throw std::invalid_argument("collect_epoch: env horizon differs from train config");
        if (probe.config().action_dim() != batch.act_dim)
            throw std::invalid_argument("collect_epoch: env/policy action dimension mismatch");
    }

    const std::size_t n = static_cast<std::size_t>(episodes) * horizon;
    batch.obs.resize(n * batch.obs_dim);
    batch.actions.resize(n * batch.act_dim);
    batch.old_means.resize(n * batch.act_dim);
    batch.rewards.resize(n);
    batch.logp.resize(n);
    batch.episode_returns.assign(static_cast<std::size_t>(episodes), 0.0);

    std::vector<double> ep_best_f(static_cast<std::size_t>(episodes),
                                  -std::numeric_limits<double>::infinity());
    std::vector<std::vector<double>> ep_best_params(static_cast<std::size_t>(episodes));

    const double sigma = std::sqrt(policy.sigma2);

#pragma omp parallel for schedule(dynamic)
    for (int e = 0; e < episodes; ++e) {
        SplitMix64 rng(derive_seed(epoch_seed, static_cast<std::uint64_t>(e)));
        Env env = make_env();
        std::vector<double> obs = env.reset(rng);
        double best_f = env.current_f();
        std::vector<double> best_params = env.params();
        double ep_return = 0.0;

        for (int t = 0; t < horizon; ++t) {
            const std::size_t row = static_cast<std::size_t>(e) * horizon + t;
            std::vector<double> mu = policy.actor.forward(obs);
            std::vector<double> action(mu.size());
            for (std::size_t i = 0; i < mu.size(); ++i) action[i] = mu[i] + sigma * rng.normal();

            std::copy(obs.begin(), obs.end(), batch.obs.begin() + row * batch.obs_dim);
            std::copy(action.begin(), action.end(), batch.actions.begin() + row * batch.act_dim);
            std::copy(mu.begin(), mu.end(), batch.old_means.begin() + row * batch.act_dim);
            batch.logp[row] = policy.log_prob(mu, action);

            StepResult sr = env.step(action);
            batch.rewards[row] = sr.reward;
            ep_return += sr.reward;
            if (sr.f > best_f) {
                best_f = sr.f;
                best_params = env.params();
            }
            obs = std::move(sr.obs);
        }
        batch.episode_returns[static_cast<std::size_t>(e)] = ep_return;
        ep_best_f[static_cast<std::size_t>(e)] = best_f;
        ep_best_params[static_cast<std::size_t>(e)] = std::move(best_params);
    }

    // Reduce per-episode bests in index order (thread-count independent).
    batch.best_f = -std::numeric_limits<double>::infinity();
    for (int e = 0; e < episodes; ++e) {
        if (ep_best_f[static_cast<std::size_t>(e)] > batch.best_f) {
            batch.best_f = ep_best_f[static_cast<std::size_t>(e)];
            batch.best_params = ep_best_params[static_cast<std::size_t>(e)];
        }
    }
    return batch;
}

void gae_advantages(EpochBatch& batch, const Critic& critic, double discount, double lambda) {
    const std::size_t n = batch.size();
    if (n == 0) throw std::invalid_argument("gae_advantages: empty batch");

    batch.values.resize(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        const std::size_t row = static_cast<std::size_t>(i);
        batch.values[row] = critic.value(
            std::span<const double>(batch.obs.data() + row * batch.obs_dim,
                                    static_cast<std::size_t>(batch.obs_dim)));
    }

    batch.raw_advantages.assign(n, 0.0);
    batch.returns.assign(n, 0.0);
    for (int e = 0; e < batch.episodes; ++e) {
        double gae = 0.0;
        for (int t = batch.horizon - 1; t >= 0; --t) {
            const std::size_t row = static_cast<std::size_t>(e) * batch.horizon + t;
            // Episodes are truncations; the value beyond the horizon is 0.
            const double next_value =
                (t + 1 < batch.horizon) ? batch.values[row + 1] : 0.0;
            const double delta = batch.rewards[row] + discount * next_value - batch.values[row];
            gae = delta + discount * lambda * gae;
            batch.raw_advantages[row] = gae;
            batch.returns[row] = gae + batch.values[row];
        }
    }

    double mean = 0.0;
    for (double a : batch.raw_advantages) mean += a;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double a : batch.raw_advantages) var += (a - mean) * (a - mean);
    var /= static_cast<double>(n);
    const double std_dev = std::sqrt(var);

    batch.advantages.assign(n, 0.0);
    if (std_dev > 1e-12)
        for (std::size_t i = 0; i < n; ++i)
            batch.advantages[i] = (batch.raw_advantages[i] - mean) / std_dev;
}

namespace {

double mean_kl_to_old(const GaussianPolicy& policy, const EpochBatch& batch) {
    const std::size_t n = batch.size();
    std::vector<double> per_row(n, 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        const std::size_t row = static_cast<std::size_t>(i);
        const std::vector<double> mu = policy.actor.forward(
            std::span<const double>(batch.obs.data() + row * batch.obs_dim,
                                    static_cast<std::size_t>(batch.obs_dim)));
        double sq = 0.0;
        for (int j = 0; j < batch.act_dim; ++j) {
            const double d = mu[static_cast<std::size_t>(j)] -
                             batch.old_means[row * batch.act_dim + static_cast<std::size_t>(j)];
            sq += d * d;
        }
        per_row[row] = sq;
    }
    double total = 0.0;
    for (double v : per_row) total += v;
    return total / (2.0 * policy.sigma2 * static_cast<double>(n));
}

}  // namespace

UpdateDiagnostics ppo_update(GaussianPolicy& policy, Critic& critic, Adam& actor_opt,
                             Adam& critic_opt, const EpochBatch& batch, const TrainConfig& cfg,
                             SplitMix64& shuffle_rng) {
    UpdateDiagnostics diag;
    const std::size_t n = batch.size();
    if (n == 0) throw std::invalid_argument("ppo_update: empty batch");
    if (batch.advantages.size() != n || batch.returns.size() != n)
        throw std::invalid_argument("ppo_update: advantages missing, run gae_advantages first");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    MlpGrads actor_grads = MlpGrads::zeros_like(policy.actor);
    MlpGrads critic_grads = MlpGrads::zeros_like(critic.net);
    ForwardCache cache;

    const double clip_lo = 1.0 - cfg.clip_ratio;
    const double clip_hi = 1.0 + cfg.clip_ratio;

    for (int ge = 0; ge < cfg.grad_epochs; ++ge) {
        // Fisher-Yates with the seeded stream; std::shuffle is not portable.
        for (std::size_t i = n; i-- > 1;) {
            const std::size_t j =
                static_cast<std::size_t>(shuffle_rng.uniform() * static_cast<double>(i + 1));
            std::swap(order[i], order[j]);
        }

        double epoch_actor_loss = 0.0;
        double epoch_critic_loss = 0.0;
        std::size_t epoch_clipped = 0;
        std::size_t minibatches = 0;

        for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(cfg.minibatch)) {
            const std::size_t stop = std::min(n, start + static_cast<std::size_t>(cfg.minibatch));
            const double inv_m = 1.0 / static_cast<double>(stop - start);

            actor_grads.zero();
            critic_grads.zero();
            double actor_loss = 0.0;
            double critic_loss = 0.0;

            for (std::size_t s = start; s < stop; ++s) {
                const std::size_t row = order[s];
                const std::span<const double> obs(batch.obs.data() + row * batch.obs_dim,
                                                  static_cast<std::size_t>(batch.obs_dim));
                const std::span<const double> action(
                    batch.actions.data() + row * batch.act_dim,
                    static_cast<std::size_t>(batch.act_dim));
                const double adv = batch.advantages[row];

                // Actor: clipped surrogate.
                const std::vector<double> mu = forward_cached(policy.actor, obs, cache);
                const double logp_new = policy.log_prob(mu, action);
                const double ratio = std::exp(logp_new - batch.logp[row]);
                const double pg1 = ratio * adv;
                const double pg2 = std::clamp(ratio, clip_lo, clip_hi) * adv;
                actor_loss -= std::min(pg1, pg2) * inv_m;
                if (ratio < clip_lo || ratio > clip_hi) ++epoch_clipped;

                if (pg1 <= pg2) {
                    // Gradient flows through the unclipped branch only.
                    std::vector<double> up(static_cast<std::size_t>(batch.act_dim));
                    const double coef = -adv * ratio * inv_m / policy.sigma2;
                    for (int j = 0; j < batch.act_dim; ++j)
                        up[static_cast<std::size_t>(j)] =
                            coef * (action[static_cast<std::size_t>(j)] -
                                    mu[static_cast<std::size_t>(j)]);
                    backward(policy.actor, cache, up, actor_grads);
                }

                // Critic: squared-error regression on the GAE returns.
                const std::vector<double> v = forward_cached(critic.net, obs, cache);
                const double diff = v[0] - batch.returns[row];
                critic_loss += diff * diff * inv_m;
                const std::vector<double> vup = {2.0 * diff * inv_m};
                backward(critic.net, cache, vup, critic_grads);
            }

            actor_opt.step(policy.actor, actor_grads);
            critic_opt.step(critic.net, critic_grads);
            epoch_actor_loss += actor_loss;
            epoch_critic_loss += critic_loss;
            ++minibatches;
        }

        diag.actor_loss = epoch_actor_loss / static_cast<double>(minibatches);
        diag.critic_loss = epoch_critic_loss / static_cast<double>(minibatches);
        diag.clip_fraction = static_cast<double>(epoch_clipped) / static_cast<double>(n);
        diag.grad_epochs_run = ge + 1;
        diag.mean_kl = mean_kl_to_old(policy, batch);
        if (diag.mean_kl > cfg.kl_threshold) break;
    }
    return diag;
}

namespace {

PolicyCheckpoint init_checkpoint(const TrainConfig& cfg, const EnvConfig& env_cfg,
                                 const std::string& label) {
    PolicyCheckpoint ck;
    ck.p = env_cfg.p;
    ck.history_len = env_cfg.history_len;
    ck.train_config = cfg;
    ck.training_graph_label = label;
    SplitMix64 actor_rng(derive_seed(cfg.seed, 0x0a));
    SplitMix64 critic_rng(derive_seed(cfg.seed, 0x0b));
    ck.policy.actor = Mlp::init(actor_sizes(env_cfg.obs_dim(), env_cfg.action_dim()), actor_rng);
    ck.critic.net = Mlp::init(critic_sizes(env_cfg.obs_dim()), critic_rng);
    ck.best_f = -std::numeric_limits<double>::infinity();
    return ck;
}

}  // namespace

TrainResult train_on_objective(const TrainConfig& cfg, const EnvConfig& env_cfg,
                               const ObjectiveFn& objective, const std::string& objective_label,
                               const EpochCallback& on_epoch, const CheckpointSink& checkpoint_sink,
                               const PolicyCheckpoint* resume) {
    if (env_cfg.horizon != cfg.horizon || env_cfg.history_len != cfg.history_len)
        throw std::invalid_argument("train: env config disagrees with train config");

    TrainResult result;
    if (resume != nullptr) {
        if (resume->p != env_cfg.p || resume->history_len != env_cfg.history_len)
            throw std::invalid_argument("train: resume checkpoint p/L mismatch");
        result.checkpoint = *resume;
        result.checkpoint.train_config = cfg;
    } else {
        result.checkpoint = init_checkpoint(cfg, env_cfg, objective_label);
    }
    PolicyCheckpoint& ck = result.checkpoint;

    Adam actor_opt(cfg.actor_lr);
    Adam critic_opt(cfg.critic_lr);
    EnvFactory factory = [&env_cfg, &objective]() { return Env(env_cfg, objective); };

    const int first_epoch = ck.epoch;
    for (int epoch = first_epoch; epoch < first_epoch + cfg.epochs; ++epoch) {
        EpochBatch batch =
            collect_epoch(ck.policy, factory, cfg, derive_seed(cfg.seed, 1000 + epoch));
        gae_advantages(batch, ck.critic, cfg.discount, cfg.gae_lambda);
        SplitMix64 shuffle_rng(derive_seed(cfg.seed, 2000000 + epoch));
        const UpdateDiagnostics diag =
            ppo_update(ck.policy, ck.critic, actor_opt, critic_opt, batch, cfg, shuffle_rng);

        EpochMetrics m;
        m.epoch = epoch + 1;
        double mean_return = 0.0;
        for (double r : batch.episode_returns) mean_return += r;
        m.mean_return = mean_return / static_cast<double>(batch.episode_returns.size());
        m.best_f = batch.best_f;
        m.mean_kl = diag.mean_kl;
        m.clip_fraction = diag.clip_fraction;
        m.actor_loss = diag.actor_loss;
        m.critic_loss = diag.critic_loss;

        if (!std::isfinite(m.mean_return) || !std::isfinite(diag.actor_loss) ||
            !std::isfinite(diag.critic_loss) || !std::isfinite(diag.mean_kl))
            throw std::runtime_error("train: non-finite diagnostics at epoch " +
                                     std::to_string(m.epoch) + " (actor_loss=" +
                                     std::to_string(diag.actor_loss) + ", critic_loss=" +
                                     std::to_string(diag.critic_loss) + ")");

        ck.epoch = epoch + 1;
        ck.last_mean_return = m.mean_return;
        if (batch.best_f > ck.best_f) ck.best_f = batch.best_f;

        result.metrics.push_back(m);
        if (on_epoch) on_epoch(m);
        if (checkpoint_sink && cfg.checkpoint_every > 0 &&
            (epoch + 1 - first_epoch) % cfg.checkpoint_every == 0)
            checkpoint_sink(ck);
    }
    if (checkpoint_sink) checkpoint_sink(ck);
    return result;
}

TrainResult train(const TrainConfig& cfg, const Graph& graph, int p, const EpochCallback& on_epoch,
                  const CheckpointSink& checkpoint_sink, const PolicyCheckpoint* resume) {
    if (p < 1) throw std::invalid_argument("train: depth must be >= 1");
    const CostDiagonal diag = cost_diagonal(graph);

    EnvConfig env_cfg;
    env_cfg.p = p;
    env_cfg.history_len = cfg.history_len;
    env_cfg.horizon = cfg.horizon;

    auto counter = std::make_shared<EvalCounter>();
    ObjectiveFn objective = [diag, counter](std::span<const double> x) {
        return evaluate(diag, QaoaParams::from_flat(std::vector<double>(x.begin(), x.end())),
                        *counter);
    };
    return train_on_objective(cfg, env_cfg, objective, graph.label, on_epoch, checkpoint_sink,
                              resume);
}

}  // namespace qrl
