#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qrl/graph.hpp"
#include "qrl/neural.hpp"
#include "qrl/rlenv.hpp"

namespace qrl {

// Diagonal Gaussian policy with a fixed noise variance; only the mean is
// learned. sigma2 = e^-6 stays constant through training.
struct GaussianPolicy {
    Mlp actor;
    double sigma2 = 0.0024787521766663585;  // e^-6

    int action_dim() const { return actor.output_size(); }
    std::vector<double> mean(std::span<const double> obs) const { return actor.forward(obs); }
    std::pair<std::vector<double>, double> sample(std::span<const double> obs,
                                                  SplitMix64& rng) const;
    double log_prob(std::span<const double> mean, std::span<const double> action) const;
};

struct Critic {
    Mlp net;
    double value(std::span<const double> obs) const { return net.forward(obs)[0]; }
};

struct TrainConfig {
    int epochs = 750;
    int episodes_per_epoch = 128;  // episodes_per_epoch * horizon transitions per epoch
    int horizon = 64;              // T
    int history_len = 4;           // L
    double discount = 0.99;
    double gae_lambda = 0.97;
    double clip_ratio = 0.2;
    double kl_threshold = 0.015;
    int grad_epochs = 10;
    int minibatch = 256;
    double actor_lr = 3e-4;
    double critic_lr = 1e-3;
    std::uint64_t seed = 0;
    int checkpoint_every = 0;  // 0: final checkpoint only
};

// One epoch of experience, flattened; row t of episode e lives at e*horizon+t.
struct EpochBatch {
    int obs_dim = 0;
    int act_dim = 0;
    int horizon = 0;
    int episodes = 0;

    std::vector<double> obs;        // [N * obs_dim]
    std::vector<double> actions;    // [N * act_dim]
    std::vector<double> old_means;  // [N * act_dim], policy means at collection
    std::vector<double> rewards;    // [N]
    std::vector<double> logp;       // [N]
    std::vector<double> values;     // [N], filled by gae_advantages
    std::vector<double> raw_advantages;
    std::vector<double> advantages;  // normalized per epoch
    std::vector<double> returns;     // GAE return targets

    std::vector<double> episode_returns;  // per-episode reward sums
    double best_f = 0.0;
    std::vector<double> best_params;

    std::size_t size() const { return rewards.size(); }
};

using EnvFactory = std::function<Env()>;

// episodes_per_epoch episodes of horizon steps each, every episode freshly
// reset; per-episode RNG substreams make the batch independent of scheduling.
EpochBatch collect_epoch(const GaussianPolicy& policy, const EnvFactory& make_env,
                         const TrainConfig& cfg, std::uint64_t epoch_seed);

// Generalized advantage estimation with bootstrap value 0 at episode ends;
// advantages are normalized to zero mean / unit variance over the epoch.
void gae_advantages(EpochBatch& batch, const Critic& critic, double discount, double lambda);

struct UpdateDiagnostics {
    double mean_kl = 0.0;
    double clip_fraction = 0.0;
    double actor_loss = 0.0;
    double critic_loss = 0.0;
    int grad_epochs_run = 0;
};

// Clipped-surrogate PPO update with KL early stopping: gradient epochs run
// until the exact fixed-variance Gaussian KL, mean ||mu_new - mu_old||^2 /
// (2 sigma^2) over the batch, exceeds cfg.kl_threshold.
UpdateDiagnostics ppo_update(GaussianPolicy& policy, Critic& critic, Adam& actor_opt,
                             Adam& critic_opt, const EpochBatch& batch, const TrainConfig& cfg,
                             SplitMix64& shuffle_rng);

struct EpochMetrics {
    int epoch = 0;
    double mean_return = 0.0;
    double best_f = 0.0;
    double mean_kl = 0.0;
    double clip_fraction = 0.0;
    double actor_loss = 0.0;
    double critic_loss = 0.0;
};

// Everything needed to deploy (and resume) a trained policy.
struct PolicyCheckpoint {
    int schema_version = 1;
    int p = 1;
    int history_len = 4;
    GaussianPolicy policy;
    Critic critic;
    TrainConfig train_config;
    int epoch = 0;
    std::string training_graph_label;
    double best_f = 0.0;            // running reward statistics
    double last_mean_return = 0.0;
};

struct TrainResult {
    PolicyCheckpoint checkpoint;
    std::vector<EpochMetrics> metrics;
};

using EpochCallback = std::function<void(const EpochMetrics&)>;
using CheckpointSink = std::function<void(const PolicyCheckpoint&)>;

// Core training loop over an arbitrary objective (the QAOA objective in
// production, a quadratic toy in the smoke tests). `resume` continues from a
// saved checkpoint with fresh optimizer state.
TrainResult train_on_objective(const TrainConfig& cfg, const EnvConfig& env_cfg,
                               const ObjectiveFn& objective, const std::string& objective_label,
                               const EpochCallback& on_epoch = {},
                               const CheckpointSink& checkpoint_sink = {},
                               const PolicyCheckpoint* resume = nullptr);

// Paper protocol: depth-p QAOA objective on a training graph.
TrainResult train(const TrainConfig& cfg, const Graph& graph, int p,
                  const EpochCallback& on_epoch = {}, const CheckpointSink& checkpoint_sink = {},
                  const PolicyCheckpoint* resume = nullptr);

void save_checkpoint(const PolicyCheckpoint& ck, const std::string& path);
PolicyCheckpoint load_checkpoint(const std::string& path);

}  // namespace qrl
