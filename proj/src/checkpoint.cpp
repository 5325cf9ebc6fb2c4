#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "qrl/ppo.hpp"

namespace qrl {

namespace {

using nlohmann::json;

json net_to_json(const Mlp& net) {
    return json{{"sizes", net.sizes}, {"weights", net.weights}, {"biases", net.biases}};
}

Mlp net_from_json(const json& j) {
    Mlp net;
    net.sizes = j.at("sizes").get<std::vector<int>>();
    net.weights = j.at("weights").get<std::vector<std::vector<double>>>();
    net.biases = j.at("biases").get<std::vector<std::vector<double>>>();
    if (net.sizes.size() < 3 || net.weights.size() != net.sizes.size() - 1 ||
        net.biases.size() != net.weights.size())
        throw std::runtime_error("checkpoint: inconsistent network layout");
    for (std::size_t l = 0; l + 1 < net.sizes.size(); ++l) {
        const auto in = static_cast<std::size_t>(net.sizes[l]);
        const auto out = static_cast<std::size_t>(net.sizes[l + 1]);
        if (net.weights[l].size() != in * out || net.biases[l].size() != out)
            throw std::runtime_error("checkpoint: shape mismatch in layer " + std::to_string(l));
    }
    return net;
}

json config_to_json(const TrainConfig& c) {
    return json{{"epochs", c.epochs},
                {"episodes_per_epoch", c.episodes_per_epoch},
                {"horizon", c.horizon},
                {"history_len", c.history_len},
                {"discount", c.discount},
                {"gae_lambda", c.gae_lambda},
                {"clip_ratio", c.clip_ratio},
                {"kl_threshold", c.kl_threshold},
                {"grad_epochs", c.grad_epochs},
                {"minibatch", c.minibatch},
                {"actor_lr", c.actor_lr},
                {"critic_lr", c.critic_lr},
                {"seed", c.seed},
                {"checkpoint_every", c.checkpoint_every}};
}

TrainConfig config_from_json(const json& j) {
    TrainConfig c;
    c.epochs = j.at("epochs").get<int>();
    c.episodes_per_epoch = j.at("episodes_per_epoch").get<int>();
    c.horizon = j.at("horizon").get<int>();
    c.history_len = j.at("history_len").get<int>();
    c.discount = j.at("discount").get<double>();
    c.gae_lambda = j.at("gae_lambda").get<double>();
    c.clip_ratio = j.at("clip_ratio").get<double>();
    c.kl_threshold = j.at("kl_threshold").get<double>();
    c.grad_epochs = j.at("grad_epochs").get<int>();
    c.minibatch = j.at("minibatch").get<int>();
    c.actor_lr = j.at("actor_lr").get<double>();
    c.critic_lr = j.at("critic_lr").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.checkpoint_every = j.at("checkpoint_every").get<int>();
    return c;
}

}  // namespace

void save_checkpoint(const PolicyCheckpoint& ck, const std::string& path) {
    json j{{"schema_version", ck.schema_version},
           {"p", ck.p},
           {"L", ck.history_len},
           {"layer_sizes",
            json{{"actor", ck.policy.actor.sizes}, {"critic", ck.critic.net.sizes}}},
           {"actor", net_to_json(ck.policy.actor)},
           {"critic", net_to_json(ck.critic.net)},
           {"sigma2", ck.policy.sigma2},
           {"train_config", config_to_json(ck.train_config)},
           {"epoch", ck.epoch},
           {"training_graph_label", ck.training_graph_label},
           {"reward_stats",
            json{{"best_f", ck.best_f}, {"last_mean_return", ck.last_mean_return}}}};

    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

PolicyCheckpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("load_checkpoint: " + path + ": " + e.what());
    }

    PolicyCheckpoint ck;
    ck.schema_version = j.at("schema_version").get<int>();
    if (ck.schema_version != 1)
        throw std::runtime_error("load_checkpoint: unsupported schema version " +
                                 std::to_string(ck.schema_version));
    ck.p = j.at("p").get<int>();
    ck.history_len = j.at("L").get<int>();
    ck.policy.actor = net_from_json(j.at("actor"));
    ck.policy.sigma2 = j.at("sigma2").get<double>();
    ck.critic.net = net_from_json(j.at("critic"));
    ck.train_config = config_from_json(j.at("train_config"));
    ck.epoch = j.at("epoch").get<int>();
    ck.training_graph_label = j.at("training_graph_label").get<std::string>();
    if (j.contains("reward_stats")) {
        ck.best_f = j["reward_stats"].value("best_f", 0.0);
        ck.last_mean_return = j["reward_stats"].value("last_mean_return", 0.0);
    }

    // The actor must map (2p+1)L observations to 2p means, the critic to a
    // scalar; reject files whose payload disagrees with their declared p/L.
    const int obs_dim = (2 * ck.p + 1) * ck.history_len;
    if (ck.policy.actor.input_size() != obs_dim || ck.policy.actor.output_size() != 2 * ck.p ||
        ck.critic.net.input_size() != obs_dim || ck.critic.net.output_size() != 1)
        throw std::runtime_error("load_checkpoint: network shapes do not match p=" +
                                 std::to_string(ck.p) + ", L=" +
                                 std::to_string(ck.history_len));
    return ck;
}

}  // namespace qrl
