// qrl: generate Max-Cut instances, train the RL parameter-update policy,
// benchmark it against Nelder-Mead, and export depth-1 energy landscapes.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qrl/bench.hpp"
#include "qrl/graph.hpp"
#include "qrl/optimizers.hpp"
#include "qrl/ppo.hpp"
#include "qrl/qsim.hpp"

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// Defaults mirror the training/evaluation protocol; everything is overridable
// from the config file first, then from flags.
json default_config() {
    return json{
        {"train",
         {{"depth", 1},
          {"epochs", 750},
          {"episodes_per_epoch", 128},
          {"horizon", 64},
          {"history_len", 4},
          {"discount", 0.99},
          {"gae_lambda", 0.97},
          {"clip_ratio", 0.2},
          {"kl_threshold", 0.015},
          {"grad_epochs", 10},
          {"minibatch", 256},
          {"actor_lr", 3e-4},
          {"critic_lr", 1e-3},
          {"seed", 0},
          {"checkpoint_every", 0},
          {"graph", ""},  // path; empty -> the default training instance
          {"train_graph", {{"family", "erdos"}, {"n", 8}, {"edge_prob", 0.5}, {"seed", 42}}},
          {"checkpoint_out", "checkpoint.json"},
          {"metrics_out", "train_metrics.csv"}}},
        {"bench",
         {{"depths", {1, 2, 4}},
          {"attempts", 10},
          {"budget", 192},
          {"seed", 0},
          {"families", {"random", "community", "ladder"}},
          {"checkpoints", json::array()},
          {"out_dir", "."},
          {"jobs", 0}}},
        {"landscape", {{"resolution", 65}, {"out", "landscape.csv"}, {"seed", 0}}},
        {"generate", {{"seed", 1}, {"edge_prob", 0.5}}}};
}

json load_config(const std::string& path) {
    json cfg = default_config();
    if (path.empty()) return cfg;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    json file;
    in >> file;
    // Flat per-command sections; file values override defaults.
    for (auto& [section, values] : file.items()) {
        if (!cfg.contains(section)) throw std::runtime_error("unknown config section " + section);
        for (auto& [key, value] : values.items()) {
            if (!cfg[section].contains(key))
                throw std::runtime_error("unknown config key " + section + "." + key);
            cfg[section][key] = value;
        }
    }
    return cfg;
}

std::filesystem::path resolve_out(const std::string& name) {
    const char* dir = std::getenv("QRL_OUT_DIR");
    std::filesystem::path p(name);
    if (dir != nullptr && *dir != '\0' && p.is_relative()) return std::filesystem::path(dir) / p;
    return p;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

qrl::Graph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    qrl::Graph g = qrl::parse_graph(buf.str());
    g.label = std::filesystem::path(path).stem().string();
    return g;
}

int cmd_generate(const std::string& family, int n, int k, double edge_prob, std::uint64_t seed,
                 const std::string& out) {
    qrl::Graph g;
    if (family == "erdos")
        g = qrl::gen_erdos_renyi(n, edge_prob, seed);
    else if (family == "ladder")
        g = qrl::gen_ladder(n);
    else if (family == "barbell")
        g = qrl::gen_barbell(n);
    else if (family == "caveman")
        g = qrl::gen_caveman(n, k);
    else
        throw CLI::ValidationError("--family must be erdos|ladder|barbell|caveman");

    const std::string text = qrl::serialize_graph(g);
    if (out.empty()) {
        std::cout << text;
    } else {
        const auto path = resolve_out(out);
        write_file(path, text);
        std::cout << "wrote " << g.label << " (" << g.n << " vertices, " << g.edge_count()
                  << " edges) to " << path.string() << "\n";
    }
    return 0;
}

std::string metrics_csv_header(std::uint64_t seed) {
    return "# seed=" + std::to_string(seed) +
           "\nepoch,mean_return,best_f,mean_kl,clip_fraction,actor_loss,critic_loss\n";
}

std::string metrics_csv_row(const qrl::EpochMetrics& m) {
    std::ostringstream row;
    row << m.epoch << ',' << fmt(m.mean_return) << ',' << fmt(m.best_f) << ',' << fmt(m.mean_kl)
        << ',' << fmt(m.clip_fraction) << ',' << fmt(m.actor_loss) << ',' << fmt(m.critic_loss)
        << '\n';
    return row.str();
}

int cmd_train(const json& cfg) {
    qrl::TrainConfig tc;
    tc.epochs = cfg.at("epochs").get<int>();
    tc.episodes_per_epoch = cfg.at("episodes_per_epoch").get<int>();
    tc.horizon = cfg.at("horizon").get<int>();
    tc.history_len = cfg.at("history_len").get<int>();
    tc.discount = cfg.at("discount").get<double>();
    tc.gae_lambda = cfg.at("gae_lambda").get<double>();
    tc.clip_ratio = cfg.at("clip_ratio").get<double>();
    tc.kl_threshold = cfg.at("kl_threshold").get<double>();
    tc.grad_epochs = cfg.at("grad_epochs").get<int>();
    tc.minibatch = cfg.at("minibatch").get<int>();
    tc.actor_lr = cfg.at("actor_lr").get<double>();
    tc.critic_lr = cfg.at("critic_lr").get<double>();
    tc.seed = cfg.at("seed").get<std::uint64_t>();
    tc.checkpoint_every = cfg.at("checkpoint_every").get<int>();

    qrl::Graph g;
    const std::string graph_path = cfg.at("graph").get<std::string>();
    if (!graph_path.empty()) {
        g = load_graph_file(graph_path);
    } else {
        const json& tg = cfg.at("train_graph");
        g = qrl::gen_erdos_renyi(tg.at("n").get<int>(), tg.at("edge_prob").get<double>(),
                                 tg.at("seed").get<std::uint64_t>());
    }

    const int depth = cfg.at("depth").get<int>();
    const auto ck_path = resolve_out(cfg.at("checkpoint_out").get<std::string>());
    const auto metrics_path = resolve_out(cfg.at("metrics_out").get<std::string>());

    std::ostringstream metrics;
    metrics << metrics_csv_header(tc.seed);

    std::cout << "training on " << g.label << " (" << g.n << " vertices, " << g.edge_count()
              << " edges) at p=" << depth << " for " << tc.epochs << " epochs\n";

    const auto result = qrl::train(
        tc, g, depth,
        [&metrics](const qrl::EpochMetrics& m) {
            metrics << metrics_csv_row(m);
            std::cout << "epoch " << m.epoch << ": mean_return=" << fmt(m.mean_return)
                      << " best_f=" << fmt(m.best_f) << " kl=" << fmt(m.mean_kl) << "\n";
        },
        [&ck_path](const qrl::PolicyCheckpoint& ck) {
            qrl::save_checkpoint(ck, ck_path.string());
        });

    write_file(metrics_path, metrics.str());
    std::cout << "checkpoint: " << ck_path.string() << "\nmetrics: " << metrics_path.string()
              << "\n";
    return 0;
}

int cmd_bench(const json& cfg, const std::vector<std::string>& checkpoint_paths) {
    qrl::BenchSettings settings;
    settings.depths = cfg.at("depths").get<std::vector<int>>();
    settings.attempts = cfg.at("attempts").get<int>();
    settings.budget = cfg.at("budget").get<std::uint64_t>();
    settings.seed = cfg.at("seed").get<std::uint64_t>();
    settings.jobs = cfg.at("jobs").get<int>();

    settings.families.clear();
    for (const auto& name : cfg.at("families").get<std::vector<std::string>>()) {
        if (name == "random")
            settings.families.insert(qrl::Family::random);
        else if (name == "community")
            settings.families.insert(qrl::Family::community);
        else if (name == "ladder")
            settings.families.insert(qrl::Family::ladder);
        else
            throw std::runtime_error("unknown family " + name);
    }

    std::vector<std::string> paths = checkpoint_paths;
    if (paths.empty()) paths = cfg.at("checkpoints").get<std::vector<std::string>>();
    if (paths.empty()) throw std::runtime_error("bench needs at least one --checkpoint");

    std::vector<qrl::PolicyCheckpoint> loaded;
    loaded.reserve(paths.size());
    for (const auto& path : paths) loaded.push_back(qrl::load_checkpoint(path));

    std::map<int, const qrl::PolicyCheckpoint*> by_depth;
    for (const auto& ck : loaded) {
        if (!by_depth.emplace(ck.p, &ck).second)
            throw std::runtime_error("two checkpoints for depth " + std::to_string(ck.p));
    }
    for (int p : settings.depths)
        if (!by_depth.contains(p))
            throw std::runtime_error("no checkpoint for requested depth " + std::to_string(p));

    std::cout << "building test suite...\n";
    const qrl::TestSuite suite = qrl::build_g_test();
    std::cout << "running benchmark on " << suite.instances.size() << " instances, depths";
    for (int p : settings.depths) std::cout << ' ' << p;
    std::cout << ", " << settings.attempts << " attempts, budget " << settings.budget << "\n";

    const qrl::BenchReport report = qrl::run_benchmark(suite, by_depth, settings);

    const std::string out_dir = cfg.at("out_dir").get<std::string>();
    const auto report_path = resolve_out(out_dir) / "bench_report.csv";
    const auto summary_path = resolve_out(out_dir) / "bench_summary.csv";
    write_file(report_path, report.report_csv(settings.seed));
    write_file(summary_path, report.summary_csv(settings.seed));
    std::cout << "report: " << report_path.string() << "\nsummary: " << summary_path.string()
              << "\n";

    if (!report.skipped.empty()) {
        std::cerr << "partial report, " << report.skipped.size() << " instance(s) skipped\n";
        return 3;
    }
    return 0;
}

int cmd_landscape(const std::string& graph_path, int resolution, const std::string& out,
                  std::uint64_t seed) {
    const qrl::Graph g = load_graph_file(graph_path);
    const qrl::CostDiagonal diag = qrl::cost_diagonal(g);
    const std::vector<double> grid = qrl::landscape_grid(diag, resolution);

    std::ostringstream body;
    body << "# seed=" << seed << '\n';
    qrl::write_landscape_csv(body, grid, resolution);

    const auto path = resolve_out(out);
    write_file(path, body.str());
    std::cout << "landscape (" << resolution << "x" << resolution << ") for " << g.label << ": "
              << path.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QAOA Max-Cut parameter optimization: RL policy training and benchmarks"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (sections per command)");

    // generate
    auto* generate = app.add_subcommand("generate", "write a graph instance file");
    std::string family;
    int gen_n = 8, gen_k = 3;
    double gen_p = 0.5;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    generate->add_option("--family", family, "erdos|ladder|barbell|caveman")->required();
    generate->add_option("--n", gen_n, "vertex-count parameter of the family");
    generate->add_option("--k", gen_k, "clique size (caveman only)");
    generate->add_option("--p", gen_p, "edge probability (erdos only)");
    generate->add_option("--seed", gen_seed, "generator seed (erdos only)");
    generate->add_option("--out", gen_out, "output path (stdout when omitted)");

    // train
    auto* train = app.add_subcommand("train", "train the PPO policy");
    std::map<std::string, std::string> train_overrides;
    int t_epochs = -1, t_depth = -1, t_episodes = -1, t_ckevery = -1;
    std::int64_t t_seed = -1;
    std::string t_graph, t_ckout, t_metrics;
    train->add_option("--epochs", t_epochs, "training epochs");
    train->add_option("--depth", t_depth, "QAOA depth p");
    train->add_option("--episodes", t_episodes, "episodes per epoch");
    train->add_option("--seed", t_seed, "master seed");
    train->add_option("--graph", t_graph, "training graph file (default: G_R(8, 0.5))");
    train->add_option("--checkpoint-out", t_ckout, "checkpoint output path");
    train->add_option("--metrics-out", t_metrics, "metrics CSV output path");
    train->add_option("--checkpoint-every", t_ckevery, "checkpoint cadence in epochs");

    // bench
    auto* bench = app.add_subcommand("bench", "run the optimizer comparison");
    std::vector<std::string> b_checkpoints;
    std::vector<int> b_depths;
    std::vector<std::string> b_families;
    int b_attempts = -1, b_jobs = -1;
    std::int64_t b_budget = -1, b_seed = -1;
    std::string b_outdir;
    bench->add_option("--checkpoint", b_checkpoints, "policy checkpoint(s), one per depth");
    bench->add_option("--depths", b_depths, "depths to benchmark")->delimiter(',');
    bench->add_option("--families", b_families, "subset of random,community,ladder")
        ->delimiter(',');
    bench->add_option("--attempts", b_attempts, "attempts per optimizer");
    bench->add_option("--budget", b_budget, "evaluations per attempt");
    bench->add_option("--seed", b_seed, "master seed");
    bench->add_option("--out-dir", b_outdir, "report output directory");
    bench->add_option("--jobs", b_jobs, "max concurrent benchmark cells");

    // landscape
    auto* landscape = app.add_subcommand("landscape", "export a depth-1 energy landscape CSV");
    std::string l_graph, l_out;
    int l_resolution = -1;
    landscape->add_option("--graph", l_graph, "graph file")->required();
    landscape->add_option("--resolution", l_resolution, "grid resolution per axis");
    landscape->add_option("--out", l_out, "output CSV path");

    // show-config
    auto* show = app.add_subcommand("show-config", "print the effective configuration");

    CLI11_PARSE(app, argc, argv);

    try {
        json cfg = load_config(config_path);

        if (*generate) return cmd_generate(family, gen_n, gen_k, gen_p, gen_seed, gen_out);

        if (*train) {
            json& section = cfg["train"];
            if (t_epochs >= 0) section["epochs"] = t_epochs;
            if (t_depth >= 0) section["depth"] = t_depth;
            if (t_episodes >= 0) section["episodes_per_epoch"] = t_episodes;
            if (t_seed >= 0) section["seed"] = static_cast<std::uint64_t>(t_seed);
            if (t_ckevery >= 0) section["checkpoint_every"] = t_ckevery;
            if (!t_graph.empty()) section["graph"] = t_graph;
            if (!t_ckout.empty()) section["checkpoint_out"] = t_ckout;
            if (!t_metrics.empty()) section["metrics_out"] = t_metrics;
            return cmd_train(section);
        }

        if (*bench) {
            json& section = cfg["bench"];
            if (!b_depths.empty()) section["depths"] = b_depths;
            if (!b_families.empty()) section["families"] = b_families;
            if (b_attempts >= 0) section["attempts"] = b_attempts;
            if (b_budget >= 0) section["budget"] = static_cast<std::uint64_t>(b_budget);
            if (b_seed >= 0) section["seed"] = static_cast<std::uint64_t>(b_seed);
            if (b_jobs >= 0) section["jobs"] = b_jobs;
            if (!b_outdir.empty()) section["out_dir"] = b_outdir;
            return cmd_bench(section, b_checkpoints);
        }

        if (*landscape) {
            json& section = cfg["landscape"];
            if (l_resolution >= 0) section["resolution"] = l_resolution;
            if (!l_out.empty()) section["out"] = l_out;
            return cmd_landscape(l_graph, section.at("resolution").get<int>(),
                                 section.at("out").get<std::string>(),
                                 section.at("seed").get<std::uint64_t>());
        }

        if (*show) {
            std::cout << cfg.dump(2) << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
