#include "qrl/bench.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "qrl/qsim.hpp"

namespace qrl {

namespace {

// All 97 instances fit in 22 qubits; larger user-supplied graphs are skipped.
constexpr int kBenchQubitCap = 22;

constexpr OptimizerKind kOptimizers[] = {OptimizerKind::nelder_mead, OptimizerKind::rl,
                                         OptimizerKind::rlnm};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// Quartiles with linear interpolation between closest ranks.
double quantile(std::vector<double> sorted, double q) {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

const char* family_name(Family f) {
    switch (f) {
        case Family::random: return "random";
        case Family::community: return "community";
        case Family::ladder: return "ladder";
    }
    return "?";
}

TestSuite build_g_test() {
    TestSuite suite;
    auto add = [&suite](Graph g, Family family) {
        CutResult copt = brute_force_maxcut(g);
        suite.instances.push_back(Instance{std::move(g), family, copt});
    };

    for (int n : {8, 12, 16, 20})
        for (double e_p : {0.5, 0.6, 0.7, 0.8})
            for (std::uint64_t seed : {1, 2, 3, 4})
                add(gen_erdos_renyi(n, e_p, seed), Family::random);

    for (int c : {3, 4, 5}) add(gen_caveman(c, 4), Family::community);
    for (int c : {3, 5, 7}) add(gen_caveman(c, 3), Family::community);
    for (int k = 3; k <= 10; ++k) add(gen_caveman(2, k), Family::community);
    for (int b = 3; b <= 11; ++b) add(gen_barbell(b), Family::community);

    for (int len = 2; len <= 11; ++len) add(gen_ladder(len), Family::ladder);

    return suite;
}

double approximation_ratio(double f, const CutResult& copt) {
    if (copt.value <= 0)
        throw std::invalid_argument("approximation_ratio: C_opt must be positive");
    return f / static_cast<double>(copt.value);
}

double optimality_ratio(double f, double f_opt) {
    if (!(f_opt > 0.0)) throw std::invalid_argument("optimality_ratio: f_opt must be positive");
    if (f > f_opt)
        throw std::logic_error("optimality_ratio: f exceeds f_opt, bookkeeping is corrupt");
    return f / f_opt;
}

double gap_reduction(const std::vector<double>& tau_baseline,
                     const std::vector<double>& tau_method) {
    if (tau_baseline.empty() || tau_baseline.size() != tau_method.size())
        throw std::invalid_argument("gap_reduction: need matching non-empty tau sets");

    std::vector<double> ratios;
    for (std::size_t i = 0; i < tau_baseline.size(); ++i) {
        const double gb = 1.0 - tau_baseline[i];
        const double gm = 1.0 - tau_method[i];
        if (gm == 0.0 && gb == 0.0) continue;
        if (gm == 0.0)
            ratios.push_back(std::numeric_limits<double>::infinity());
        else
            ratios.push_back(gb / gm);
    }
    if (ratios.empty()) return std::numeric_limits<double>::quiet_NaN();

    std::sort(ratios.begin(), ratios.end());
    const std::size_t m = ratios.size();
    if (m % 2 == 1) return ratios[m / 2];
    return 0.5 * (ratios[m / 2 - 1] + ratios[m / 2]);
}

std::string BenchReport::report_csv(std::uint64_t seed) const {
    std::ostringstream out;
    out << "# seed=" << seed << '\n';
    out << "instance_label,family,n,p,optimizer,attempt,best_f,c_opt,f_opt,eta,tau\n";
    for (const BenchRow& r : rows) {
        out << r.instance_label << ',' << family_name(r.family) << ',' << r.n << ',' << r.p << ','
            << optimizer_name(r.optimizer) << ',' << r.attempt << ',' << fmt(r.best_f) << ','
            << r.c_opt << ',' << fmt(r.f_opt) << ',' << fmt(r.eta) << ',' << fmt(r.tau) << '\n';
    }
    for (const std::string& s : skipped) out << "# skipped: " << s << '\n';
    return out.str();
}

std::string BenchReport::summary_csv(std::uint64_t seed) const {
    std::ostringstream out;
    out << "# seed=" << seed << '\n';
    out << "family,p,optimizer,mean_tau,median_tau,q1,q3,gap_reduction_vs_nm\n";
    for (const SummaryRow& r : summary) {
        out << family_name(r.family) << ',' << r.p << ',' << optimizer_name(r.optimizer) << ','
            << fmt(r.mean_tau) << ',' << fmt(r.median_tau) << ',' << fmt(r.q1) << ',' << fmt(r.q3)
            << ',' << fmt(r.gap_reduction_vs_nm) << '\n';
    }
    return out.str();
}

BenchReport run_benchmark(const TestSuite& suite,
                          const std::map<int, const PolicyCheckpoint*>& checkpoints,
                          const BenchSettings& settings) {
    for (int p : settings.depths) {
        auto it = checkpoints.find(p);
        if (it == checkpoints.end() || it->second == nullptr)
            throw std::invalid_argument("run_benchmark: no checkpoint for depth " +
                                        std::to_string(p));
        if (it->second->p != p)
            throw std::invalid_argument("run_benchmark: checkpoint trained at p=" +
                                        std::to_string(it->second->p) + " registered for depth " +
                                        std::to_string(p));
    }

    BenchReport report;

    struct Cell {
        int instance_idx;
        int depth;
        std::uint64_t cell_seed;
    };
    std::vector<Cell> cells;
    for (std::size_t idx = 0; idx < suite.instances.size(); ++idx) {
        const Instance& inst = suite.instances[idx];
        if (!settings.families.contains(inst.family)) continue;
        if (inst.graph.n > kBenchQubitCap) {
            report.skipped.push_back(inst.graph.label + " (n=" + std::to_string(inst.graph.n) +
                                     " exceeds " + std::to_string(kBenchQubitCap) + " qubits)");
            continue;
        }
        for (int p : settings.depths)
            cells.push_back(Cell{static_cast<int>(idx), p,
                                 derive_seed(derive_seed(settings.seed, idx),
                                             static_cast<std::uint64_t>(p))});
    }

    // One MultiStartResult per optimizer per cell, computed concurrently,
    // reduced in deterministic cell order afterwards.
    std::vector<std::array<MultiStartResult, 3>> results(cells.size());

#pragma omp parallel for schedule(dynamic) num_threads( \
        settings.jobs > 0 ? settings.jobs : omp_get_max_threads())
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(cells.size()); ++c) {
        const Cell& cell = cells[static_cast<std::size_t>(c)];
        const Instance& inst = suite.instances[static_cast<std::size_t>(cell.instance_idx)];
        const CostDiagonal diag = cost_diagonal(inst.graph);
        const PolicyCheckpoint* ck = checkpoints.at(cell.depth);

        for (int o = 0; o < 3; ++o) {
            OptimizerSpec spec;
            spec.kind = kOptimizers[o];
            if (spec.kind != OptimizerKind::nelder_mead) spec.checkpoint = ck;
            results[static_cast<std::size_t>(c)][static_cast<std::size_t>(o)] = multi_start(
                spec, diag, cell.depth, settings.attempts, settings.budget, cell.cell_seed);
        }
    }

    // Per-instance expected tau, keyed by (family, depth, optimizer), in cell
    // order for the summary aggregation.
    std::map<std::tuple<Family, int, int>, std::vector<double>> mean_taus;

    for (std::size_t c = 0; c < cells.size(); ++c) {
        const Cell& cell = cells[c];
        const Instance& inst = suite.instances[static_cast<std::size_t>(cell.instance_idx)];

        double f_opt = -std::numeric_limits<double>::infinity();
        for (int o = 0; o < 3; ++o)
            f_opt = std::max(f_opt, results[c][static_cast<std::size_t>(o)].best_f);

        for (int o = 0; o < 3; ++o) {
            const MultiStartResult& ms = results[c][static_cast<std::size_t>(o)];
            double tau_sum = 0.0;
            for (const OptRunRecord& rec : ms.attempts) {
                BenchRow row;
                row.instance_label = inst.graph.label;
                row.family = inst.family;
                row.n = inst.graph.n;
                row.p = cell.depth;
                row.optimizer = kOptimizers[o];
                row.attempt = rec.attempt;
                row.best_f = rec.best_f;
                row.c_opt = inst.copt.value;
                row.f_opt = f_opt;
                row.eta = approximation_ratio(rec.best_f, inst.copt);
                row.tau = optimality_ratio(rec.best_f, f_opt);
                tau_sum += row.tau;
                report.rows.push_back(std::move(row));
            }
            mean_taus[{inst.family, cell.depth, o}].push_back(
                tau_sum / static_cast<double>(ms.attempts.size()));
        }
    }

    for (Family family : {Family::random, Family::community, Family::ladder}) {
        if (!settings.families.contains(family)) continue;
        for (int p : settings.depths) {
            const auto nm_it = mean_taus.find({family, p, 0});
            if (nm_it == mean_taus.end()) continue;
            for (int o = 0; o < 3; ++o) {
                const std::vector<double>& taus = mean_taus.at({family, p, o});
                SummaryRow row;
                row.family = family;
                row.p = p;
                row.optimizer = kOptimizers[o];
                double sum = 0.0;
                for (double t : taus) sum += t;
                row.mean_tau = sum / static_cast<double>(taus.size());
                std::vector<double> sorted = taus;
                std::sort(sorted.begin(), sorted.end());
                row.median_tau = quantile(sorted, 0.5);
                row.q1 = quantile(sorted, 0.25);
                row.q3 = quantile(sorted, 0.75);
                row.gap_reduction_vs_nm = gap_reduction(nm_it->second, taus);
                report.summary.push_back(row);
            }
        }
    }
    return report;
}

}  // namespace qrl
