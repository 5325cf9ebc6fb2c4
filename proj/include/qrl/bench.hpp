#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "qrl/graph.hpp"
#include "qrl/maxcut.hpp"
#include "qrl/optimizers.hpp"

namespace qrl {

enum class Family { random, community, ladder };

const char* family_name(Family f);

struct Instance {
    Graph graph;
    Family family = Family::random;
    CutResult copt;
};

struct TestSuite {
    std::vector<Instance> instances;
};

// The 97-instance test set: 64 Erdos-Renyi (n in {8,12,16,20} x e_p in
// {0.5,..,0.8} x seed in {1..4}), 10 ladders (length 2..11), 9 barbells
// (clique 3..11) and 14 cavemans. Exact optima are computed up front.
TestSuite build_g_test();

// eta = f / C_opt, against the brute-force classical optimum.
double approximation_ratio(double f, const CutResult& copt);

// tau = f / f_opt, against the best value any optimizer found at that depth.
double optimality_ratio(double f, double f_opt);

// Paired per-instance expected optimality ratios -> median of per-instance
// gap ratios (1-tau_baseline)/(1-tau_method). Instances where both gaps are
// zero drop out; a zero method gap against a positive baseline contributes
// +infinity. Returns NaN when every instance drops out.
double gap_reduction(const std::vector<double>& tau_baseline,
                     const std::vector<double>& tau_method);

struct BenchSettings {
    std::vector<int> depths = {1, 2, 4};
    int attempts = 10;
    std::uint64_t budget = 192;
    std::uint64_t seed = 0;
    int jobs = 0;  // 0: OpenMP default
    std::set<Family> families = {Family::random, Family::community, Family::ladder};
};

struct BenchRow {
    std::string instance_label;
    Family family;
    int n = 0;
    int p = 0;
    OptimizerKind optimizer;
    int attempt = 0;
    double best_f = 0.0;
    int c_opt = 0;
    double f_opt = 0.0;
    double eta = 0.0;
    double tau = 0.0;
};

struct SummaryRow {
    Family family;
    int p = 0;
    OptimizerKind optimizer;
    double mean_tau = 0.0;
    double median_tau = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double gap_reduction_vs_nm = 0.0;
};

struct BenchReport {
    std::vector<BenchRow> rows;          // instance x depth x optimizer x attempt
    std::vector<SummaryRow> summary;     // family x depth x optimizer
    std::vector<std::string> skipped;    // capacity-skipped instance labels

    std::string report_csv(std::uint64_t seed) const;
    std::string summary_csv(std::uint64_t seed) const;
};

// Full evaluation protocol: per instance and depth, multi-start NM, RL and
// RLNM from identical start points; f_opt is the max over everything that
// ran in that cell. `checkpoints` must provide a policy per requested depth.
BenchReport run_benchmark(const TestSuite& suite,
                          const std::map<int, const PolicyCheckpoint*>& checkpoints,
                          const BenchSettings& settings);

}  // namespace qrl
