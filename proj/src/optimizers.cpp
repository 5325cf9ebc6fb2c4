#include "qrl/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qrl {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Nelder-Mead coefficients.
constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;
constexpr double kSimplexOffset = 0.25;  // radians, absolute

}  // namespace

void OptRunRecord::record(std::span<const double> x, double f) {
    points.emplace_back(x.begin(), x.end());
    fs.push_back(f);
    ++evals;
    if (f > best_f) {
        best_f = f;
        best_params.assign(x.begin(), x.end());
    }
}

nlohmann::json record_to_json(const OptRunRecord& rec) {
    nlohmann::json trace = nlohmann::json::array();
    for (double f : rec.fs) trace.push_back(nlohmann::json{{"f", f}});
    return nlohmann::json{{"optimizer", rec.optimizer}, {"attempt", rec.attempt},
                          {"seed", rec.seed},           {"evals", rec.evals},
                          {"best_f", rec.best_f},       {"best_params", rec.best_params},
                          {"trace", trace}};
}

OptRunRecord nelder_mead(const ObjectiveFn& objective, EvalCounter& counter,
                         const std::vector<double>& x0) {
    const std::size_t dim = x0.size();
    if (dim == 0) throw std::invalid_argument("nelder_mead: empty start point");
    if (counter.remaining() < dim + 2)
        throw std::invalid_argument("nelder_mead: budget " + std::to_string(counter.remaining()) +
                                    " too small for a " + std::to_string(dim + 1) +
                                    "-vertex simplex plus one iteration");

    OptRunRecord rec;
    rec.optimizer = "nm";

    // Every query flows through here so the trace is complete; returns false
    // once the budget is gone.
    auto try_eval = [&](const std::vector<double>& x, double& g) -> bool {
        if (counter.remaining() == 0) return false;
        const double f = objective(x);
        rec.record(x, f);
        g = -f;  // minimize -f
        return true;
    };

    struct Vertex {
        std::vector<double> x;
        double g;
    };
    std::vector<Vertex> simplex;
    simplex.reserve(dim + 1);

    {
        double g;
        try_eval(x0, g);  // budget precondition guarantees success
        simplex.push_back({x0, g});
        for (std::size_t i = 0; i < dim; ++i) {
            std::vector<double> v = x0;
            v[i] += kSimplexOffset;
            if (!try_eval(v, g)) break;
            simplex.push_back({std::move(v), g});
        }
    }

    auto order = [&simplex]() {
        std::stable_sort(simplex.begin(), simplex.end(),
                         [](const Vertex& a, const Vertex& b) { return a.g < b.g; });
    };

    while (counter.remaining() > 0) {
        order();
        Vertex& worst = simplex.back();
        const Vertex& best = simplex.front();
        const Vertex& second_worst = simplex[simplex.size() - 2];

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t v = 0; v + 1 < simplex.size(); ++v)
            for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[v].x[i];
        for (double& c : centroid) c /= static_cast<double>(dim);

        auto along = [&](double t) {
            std::vector<double> x(dim);
            for (std::size_t i = 0; i < dim; ++i) x[i] = centroid[i] + t * (centroid[i] - worst.x[i]);
            return x;
        };

        std::vector<double> xr = along(kReflect);
        double gr;
        if (!try_eval(xr, gr)) break;

        if (gr < best.g) {
            std::vector<double> xe = along(kExpand);
            double ge;
            if (!try_eval(xe, ge)) break;
            if (ge < gr)
                worst = {std::move(xe), ge};
            else
                worst = {std::move(xr), gr};
        } else if (gr < second_worst.g) {
            worst = {std::move(xr), gr};
        } else if (gr < worst.g) {
            // Outside contraction.
            std::vector<double> xc = along(kReflect * kContract);
            double gc;
            if (!try_eval(xc, gc)) break;
            if (gc <= gr) {
                worst = {std::move(xc), gc};
            } else {
                // Shrink toward the best vertex.
                bool out_of_budget = false;
                for (std::size_t v = 1; v < simplex.size(); ++v) {
                    for (std::size_t i = 0; i < dim; ++i)
                        simplex[v].x[i] =
                            best.x[i] + kShrink * (simplex[v].x[i] - best.x[i]);
                    if (!try_eval(simplex[v].x, simplex[v].g)) {
                        out_of_budget = true;
                        break;
                    }
                }
                if (out_of_budget) break;
            }
        } else {
            // Inside contraction.
            std::vector<double> xc = along(-kContract);
            double gc;
            if (!try_eval(xc, gc)) break;
            if (gc < worst.g) {
                worst = {std::move(xc), gc};
            } else {
                bool out_of_budget = false;
                for (std::size_t v = 1; v < simplex.size(); ++v) {
                    for (std::size_t i = 0; i < dim; ++i)
                        simplex[v].x[i] =
                            best.x[i] + kShrink * (simplex[v].x[i] - best.x[i]);
                    if (!try_eval(simplex[v].x, simplex[v].g)) {
                        out_of_budget = true;
                        break;
                    }
                }
                if (out_of_budget) break;
            }
        }
    }
    return rec;
}

namespace {

ObjectiveFn plain_objective(const CostDiagonal& d, EvalCounter& counter) {
    return [&d, &counter](std::span<const double> x) {
        return evaluate(d, QaoaParams::from_flat(std::vector<double>(x.begin(), x.end())), counter);
    };
}

// Objective that charges the shared counter and logs into `rec`.
ObjectiveFn recording_objective(const CostDiagonal& d, EvalCounter& counter, OptRunRecord& rec) {
    return [&d, &counter, &rec](std::span<const double> x) {
        const double f =
            evaluate(d, QaoaParams::from_flat(std::vector<double>(x.begin(), x.end())), counter);
        rec.record(x, f);
        return f;
    };
}

void check_checkpoint(const PolicyCheckpoint& ck, const std::vector<double>& x0) {
    if (x0.size() != static_cast<std::size_t>(2 * ck.p))
        throw std::invalid_argument("rl_rollout_opt: start point has dimension " +
                                    std::to_string(x0.size()) + ", checkpoint expects " +
                                    std::to_string(2 * ck.p));
}

void rollout_into(OptRunRecord& rec, const PolicyCheckpoint& ck, const CostDiagonal& d,
                  const std::vector<double>& x0, std::uint64_t budget) {
    check_checkpoint(ck, x0);
    if (budget < 1) throw std::invalid_argument("rl_rollout_opt: budget must be >= 1");

    EvalCounter counter(budget);
    EnvConfig cfg;
    cfg.p = ck.p;
    cfg.history_len = ck.history_len;
    // One uninterrupted trajectory: the horizon can never be hit.
    cfg.horizon = std::numeric_limits<int>::max();

    Env env(cfg, recording_objective(d, counter, rec));
    std::vector<double> obs = env.reset_at(x0);
    while (counter.remaining() > 0) {
        const std::vector<double> action = ck.policy.mean(obs);
        obs = env.step(action).obs;
    }
}

}  // namespace

OptRunRecord rl_rollout_opt(const PolicyCheckpoint& ck, const CostDiagonal& d,
                            const std::vector<double>& x0, std::uint64_t budget) {
    OptRunRecord rec;
    rec.optimizer = "rl";
    rollout_into(rec, ck, d, x0, budget);
    return rec;
}

OptRunRecord rlnm(const PolicyCheckpoint& ck, const CostDiagonal& d,
                  const std::vector<double>& x0, std::uint64_t budget) {
    check_checkpoint(ck, x0);
    const std::uint64_t dim = 2 * static_cast<std::uint64_t>(ck.p);
    if (budget % 2 != 0) throw std::invalid_argument("rlnm: budget must be even");
    if (budget < 2 * dim + 4 || budget / 2 < dim + 2)
        throw std::invalid_argument("rlnm: budget too small to split between both phases");

    OptRunRecord rec;
    rec.optimizer = "rlnm";
    rollout_into(rec, ck, d, x0, budget / 2);

    // Phase 2: a fresh simplex around the rollout's best point, other half of
    // the budget. The phase trace folds into the combined record.
    EvalCounter counter(budget / 2);
    const OptRunRecord nm_rec =
        nelder_mead(plain_objective(d, counter), counter, rec.best_params);
    for (std::size_t i = 0; i < nm_rec.fs.size(); ++i) rec.record(nm_rec.points[i], nm_rec.fs[i]);
    return rec;
}

const char* optimizer_name(OptimizerKind kind) {
    switch (kind) {
        case OptimizerKind::nelder_mead: return "nm";
        case OptimizerKind::rl: return "rl";
        case OptimizerKind::rlnm: return "rlnm";
    }
    return "?";
}

std::vector<double> attempt_start_point(std::uint64_t seed, int attempt, int p) {
    SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    std::vector<double> x0(static_cast<std::size_t>(2 * p));
    for (double& x : x0) x = rng.uniform(-kPi, kPi);
    return x0;
}

MultiStartResult multi_start(const OptimizerSpec& spec, const CostDiagonal& d, int p, int attempts,
                             std::uint64_t budget, std::uint64_t seed) {
    if (attempts < 1) throw std::invalid_argument("multi_start: attempts must be >= 1");
    if ((spec.kind == OptimizerKind::rl || spec.kind == OptimizerKind::rlnm) &&
        spec.checkpoint == nullptr)
        throw std::invalid_argument("multi_start: rl/rlnm need a checkpoint");
    if (spec.checkpoint != nullptr && spec.checkpoint->p != p)
        throw std::invalid_argument("multi_start: checkpoint trained at p=" +
                                    std::to_string(spec.checkpoint->p) + ", requested p=" +
                                    std::to_string(p));

    MultiStartResult result;
    for (int k = 0; k < attempts; ++k) {
        const std::vector<double> x0 = attempt_start_point(seed, k, p);
        OptRunRecord rec;
        switch (spec.kind) {
            case OptimizerKind::nelder_mead: {
                EvalCounter counter(budget);
                rec = nelder_mead(plain_objective(d, counter), counter, x0);
                break;
            }
            case OptimizerKind::rl:
                rec = rl_rollout_opt(*spec.checkpoint, d, x0, budget);
                break;
            case OptimizerKind::rlnm:
                rec = rlnm(*spec.checkpoint, d, x0, budget);
                break;
        }
        rec.attempt = k;
        rec.seed = derive_seed(seed, static_cast<std::uint64_t>(k));
        if (rec.best_f > result.best_f) {
            result.best_f = rec.best_f;
            result.best_params = rec.best_params;
        }
        result.attempts.push_back(std::move(rec));
    }
    return result;
}

}  // namespace qrl
