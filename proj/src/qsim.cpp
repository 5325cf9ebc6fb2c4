#include "qrl/qsim.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "qrl/kernels.hpp"

namespace qrl {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_qubits(int n) {
    if (n < 1 || n > kMaxQubits)
        throw CapacityError("qubit count " + std::to_string(n) + " outside [1, " +
                            std::to_string(kMaxQubits) + "]");
}

void check_dims(const StateVector& s, const CostDiagonal& d) {
    if (s.n != d.n()) throw std::invalid_argument("state / diagonal qubit count mismatch");
}

}  // namespace

QaoaParams QaoaParams::from_flat(const std::vector<double>& x) {
    if (x.empty() || x.size() % 2 != 0)
        throw std::invalid_argument("flat parameter vector must have even positive length");
    const std::size_t p = x.size() / 2;
    return QaoaParams(std::vector<double>(x.begin(), x.begin() + p),
                      std::vector<double>(x.begin() + p, x.end()));
}

std::vector<double> QaoaParams::to_flat() const {
    std::vector<double> x;
    x.reserve(beta.size() + gamma.size());
    x.insert(x.end(), beta.begin(), beta.end());
    x.insert(x.end(), gamma.begin(), gamma.end());
    return x;
}

void QaoaParams::validate() const {
    if (beta.empty() || beta.size() != gamma.size())
        throw std::invalid_argument("params: need beta.size() == gamma.size() >= 1");
    for (double v : beta)
        if (!std::isfinite(v)) throw std::invalid_argument("params: non-finite beta");
    for (double v : gamma)
        if (!std::isfinite(v)) throw std::invalid_argument("params: non-finite gamma");
}

CostDiagonal CostDiagonal::from_graph(const Graph& g) {
    g.validate();
    check_qubits(g.n);

    CostDiagonal d;
    d.n_ = g.n;
    d.edge_count_ = g.edge_count();

    std::vector<std::uint32_t> adj(static_cast<std::size_t>(g.n), 0);
    std::vector<std::uint16_t> deg(static_cast<std::size_t>(g.n), 0);
    for (auto [i, j] : g.edges) {
        adj[static_cast<std::size_t>(i)] |= 1u << j;
        adj[static_cast<std::size_t>(j)] |= 1u << i;
        ++deg[static_cast<std::size_t>(i)];
        ++deg[static_cast<std::size_t>(j)];
    }

    const std::size_t size = std::size_t(1) << g.n;
    d.values_.resize(size);
    d.values_[0] = 0;
    // cut(S + v) = cut(S) + deg(v) - 2*|N(v) & S|, filled in index order so
    // the smaller set is always ready.
    for (std::size_t z = 1; z < size; ++z) {
        const int v = std::countr_zero(z);
        const std::size_t rest = z & (z - 1);
        const auto overlap =
            std::popcount(adj[static_cast<std::size_t>(v)] & static_cast<std::uint32_t>(rest));
        d.values_[z] = static_cast<std::uint16_t>(d.values_[rest] +
                                                  deg[static_cast<std::size_t>(v)] - 2 * overlap);
    }

    int max_v = 0;
    for (std::uint16_t v : d.values_) max_v = std::max(max_v, static_cast<int>(v));
    d.max_value_ = max_v;
    return d;
}

double StateVector::norm_sq() const { return kernel::norm_sq(amps.data(), amps.size()); }

void EvalCounter::consume() {
    std::uint64_t cur = used_.load(std::memory_order_relaxed);
    do {
        if (cur >= budget_)
            throw BudgetExhausted("evaluation budget of " + std::to_string(budget_) +
                                  " exhausted");
    } while (!used_.compare_exchange_weak(cur, cur + 1, std::memory_order_relaxed));
}

StateVector plus_state(int n) {
    check_qubits(n);
    StateVector s;
    s.n = n;
    const double amp = std::pow(2.0, -0.5 * n);
    s.amps.assign(std::size_t(1) << n, std::complex<double>(amp, 0.0));
    return s;
}

void apply_cost_layer(StateVector& s, double gamma, const CostDiagonal& d) {
    check_dims(s, d);
    const auto table = kernel::phase_table(gamma, d.edge_count());
    kernel::apply_phase(s.amps.data(), d.data(), s.amps.size(), table.data());
}

void apply_mixer_layer(StateVector& s, double beta) {
    kernel::apply_mixer(s.amps.data(), s.amps.size(), s.n, beta);
}

namespace {

void evolve_into(StateVector& s, const CostDiagonal& d, const QaoaParams& params) {
    params.validate();
    const std::size_t size = d.size();
    s.n = d.n();
    if (s.amps.size() != size) s.amps.resize(size);

    const double scale = std::pow(2.0, -0.5 * d.n());
    for (int k = 0; k < params.depth(); ++k) {
        const auto table = kernel::phase_table(params.gamma[static_cast<std::size_t>(k)],
                                               d.edge_count());
        if (k == 0)
            kernel::init_phase(s.amps.data(), d.data(), size, table.data(), scale);
        else
            kernel::apply_phase(s.amps.data(), d.data(), size, table.data());
        kernel::apply_mixer(s.amps.data(), size, d.n(), params.beta[static_cast<std::size_t>(k)]);
    }
}

}  // namespace

StateVector evolve(const CostDiagonal& d, const QaoaParams& params) {
    StateVector s;
    evolve_into(s, d, params);
    return s;
}

double expected_energy(const StateVector& s, const CostDiagonal& d) {
    check_dims(s, d);
    return kernel::energy(s.amps.data(), d.data(), s.amps.size());
}

double evaluate(const CostDiagonal& d, const QaoaParams& params, EvalCounter& counter) {
    counter.consume();
    thread_local StateVector scratch;
    evolve_into(scratch, d, params);
    return kernel::energy(scratch.amps.data(), d.data(), scratch.amps.size());
}

std::vector<double> landscape_grid(const CostDiagonal& d, int resolution) {
    if (resolution < 2) throw std::invalid_argument("landscape_grid: resolution must be >= 2");
    std::vector<double> grid(static_cast<std::size_t>(resolution) *
                             static_cast<std::size_t>(resolution));
    const double step = 2.0 * kPi / (resolution - 1);
    for (int bi = 0; bi < resolution; ++bi) {
        const double beta = -kPi + step * bi;
        for (int gi = 0; gi < resolution; ++gi) {
            const double gamma = -kPi + step * gi;
            const StateVector s = evolve(d, QaoaParams({beta}, {gamma}));
            grid[static_cast<std::size_t>(bi) * resolution + gi] = expected_energy(s, d);
        }
    }
    return grid;
}

void write_landscape_csv(std::ostream& out, const std::vector<double>& grid, int resolution) {
    const double step = 2.0 * kPi / (resolution - 1);
    out << "beta,gamma,f\n";
    char buf[128];
    for (int bi = 0; bi < resolution; ++bi) {
        for (int gi = 0; gi < resolution; ++gi) {
            std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g\n", -kPi + step * bi,
                          -kPi + step * gi,
                          grid[static_cast<std::size_t>(bi) * resolution + gi]);
            out << buf;
        }
    }
}

namespace ref {

void apply_cost_layer(StateVector& s, double gamma, const CostDiagonal& d) {
    check_dims(s, d);
    kernel::ref::apply_phase(s.amps.data(), d.data(), s.amps.size(), gamma);
}

void apply_mixer_layer(StateVector& s, double beta) {
    kernel::ref::apply_mixer(s.amps.data(), s.amps.size(), s.n, beta);
}

StateVector evolve(const CostDiagonal& d, const QaoaParams& params) {
    params.validate();
    StateVector s = plus_state(d.n());
    for (int k = 0; k < params.depth(); ++k) {
        apply_cost_layer(s, params.gamma[static_cast<std::size_t>(k)], d);
        apply_mixer_layer(s, params.beta[static_cast<std::size_t>(k)]);
    }
    return s;
}

double expected_energy(const StateVector& s, const CostDiagonal& d) {
    check_dims(s, d);
    return kernel::ref::energy(s.amps.data(), d.data(), s.amps.size());
}

}  // namespace ref

}  // namespace qrl
