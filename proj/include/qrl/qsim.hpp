#pragma once

#include <atomic>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qrl/graph.hpp"

namespace qrl {

inline constexpr int kMaxQubits = 24;

struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BudgetExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The 2p variational angles of a depth-p circuit.
struct QaoaParams {
    std::vector<double> beta;
    std::vector<double> gamma;

    QaoaParams() = default;
    QaoaParams(std::vector<double> b, std::vector<double> g)
        : beta(std::move(b)), gamma(std::move(g)) {}

    // Flat layout used by optimizers and the RL environment: beta then gamma.
    static QaoaParams from_flat(const std::vector<double>& x);
    std::vector<double> to_flat() const;

    int depth() const { return static_cast<int>(beta.size()); }
    void validate() const;  // equal lengths >= 1, all angles finite
};

// Diagonal of the cost Hamiltonian: entry z is the cut size of bipartition z,
// with vertex i on the side given by bit i of z. Entries are small integers,
// stored narrow so the sweep kernels stay memory-lean.
class CostDiagonal {
public:
    static CostDiagonal from_graph(const Graph& g);

    int n() const { return n_; }
    std::size_t size() const { return values_.size(); }
    int edge_count() const { return edge_count_; }
    int max_value() const { return max_value_; }
    double value(std::size_t z) const { return values_[z]; }
    const std::uint16_t* data() const { return values_.data(); }

private:
    int n_ = 0;
    int edge_count_ = 0;
    int max_value_ = 0;
    std::vector<std::uint16_t> values_;
};

inline CostDiagonal cost_diagonal(const Graph& g) { return CostDiagonal::from_graph(g); }

struct StateVector {
    int n = 0;
    std::vector<std::complex<double>> amps;

    double norm_sq() const;
};

// Counts objective evaluations against a budget; `used <= budget` is enforced
// on every consume, atomically, so concurrent attempts cannot overrun.
class EvalCounter {
public:
    static constexpr std::uint64_t kUnlimited = std::numeric_limits<std::uint64_t>::max();

    explicit EvalCounter(std::uint64_t budget = kUnlimited) : budget_(budget) {}

    std::uint64_t used() const { return used_.load(std::memory_order_relaxed); }
    std::uint64_t budget() const { return budget_; }
    std::uint64_t remaining() const { return budget_ - used(); }

    // Reserves one evaluation; throws BudgetExhausted once used == budget.
    void consume();

private:
    std::atomic<std::uint64_t> used_{0};
    std::uint64_t budget_;
};

StateVector plus_state(int n);
void apply_cost_layer(StateVector& s, double gamma, const CostDiagonal& d);
void apply_mixer_layer(StateVector& s, double beta);

// |psi(beta, gamma)> = prod_k exp(-i beta_k H_M) exp(-i gamma_k H_C) |+>^n,
// cost layer first within each k.
StateVector evolve(const CostDiagonal& d, const QaoaParams& params);

// <psi| H_C |psi> = sum_z |amps_z|^2 * C(z)
double expected_energy(const StateVector& s, const CostDiagonal& d);

// evolve + expected_energy, charging one evaluation to the counter.
double evaluate(const CostDiagonal& d, const QaoaParams& params, EvalCounter& counter);

// Depth-1 energy on a resolution x resolution grid over [-pi, pi]^2,
// row-major with beta as the outer (row) coordinate.
std::vector<double> landscape_grid(const CostDiagonal& d, int resolution);

// CSV "beta,gamma,f" with 12 significant digits per value.
void write_landscape_csv(std::ostream& out, const std::vector<double>& grid, int resolution);

namespace ref {
// Serial reference path: identical contracts, no grouping, no tables.
void apply_cost_layer(StateVector& s, double gamma, const CostDiagonal& d);
void apply_mixer_layer(StateVector& s, double beta);
StateVector evolve(const CostDiagonal& d, const QaoaParams& params);
double expected_energy(const StateVector& s, const CostDiagonal& d);
}  // namespace ref

}  // namespace qrl
