#pragma once

// Dense-matrix construction of the QAOA evolution for oracle tests. Kept
// deliberately independent of the simulator: cut values come from a plain
// edge loop, the mixer unitary from a scaling-and-squaring matrix
// exponential of the dense transverse-field Hamiltonian. Only sane for a
// handful of qubits.

#include <cassert>
#include <cmath>
#include <complex>
#include <vector>

#include "qrl/graph.hpp"
#include "qrl/qsim.hpp"

namespace oracle {

using cd = std::complex<double>;
using Mat = std::vector<std::vector<cd>>;

inline Mat identity(std::size_t dim) {
    Mat m(dim, std::vector<cd>(dim, cd(0.0)));
    for (std::size_t i = 0; i < dim; ++i) m[i][i] = cd(1.0);
    return m;
}

inline Mat matmul(const Mat& a, const Mat& b) {
    const std::size_t dim = a.size();
    Mat c(dim, std::vector<cd>(dim, cd(0.0)));
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t k = 0; k < dim; ++k) {
            const cd aik = a[i][k];
            for (std::size_t j = 0; j < dim; ++j) c[i][j] += aik * b[k][j];
        }
    return c;
}

inline std::vector<cd> matvec(const Mat& a, const std::vector<cd>& v) {
    const std::size_t dim = a.size();
    std::vector<cd> out(dim, cd(0.0));
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) out[i] += a[i][j] * v[j];
    return out;
}

inline double norm_inf(const Mat& m) {
    double best = 0.0;
    for (const auto& row : m) {
        double sum = 0.0;
        for (const cd& x : row) sum += std::abs(x);
        best = std::max(best, sum);
    }
    return best;
}

// exp(M) by scaling and squaring with a Taylor series on the scaled matrix.
inline Mat expm(const Mat& m) {
    const std::size_t dim = m.size();
    int scale = 0;
    double norm = norm_inf(m);
    while (norm > 0.5) {
        norm /= 2.0;
        ++scale;
    }
    Mat scaled = m;
    const double factor = std::ldexp(1.0, -scale);
    for (auto& row : scaled)
        for (cd& x : row) x *= factor;

    Mat result = identity(dim);
    Mat term = identity(dim);
    for (int k = 1; k <= 40; ++k) {
        term = matmul(term, scaled);
        for (auto& row : term)
            for (cd& x : row) x /= static_cast<double>(k);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) result[i][j] += term[i][j];
        if (norm_inf(term) < 1e-18) break;
    }
    for (int s = 0; s < scale; ++s) result = matmul(result, result);
    return result;
}

inline int cut_value(const qrl::Graph& g, std::size_t z) {
    int cut = 0;
    for (auto [i, j] : g.edges) cut += static_cast<int>(((z >> i) ^ (z >> j)) & 1u);
    return cut;
}

inline Mat cost_unitary(const qrl::Graph& g, double gamma) {
    const std::size_t dim = std::size_t(1) << g.n;
    Mat u(dim, std::vector<cd>(dim, cd(0.0)));
    for (std::size_t z = 0; z < dim; ++z) u[z][z] = std::polar(1.0, -gamma * cut_value(g, z));
    return u;
}

inline Mat mixer_hamiltonian(int n) {
    const std::size_t dim = std::size_t(1) << n;
    Mat h(dim, std::vector<cd>(dim, cd(0.0)));
    for (std::size_t z = 0; z < dim; ++z)
        for (int q = 0; q < n; ++q) h[z][z ^ (std::size_t(1) << q)] += cd(1.0);
    return h;
}

inline Mat mixer_unitary(int n, double beta) {
    Mat m = mixer_hamiltonian(n);
    for (auto& row : m)
        for (cd& x : row) x *= cd(0.0, -beta);
    return expm(m);
}

inline std::vector<cd> evolve_dense(const qrl::Graph& g, const qrl::QaoaParams& params) {
    const std::size_t dim = std::size_t(1) << g.n;
    Mat u = identity(dim);
    for (int k = 0; k < params.depth(); ++k) {
        u = matmul(cost_unitary(g, params.gamma[static_cast<std::size_t>(k)]), u);
        u = matmul(mixer_unitary(g.n, params.beta[static_cast<std::size_t>(k)]), u);
    }
    const double amp = std::pow(2.0, -0.5 * g.n);
    return matvec(u, std::vector<cd>(dim, cd(amp)));
}

}  // namespace oracle
