#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

// Low-level amplitude kernels shared by the simulator. Each has an OpenMP
// path that engages above kParallelThreshold amplitudes and a serial fallback
// below it. Complex arithmetic is spelled out on doubles so the compiler
// vectorizes the sweeps instead of calling the libgcc complex helpers.

namespace qrl::kernel {

inline constexpr std::size_t kParallelThreshold = std::size_t(1) << 16;

// Qubits handled per memory pass of the mixer; 2^k amplitudes are staged in
// registers/L1 so a full mixer layer costs ceil(n/k) passes instead of n.
inline constexpr int kMixerGroup = 5;

// table[k] = exp(-i * gamma * k) for k = 0..max_value.
std::vector<std::complex<double>> phase_table(double gamma, int max_value);

// amps[z] *= table[diag[z]]
void apply_phase(std::complex<double>* amps, const std::uint16_t* diag, std::size_t size,
                 const std::complex<double>* table);

// amps[z] = scale * table[diag[z]]   (uniform superposition fused with the
// first phase-separation layer)
void init_phase(std::complex<double>* amps, const std::uint16_t* diag, std::size_t size,
                const std::complex<double>* table, double scale);

// Single-qubit mixer butterflies on qubits [q0, q0+k) in one pass:
// (a, b) -> (c*a - i*s*b, c*b - i*s*a) per pair, staged through 2^k locals.
void mixer_group(std::complex<double>* amps, std::size_t size, int q0, int k, double cos_b,
                 double sin_b);

// Full transverse-field mixer layer exp(-i*beta*sum_q X_q).
void apply_mixer(std::complex<double>* amps, std::size_t size, int n, double beta);

// sum_z |amps[z]|^2 * diag[z]. Fixed-size chunk partials summed in index
// order, so the result does not depend on the thread count.
double energy(const std::complex<double>* amps, const std::uint16_t* diag, std::size_t size);

double norm_sq(const std::complex<double>* amps, std::size_t size);

namespace ref {
// Serial reference kernels: one qubit per sweep, std::polar per amplitude,
// straight accumulation. These states the contract plainly and back the
// equivalence tests and the kernel benchmark.
void apply_phase(std::complex<double>* amps, const std::uint16_t* diag, std::size_t size,
                 double gamma);
void apply_mixer(std::complex<double>* amps, std::size_t size, int n, double beta);
double energy(const std::complex<double>* amps, const std::uint16_t* diag, std::size_t size);
}  // namespace ref

}  // namespace qrl::kernel
