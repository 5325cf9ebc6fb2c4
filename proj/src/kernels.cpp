#include "qrl/kernels.hpp"

#include <cmath>

namespace qrl::kernel {

std::vector<std::complex<double>> phase_table(double gamma, int max_value) {
    std::vector<std::complex<double>> table(static_cast<std::size_t>(max_value) + 1);
    for (int k = 0; k <= max_value; ++k)
        table[static_cast<std::size_t>(k)] = std::polar(1.0, -gamma * k);
    return table;
}

void apply_phase(std::complex<double>* amps, const std::uint16_t* diag, std::size_t size,
                 const std::complex<double>* table) {
    double* a = reinterpret_cast<double*>(amps);
    const double* t = reinterpret_cast<const double*>(table);
#pragma omp parallel for schedule(static) if (size >= kParallelThreshold)
    for (std::int64_t z = 0; z < static_cast<std::int64_t>(size); ++z) {
        const std::size_t p = 2 * static_cast<std::size_t>(z);
        const std::size_t q = 2 * static_cast<std::size_t>(diag[z]);
        const double ar = a[p], ai = a[p + 1];
        const double tr = t[q], ti = t[q + 1];
        a[p] = ar * tr - ai * ti;
        a[p + 1] = ar * ti + ai * tr;
    }
}

void init_phase(std::complex<double>* amps, const std::uint16_t* diag, std::size_t size,
                const std::complex<double>* table, double scale) {
    double* a = reinterpret_cast<double*>(amps);
    const double* t = reinterpret_cast<const double*>(table);
#pragma omp parallel for schedule(static) if (size >= kParallelThreshold)
    for (std::int64_t z = 0; z < static_cast<std::int64_t>(size); ++z) {
        const std::size_t p = 2 * static_cast<std::size_t>(z);
        const std::size_t q = 2 * static_cast<std::size_t>(diag[z]);
        a[p] = scale * t[q];
        a[p + 1] = scale * t[q + 1];
    }
}

void mixer_group(std::complex<double>* amps, std::size_t size, int q0, int k, double cos_b,
                 double sin_b) {
    double* a = reinterpret_cast<double*>(amps);
    const std::size_t stride = std::size_t(1) << q0;
    const std::size_t lo_mask = stride - 1;
    const int m = 1 << k;
    const std::int64_t instances = static_cast<std::int64_t>(size >> k);
    const double c = cos_b, s = sin_b;

#pragma omp parallel for schedule(static) if (size >= kParallelThreshold)
    for (std::int64_t gi = 0; gi < instances; ++gi) {
        const std::size_t g = static_cast<std::size_t>(gi);
        const std::size_t idx = ((g >> q0) << (q0 + k)) | (g & lo_mask);
        double vr[1 << kMixerGroup], vi[1 << kMixerGroup];
        for (int j = 0; j < m; ++j) {
            const std::size_t p = 2 * (idx + static_cast<std::size_t>(j) * stride);
            vr[j] = a[p];
            vi[j] = a[p + 1];
        }
        for (int t = 0; t < k; ++t) {
            const int half = 1 << t;
            for (int j = 0; j < m; ++j) {
                if (j & half) continue;
                const int j2 = j | half;
                const double ar = vr[j], ai = vi[j];
                const double br = vr[j2], bi = vi[j2];
                vr[j] = c * ar + s * bi;
                vi[j] = c * ai - s * br;
                vr[j2] = c * br + s * ai;
                vi[j2] = c * bi - s * ar;
            }
        }
        for (int j = 0; j < m; ++j) {
            const std::size_t p = 2 * (idx + static_cast<std::size_t>(j) * stride);
            a[p] = vr[j];
            a[p + 1] = vi[j];
        }
    }
}

void apply_mixer(std::complex<double>* amps, std::size_t size, int n, double beta) {
    const double c = std::cos(beta), s = std::sin(beta);
    for (int q0 = 0; q0 < n; q0 += kMixerGroup) {
        const int k = std::min(kMixerGroup, n - q0);
        mixer_group(amps, size, q0, k, c, s);
    }
}

namespace {

inline constexpr std::size_t kChunk = std::size_t(1) << 12;

}  // namespace

double energy(const std::complex<double>* amps, const std::uint16_t* diag, std::size_t size) {
    const double* a = reinterpret_cast<const double*>(amps);
    const std::size_t nchunks = (size + kChunk - 1) / kChunk;
    std::vector<double> partial(nchunks, 0.0);
#pragma omp parallel for schedule(static) if (size >= kParallelThreshold)
    for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(nchunks); ++ci) {
        const std::size_t lo = static_cast<std::size_t>(ci) * kChunk;
        const std::size_t hi = std::min(lo + kChunk, size);
        double acc = 0.0;
        for (std::size_t z = lo; z < hi; ++z) {
            const double re = a[2 * z], im = a[2 * z + 1];
            acc += (re * re + im * im) * diag[z];
        }
        partial[static_cast<std::size_t>(ci)] = acc;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

double norm_sq(const std::complex<double>* amps, std::size_t size) {
    const double* a = reinterpret_cast<const double*>(amps);
    const std::size_t nchunks = (size + kChunk - 1) / kChunk;
    std::vector<double> partial(nchunks, 0.0);
#pragma omp parallel for schedule(static) if (size >= kParallelThreshold)
    for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(nchunks); ++ci) {
        const std::size_t lo = static_cast<std::size_t>(ci) * kChunk;
        const std::size_t hi = std::min(lo + kChunk, size);
        double acc = 0.0;
        for (std::size_t z = lo; z < hi; ++z) acc += a[2 * z] * a[2 * z] + a[2 * z + 1] * a[2 * z + 1];
        partial[static_cast<std::size_t>(ci)] = acc;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

namespace ref {

void apply_phase(std::complex<double>* amps, const std::uint16_t* diag, std::size_t size,
                 double gamma) {
    for (std::size_t z = 0; z < size; ++z) amps[z] *= std::polar(1.0, -gamma * diag[z]);
}

void apply_mixer(std::complex<double>* amps, std::size_t size, int n, double beta) {
    const std::complex<double> c(std::cos(beta), 0.0);
    const std::complex<double> mis(0.0, -std::sin(beta));
    for (int q = 0; q < n; ++q) {
        const std::size_t bit = std::size_t(1) << q;
        for (std::size_t z = 0; z < size; ++z) {
            if (z & bit) continue;
            const std::complex<double> a = amps[z];
            const std::complex<double> b = amps[z | bit];
            amps[z] = c * a + mis * b;
            amps[z | bit] = mis * a + c * b;
        }
    }
}

double energy(const std::complex<double>* amps, const std::uint16_t* diag, std::size_t size) {
    double total = 0.0;
    for (std::size_t z = 0; z < size; ++z) total += std::norm(amps[z]) * diag[z];
    return total;
}

}  // namespace ref

}  // namespace qrl::kernel
