#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qrl/rng.hpp"

namespace qrl {

// Dense multilayer perceptron: tanh hidden layers, linear output. Weights are
// row-major (out x in) per layer. Double precision throughout; the gradient
// checks run at 1e-4 relative error and need it.
struct Mlp {
    std::vector<int> sizes;
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;

    // Scaled-uniform init in [-sqrt(6/(fan_in+fan_out)), +...]; zero biases.
    static Mlp init(const std::vector<int>& layer_sizes, SplitMix64& rng);

    int input_size() const { return sizes.front(); }
    int output_size() const { return sizes.back(); }
    int layer_count() const { return static_cast<int>(weights.size()); }
    std::size_t param_count() const;

    std::vector<double> forward(std::span<const double> x) const;
};

// Activations retained from a forward pass: acts[0] is the input, acts[l] the
// output of layer l-1 (tanh for hidden layers, linear for the last).
struct ForwardCache {
    std::vector<std::vector<double>> acts;
};

std::vector<double> forward_cached(const Mlp& net, std::span<const double> x, ForwardCache& cache);

struct MlpGrads {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;

    static MlpGrads zeros_like(const Mlp& net);
    void zero();
    void scale(double s);
};

// Exact reverse-mode gradients of the forward map. `upstream` is dL/d(output);
// parameter gradients accumulate into `grads`; the return value is dL/d(input).
std::vector<double> backward(const Mlp& net, const ForwardCache& cache,
                             std::span<const double> upstream, MlpGrads& grads);

// Bias-corrected Adam. Moment buffers are allocated on first step and must
// keep matching the network's shapes afterwards.
class Adam {
public:
    explicit Adam(double lr = 1e-3, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
        : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

    void step(Mlp& net, const MlpGrads& grads);

    double learning_rate() const { return lr_; }
    std::int64_t steps() const { return t_; }

private:
    double lr_, beta1_, beta2_, eps_;
    std::int64_t t_ = 0;
    std::vector<std::vector<double>> mw_, vw_, mb_, vb_;
};

}  // namespace qrl
