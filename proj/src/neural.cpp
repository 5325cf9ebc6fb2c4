#include "qrl/neural.hpp"

#include <cmath>
#include <stdexcept>

namespace qrl {

namespace {

void check_input(const Mlp& net, std::size_t got) {
    if (got != static_cast<std::size_t>(net.input_size()))
        throw std::invalid_argument("mlp: input size " + std::to_string(got) + ", expected " +
                                    std::to_string(net.input_size()));
}

}  // namespace

Mlp Mlp::init(const std::vector<int>& layer_sizes, SplitMix64& rng) {
    if (layer_sizes.size() < 3)
        throw std::invalid_argument("mlp: need at least one hidden layer");
    Mlp net;
    net.sizes = layer_sizes;
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const int fan_in = layer_sizes[l];
        const int fan_out = layer_sizes[l + 1];
        const double bound = std::sqrt(6.0 / (fan_in + fan_out));
        std::vector<double> w(static_cast<std::size_t>(fan_in) * fan_out);
        for (double& x : w) x = rng.uniform(-bound, bound);
        net.weights.push_back(std::move(w));
        net.biases.emplace_back(static_cast<std::size_t>(fan_out), 0.0);
    }
    return net;
}

std::size_t Mlp::param_count() const {
    std::size_t count = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) count += weights[l].size() + biases[l].size();
    return count;
}

std::vector<double> Mlp::forward(std::span<const double> x) const {
    check_input(*this, x.size());
    std::vector<double> cur(x.begin(), x.end());
    std::vector<double> next;
    for (int l = 0; l < layer_count(); ++l) {
        const int in = sizes[static_cast<std::size_t>(l)];
        const int out = sizes[static_cast<std::size_t>(l) + 1];
        const double* w = weights[static_cast<std::size_t>(l)].data();
        const double* b = biases[static_cast<std::size_t>(l)].data();
        next.assign(static_cast<std::size_t>(out), 0.0);
        for (int o = 0; o < out; ++o) {
            double acc = b[o];
            const double* row = w + static_cast<std::size_t>(o) * in;
            for (int i = 0; i < in; ++i) acc += row[i] * cur[static_cast<std::size_t>(i)];
            next[static_cast<std::size_t>(o)] = (l + 1 < layer_count()) ? std::tanh(acc) : acc;
        }
        cur.swap(next);
    }
    return cur;
}

std::vector<double> forward_cached(const Mlp& net, std::span<const double> x, ForwardCache& cache) {
    check_input(net, x.size());
    cache.acts.assign(1, std::vector<double>(x.begin(), x.end()));
    for (int l = 0; l < net.layer_count(); ++l) {
        const int in = net.sizes[static_cast<std::size_t>(l)];
        const int out = net.sizes[static_cast<std::size_t>(l) + 1];
        const double* w = net.weights[static_cast<std::size_t>(l)].data();
        const double* b = net.biases[static_cast<std::size_t>(l)].data();
        const std::vector<double>& prev = cache.acts.back();
        std::vector<double> act(static_cast<std::size_t>(out));
        for (int o = 0; o < out; ++o) {
            double acc = b[o];
            const double* row = w + static_cast<std::size_t>(o) * in;
            for (int i = 0; i < in; ++i) acc += row[i] * prev[static_cast<std::size_t>(i)];
            act[static_cast<std::size_t>(o)] = (l + 1 < net.layer_count()) ? std::tanh(acc) : acc;
        }
        cache.acts.push_back(std::move(act));
    }
    return cache.acts.back();
}

MlpGrads MlpGrads::zeros_like(const Mlp& net) {
    MlpGrads g;
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        g.weights.emplace_back(net.weights[l].size(), 0.0);
        g.biases.emplace_back(net.biases[l].size(), 0.0);
    }
    return g;
}

void MlpGrads::zero() {
    for (auto& w : weights) std::fill(w.begin(), w.end(), 0.0);
    for (auto& b : biases) std::fill(b.begin(), b.end(), 0.0);
}

void MlpGrads::scale(double s) {
    for (auto& w : weights)
        for (double& x : w) x *= s;
    for (auto& b : biases)
        for (double& x : b) x *= s;
}

std::vector<double> backward(const Mlp& net, const ForwardCache& cache,
                             std::span<const double> upstream, MlpGrads& grads) {
    if (cache.acts.size() != static_cast<std::size_t>(net.layer_count()) + 1)
        throw std::invalid_argument("mlp backward: stale forward cache");
    if (upstream.size() != static_cast<std::size_t>(net.output_size()))
        throw std::invalid_argument("mlp backward: upstream gradient size mismatch");

    std::vector<double> delta(upstream.begin(), upstream.end());
    for (int l = net.layer_count() - 1; l >= 0; --l) {
        const int in = net.sizes[static_cast<std::size_t>(l)];
        const int out = net.sizes[static_cast<std::size_t>(l) + 1];
        const std::vector<double>& x = cache.acts[static_cast<std::size_t>(l)];
        const double* w = net.weights[static_cast<std::size_t>(l)].data();
        double* gw = grads.weights[static_cast<std::size_t>(l)].data();
        double* gb = grads.biases[static_cast<std::size_t>(l)].data();

        for (int o = 0; o < out; ++o) {
            const double d = delta[static_cast<std::size_t>(o)];
            gb[o] += d;
            double* grow = gw + static_cast<std::size_t>(o) * in;
            for (int i = 0; i < in; ++i) grow[i] += d * x[static_cast<std::size_t>(i)];
        }

        std::vector<double> prev_delta(static_cast<std::size_t>(in), 0.0);
        for (int o = 0; o < out; ++o) {
            const double d = delta[static_cast<std::size_t>(o)];
            const double* row = w + static_cast<std::size_t>(o) * in;
            for (int i = 0; i < in; ++i) prev_delta[static_cast<std::size_t>(i)] += d * row[i];
        }
        if (l > 0) {
            // x is the tanh output of the previous layer: tanh' = 1 - tanh^2.
            for (int i = 0; i < in; ++i)
                prev_delta[static_cast<std::size_t>(i)] *=
                    1.0 - x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
        }
        delta.swap(prev_delta);
    }
    return delta;
}

void Adam::step(Mlp& net, const MlpGrads& grads) {
    if (mw_.empty()) {
        for (std::size_t l = 0; l < net.weights.size(); ++l) {
            mw_.emplace_back(net.weights[l].size(), 0.0);
            vw_.emplace_back(net.weights[l].size(), 0.0);
            mb_.emplace_back(net.biases[l].size(), 0.0);
            vb_.emplace_back(net.biases[l].size(), 0.0);
        }
    }
    ++t_;
    const double corr1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double corr2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));

    auto update = [&](std::vector<double>& p, const std::vector<double>& g, std::vector<double>& m,
                      std::vector<double>& v) {
        if (p.size() != g.size() || p.size() != m.size())
            throw std::invalid_argument("adam: parameter/gradient shape mismatch");
        for (std::size_t i = 0; i < p.size(); ++i) {
            m[i] = beta1_ * m[i] + (1.0 - beta1_) * g[i];
            v[i] = beta2_ * v[i] + (1.0 - beta2_) * g[i] * g[i];
            p[i] -= lr_ * (m[i] / corr1) / (std::sqrt(v[i] / corr2) + eps_);
        }
    };
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        update(net.weights[l], grads.weights[l], mw_[l], vw_[l]);
        update(net.biases[l], grads.biases[l], mb_[l], vb_[l]);
    }
}

}  // namespace qrl
