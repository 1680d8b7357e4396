#include "dqc/dressed.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "dqc/errors.hpp"
#include "dqc/gradients.hpp"
#include "dqc/loss.hpp"

namespace dqc {

namespace {

constexpr double kAngleScale = std::numbers::pi / 2.0;

void check_features(const DressedParams& params, std::span<const double> features) {
    if (features.size() != static_cast<std::size_t>(params.feature_dim())) {
        throw ArgumentError("expected " + std::to_string(params.feature_dim()) +
                            " features, got " + std::to_string(features.size()));
    }
}

void fill_uniform(std::span<double> values, double bound, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (auto& v : values) v = dist(rng);
}

} // namespace

Linear::Linear(int out_dim, int in_dim)
    : out_dim(out_dim), in_dim(in_dim),
      weights(static_cast<std::size_t>(out_dim) * static_cast<std::size_t>(in_dim), 0.0),
      bias(static_cast<std::size_t>(out_dim), 0.0) {
    if (out_dim < 0 || in_dim < 0) throw ArgumentError("negative layer dimensions");
}

std::vector<double> Linear::apply(std::span<const double> x) const {
    if (x.size() != static_cast<std::size_t>(in_dim)) {
        throw ArgumentError("linear layer: expected input of size " + std::to_string(in_dim) +
                            ", got " + std::to_string(x.size()));
    }
    std::vector<double> y(bias);
    for (int r = 0; r < out_dim; ++r) {
        double acc = 0.0;
        const double* row = weights.data() + static_cast<std::size_t>(r) * in_dim;
        for (int c = 0; c < in_dim; ++c) acc += row[c] * x[static_cast<std::size_t>(c)];
        y[static_cast<std::size_t>(r)] += acc;
    }
    return y;
}

std::array<std::span<double>, 5> DressedTensors::tensors() {
    return {pre.weights, pre.bias, quantum.flat(), post.weights, post.bias};
}

std::array<std::span<const double>, 5> DressedTensors::tensors() const {
    return {pre.weights, pre.bias, quantum.flat(), post.weights, post.bias};
}

std::size_t DressedTensors::parameter_count() const {
    std::size_t n = 0;
    for (const auto& t : tensors()) n += t.size();
    return n;
}

bool DressedTensors::same_shape(const DressedTensors& other) const {
    return pre.out_dim == other.pre.out_dim && pre.in_dim == other.pre.in_dim &&
           quantum.q_depth() == other.quantum.q_depth() &&
           quantum.n_qubits() == other.quantum.n_qubits() && post.out_dim == other.post.out_dim &&
           post.in_dim == other.post.in_dim;
}

DressedGradients DressedGradients::zeros_like(const DressedTensors& shape) {
    DressedGradients g;
    g.pre = Linear(shape.pre.out_dim, shape.pre.in_dim);
    g.quantum = QuantumWeights(shape.quantum.q_depth(), shape.quantum.n_qubits());
    g.post = Linear(shape.post.out_dim, shape.post.in_dim);
    return g;
}

DressedParams init_params(const CircuitConfig& config, int feature_dim, int n_classes,
                          std::uint64_t seed, double q_delta) {
    config.validate();
    if (!(q_delta > 0.0)) throw ArgumentError("q_delta must be positive");
    if (feature_dim <= 0) throw ArgumentError("feature_dim must be positive");
    if (n_classes <= 0) throw ArgumentError("n_classes must be positive");

    std::mt19937_64 rng(seed);
    DressedParams p;
    p.pre = Linear(config.n_qubits, feature_dim);
    p.quantum = QuantumWeights(config.q_depth, config.n_qubits);
    p.post = Linear(n_classes, config.n_qubits);

    std::normal_distribution<double> normal(0.0, 1.0);
    for (auto& w : p.quantum.flat()) w = q_delta * normal(rng);
    fill_uniform(p.pre.weights, 1.0 / std::sqrt(static_cast<double>(feature_dim)), rng);
    fill_uniform(p.post.weights, 1.0 / std::sqrt(static_cast<double>(config.n_qubits)), rng);
    return p;
}

void check_params(const DressedParams& params, const CircuitConfig& config) {
    config.validate();
    const bool ok = params.pre.out_dim == config.n_qubits &&
                    params.quantum.q_depth() == config.q_depth &&
                    params.quantum.n_qubits() == config.n_qubits &&
                    params.post.in_dim == config.n_qubits;
    if (!ok) {
        throw ArgumentError("parameters do not match circuit config (n_qubits " +
                            std::to_string(config.n_qubits) + ", q_depth " +
                            std::to_string(config.q_depth) + ")");
    }
}

ForwardTrace forward_trace(const DressedParams& params, std::span<const double> features,
                           const CircuitConfig& config) {
    check_params(params, config);
    check_features(params, features);

    ForwardTrace t;
    t.pre_activation = params.pre.apply(features);
    t.angles.resize(t.pre_activation.size());
    for (std::size_t k = 0; k < t.angles.size(); ++k) {
        t.angles[k] = kAngleScale * std::tanh(t.pre_activation[k]);
    }
    t.expectations = quantum_net(t.angles, params.quantum.flat(), config);
    t.logits = params.post.apply(t.expectations);
    return t;
}

std::vector<double> forward(const DressedParams& params, std::span<const double> features,
                            const CircuitConfig& config) {
    return forward_trace(params, features, config).logits;
}

LossAndGradients backward(const DressedParams& params, std::span<const double> features,
                          int label, const CircuitConfig& config) {
    if (label < 0 || label >= params.n_classes()) {
        throw ArgumentError("label " + std::to_string(label) + " out of range for " +
                            std::to_string(params.n_classes()) + " classes");
    }
    const auto t = forward_trace(params, features, config);

    LossAndGradients out;
    out.loss = cross_entropy(t.logits, label);
    auto& g = out.grads;
    g = DressedGradients::zeros_like(params);

    const auto d_logits = cross_entropy_grad(t.logits, label);
    const int n_q = params.n_qubits();
    const int n_c = params.n_classes();
    const int dim = params.feature_dim();

    std::vector<double> d_expect(static_cast<std::size_t>(n_q), 0.0);
    for (int c = 0; c < n_c; ++c) {
        const double dl = d_logits[static_cast<std::size_t>(c)];
        g.post.bias[static_cast<std::size_t>(c)] = dl;
        for (int q = 0; q < n_q; ++q) {
            g.post.w(c, q) = dl * t.expectations[static_cast<std::size_t>(q)];
            d_expect[static_cast<std::size_t>(q)] += dl * params.post.w(c, q);
        }
    }

    const auto jac = param_shift_jacobian(t.angles, params.quantum.flat(), config);
    auto d_qw = g.quantum.flat();
    for (int j = 0; j < jac.n_weights; ++j) {
        double acc = 0.0;
        for (int q = 0; q < n_q; ++q) acc += d_expect[static_cast<std::size_t>(q)] * jac.weight(q, j);
        d_qw[static_cast<std::size_t>(j)] = acc;
    }

    for (int k = 0; k < n_q; ++k) {
        double d_angle = 0.0;
        for (int q = 0; q < n_q; ++q) d_angle += d_expect[static_cast<std::size_t>(q)] * jac.input(q, k);
        const double th = std::tanh(t.pre_activation[static_cast<std::size_t>(k)]);
        const double d_pre = d_angle * kAngleScale * (1.0 - th * th);
        g.pre.bias[static_cast<std::size_t>(k)] = d_pre;
        for (int i = 0; i < dim; ++i) g.pre.w(k, i) = d_pre * features[static_cast<std::size_t>(i)];
    }
    return out;
}

int argmax(std::span<const double> logits) {
    if (logits.empty()) throw ArgumentError("argmax of empty vector");
    std::size_t best = 0;
    for (std::size_t i = 1; i < logits.size(); ++i) {
        if (logits[i] > logits[best]) best = i;
    }
    return static_cast<int>(best);
}

int predict(const DressedParams& params, std::span<const double> features,
            const CircuitConfig& config) {
    return argmax(forward(params, features, config));
}

} // namespace dqc
