#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "dqc/circuit.hpp"

namespace dqc {

/// Dense affine map y = W x + b with W stored row-major (out_dim x in_dim).
struct Linear {
    int out_dim = 0;
    int in_dim = 0;
    std::vector<double> weights;
    std::vector<double> bias;

    Linear() = default;
    Linear(int out_dim, int in_dim);

    double& w(int row, int col) { return weights[static_cast<std::size_t>(row) * in_dim + col]; }
    double w(int row, int col) const {
        return weights[static_cast<std::size_t>(row) * in_dim + col];
    }

    std::vector<double> apply(std::span<const double> x) const;

    bool operator==(const Linear&) const = default;
};

/// Tensors of the trainable head: pre-layer, circuit weights, post-layer.
struct DressedTensors {
    Linear pre;             ///< n_qubits x feature_dim
    QuantumWeights quantum; ///< q_depth x n_qubits
    Linear post;            ///< n_classes x n_qubits

    int feature_dim() const noexcept { return pre.in_dim; }
    int n_qubits() const noexcept { return pre.out_dim; }
    int n_classes() const noexcept { return post.out_dim; }

    /// Every tensor as a flat span, in a fixed order:
    /// pre weights, pre bias, quantum weights, post weights, post bias.
    std::array<std::span<double>, 5> tensors();
    std::array<std::span<const double>, 5> tensors() const;

    std::size_t parameter_count() const;
    bool same_shape(const DressedTensors& other) const;

    bool operator==(const DressedTensors&) const = default;
};

struct DressedParams : DressedTensors {};

/// d loss / d parameter, shaped like DressedParams.
struct DressedGradients : DressedTensors {
    static DressedGradients zeros_like(const DressedTensors& shape);
};

/// Seeded initialization: circuit weights ~ q_delta * N(0, 1); linear weights
/// ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)); biases zero.
DressedParams init_params(const CircuitConfig& config, int feature_dim, int n_classes,
                          std::uint64_t seed, double q_delta = 0.01);

/// Throws ArgumentError unless the parameter shapes agree with config.
void check_params(const DressedParams& params, const CircuitConfig& config);

/// Intermediate values of one forward pass.
struct ForwardTrace {
    std::vector<double> pre_activation; ///< pre-layer output
    std::vector<double> angles;         ///< (pi/2) tanh(pre_activation)
    std::vector<double> expectations;   ///< circuit outputs
    std::vector<double> logits;
};

ForwardTrace forward_trace(const DressedParams& params, std::span<const double> features,
                           const CircuitConfig& config);

std::vector<double> forward(const DressedParams& params, std::span<const double> features,
                            const CircuitConfig& config);

struct LossAndGradients {
    double loss = 0.0;
    DressedGradients grads;
};

/// Softmax cross-entropy loss and its gradient for one sample.
LossAndGradients backward(const DressedParams& params, std::span<const double> features,
                          int label, const CircuitConfig& config);

/// Index of the largest logit; ties go to the lowest index.
int argmax(std::span<const double> logits);

int predict(const DressedParams& params, std::span<const double> features,
            const CircuitConfig& config);

} // namespace dqc
