#pragma once

#include <span>
#include <vector>

#include "dqc/circuit.hpp"

namespace dqc {

/// Partial derivatives of the circuit outputs <Z_q>.
/// Both blocks are row-major with one row per output qubit.
struct CircuitJacobian {
    int n_outputs = 0;
    int n_weights = 0;
    int n_inputs = 0;
    std::vector<double> d_weights; ///< n_outputs x n_weights
    std::vector<double> d_inputs;  ///< n_outputs x n_inputs

    double weight(int output, int param) const {
        return d_weights[static_cast<std::size_t>(output) * n_weights + param];
    }
    double input(int output, int param) const {
        return d_inputs[static_cast<std::size_t>(output) * n_inputs + param];
    }
};

/// Exact Jacobian from the two-term shift rule, [f(t + pi/2) - f(t - pi/2)] / 2.
/// Valid because every input angle and weight drives exactly one RX/RY gate.
CircuitJacobian param_shift_jacobian(std::span<const double> input_angles,
                                     std::span<const double> flat_weights,
                                     const CircuitConfig& config);

/// Central differences with step h. Reference for tests.
CircuitJacobian finite_diff_jacobian(std::span<const double> input_angles,
                                     std::span<const double> flat_weights,
                                     const CircuitConfig& config, double h = 1e-5);

} // namespace dqc
