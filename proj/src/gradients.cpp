#include "dqc/gradients.hpp"

#include <numbers>
#include <string>

#include "dqc/errors.hpp"

namespace dqc {

namespace {

// out[q, p] = (f_q(x + shift e_p) - f_q(x - shift e_p)) * scale, where x is
// `varied` and `eval` runs the circuit on the current contents of `varied`.
template <typename Eval>
void shifted_columns(std::vector<double>& varied, std::size_t n_out, double shift, double scale,
                     Eval&& eval, std::vector<double>& out) {
    const auto n_params = varied.size();
    out.assign(n_out * n_params, 0.0);
    for (std::size_t p = 0; p < n_params; ++p) {
        const double saved = varied[p];
        varied[p] = saved + shift;
        const auto plus = eval();
        varied[p] = saved - shift;
        const auto minus = eval();
        varied[p] = saved;
        for (std::size_t q = 0; q < n_out; ++q) out[q * n_params + p] = (plus[q] - minus[q]) * scale;
    }
}

CircuitJacobian shifted_jacobian(std::span<const double> input_angles,
                                 std::span<const double> flat_weights,
                                 const CircuitConfig& config, double shift, double scale) {
    config.validate();
    if (input_angles.size() != static_cast<std::size_t>(config.n_qubits) ||
        flat_weights.size() != config.weight_count()) {
        throw ArgumentError("jacobian: expected " + std::to_string(config.n_qubits) +
                            " inputs and " + std::to_string(config.weight_count()) +
                            " weights, got " + std::to_string(input_angles.size()) + " and " +
                            std::to_string(flat_weights.size()));
    }
    CircuitJacobian jac;
    jac.n_outputs = config.n_qubits;
    jac.n_inputs = config.n_qubits;
    jac.n_weights = static_cast<int>(config.weight_count());

    std::vector<double> inputs(input_angles.begin(), input_angles.end());
    std::vector<double> weights(flat_weights.begin(), flat_weights.end());
    const auto n_out = static_cast<std::size_t>(config.n_qubits);
    auto run = [&] { return quantum_net(inputs, weights, config); };
    shifted_columns(weights, n_out, shift, scale, run, jac.d_weights);
    shifted_columns(inputs, n_out, shift, scale, run, jac.d_inputs);
    return jac;
}

} // namespace

CircuitJacobian param_shift_jacobian(std::span<const double> input_angles,
                                     std::span<const double> flat_weights,
                                     const CircuitConfig& config) {
    return shifted_jacobian(input_angles, flat_weights, config, std::numbers::pi / 2.0, 0.5);
}

CircuitJacobian finite_diff_jacobian(std::span<const double> input_angles,
                                     std::span<const double> flat_weights,
                                     const CircuitConfig& config, double h) {
    if (!(h > 0.0)) throw ArgumentError("finite difference step must be positive");
    return shifted_jacobian(input_angles, flat_weights, config, h, 0.5 / h);
}

} // namespace dqc
