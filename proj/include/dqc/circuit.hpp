#pragma once

#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dqc/statevector.hpp"

namespace dqc {

enum class Superposition { Hadamard, HadamardThenS, HadamardThenSDagger, None };
enum class RotationAxis { RY, RX };
enum class Entangler { CNOT, CZ, SWAP, CRX, CRY, CRZ };

/// Gate choices for the embedding and variational layers.
///
/// The variational rotations use the same axis as the embedding rotation.
/// Controlled-rotation entanglers carry a fixed, non-trainable angle.
struct GateVariant {
    Superposition superposition = Superposition::Hadamard;
    RotationAxis rotation = RotationAxis::RY;
    Entangler entangler = Entangler::CNOT;
    double entangler_angle = std::numbers::pi;

    bool operator==(const GateVariant&) const = default;
};

/// Named presets: "hadamard-cnot", "s-hadamard-cnot", "sdagger-hadamard-cnot",
/// "rx-cnot", "hadamard-cz", "hadamard-swap", "hadamard-crx", "rx-crx".
/// Throws ConfigError for any other name.
GateVariant variant_from_name(std::string_view name);

/// Preset name for a variant, if it matches one (entangler angle included).
std::optional<std::string> variant_name(const GateVariant& variant);

const std::vector<std::string>& preset_names();

struct CircuitConfig {
    int n_qubits = 4;
    int q_depth = 6;
    GateVariant variant{};

    /// Throws ConfigError unless kMinQubits <= n_qubits <= kMaxQubits and q_depth >= 0.
    void validate() const;

    std::size_t weight_count() const {
        return static_cast<std::size_t>(q_depth) * static_cast<std::size_t>(n_qubits);
    }
};

/// q_depth x n_qubits rotation angles, stored row-major by layer.
class QuantumWeights {
public:
    QuantumWeights() = default;
    QuantumWeights(int q_depth, int n_qubits);

    /// Reshapes a flat layer-major array; throws ArgumentError on size mismatch.
    static QuantumWeights from_flat(std::span<const double> flat, int q_depth, int n_qubits);

    int q_depth() const noexcept { return q_depth_; }
    int n_qubits() const noexcept { return n_qubits_; }

    std::span<const double> layer(int k) const;
    double& at(int layer, int qubit) { return flat_[index(layer, qubit)]; }
    double at(int layer, int qubit) const { return flat_[index(layer, qubit)]; }

    std::span<const double> flat() const noexcept { return flat_; }
    std::span<double> flat() noexcept { return flat_; }
    std::vector<double> flatten() const { return flat_; }

    bool operator==(const QuantumWeights&) const = default;

private:
    std::size_t index(int layer, int qubit) const {
        return static_cast<std::size_t>(layer) * static_cast<std::size_t>(n_qubits_) +
               static_cast<std::size_t>(qubit);
    }

    int q_depth_ = 0;
    int n_qubits_ = 0;
    std::vector<double> flat_;
};

void h_layer(QuantumState& state);

/// Rotation about `axis` by angles[k] on qubit k.
void rotation_layer(QuantumState& state, std::span<const double> angles, RotationAxis axis);

/// Entangler on pairs (0,1),(2,3),... then (1,2),(3,4),...; the lower index
/// of each pair is the control.
void entangling_layer(QuantumState& state, const GateVariant& variant);

/// Superposition stage of the variant followed by the input rotations.
void embedding_layer(QuantumState& state, std::span<const double> input_angles,
                     const GateVariant& variant);

/// Runs the full circuit from |0...0> and returns <Z> for every qubit.
std::vector<double> quantum_net(std::span<const double> input_angles,
                                std::span<const double> flat_weights,
                                const CircuitConfig& config);

} // namespace dqc
