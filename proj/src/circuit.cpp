#include "dqc/circuit.hpp"

#include <array>
#include <utility>

#include "dqc/errors.hpp"

namespace dqc {

namespace {

struct Preset {
    const char* name;
    GateVariant variant;
};

const std::array<Preset, 8>& presets() {
    using enum Superposition;
    static const std::array<Preset, 8> table{{
        {"hadamard-cnot", {Hadamard, RotationAxis::RY, Entangler::CNOT}},
        {"s-hadamard-cnot", {HadamardThenS, RotationAxis::RY, Entangler::CNOT}},
        {"sdagger-hadamard-cnot", {HadamardThenSDagger, RotationAxis::RY, Entangler::CNOT}},
        {"rx-cnot", {None, RotationAxis::RX, Entangler::CNOT}},
        {"hadamard-cz", {Hadamard, RotationAxis::RY, Entangler::CZ}},
        {"hadamard-swap", {Hadamard, RotationAxis::RY, Entangler::SWAP}},
        {"hadamard-crx", {Hadamard, RotationAxis::RY, Entangler::CRX}},
        {"rx-crx", {None, RotationAxis::RX, Entangler::CRX}},
    }};
    return table;
}

SingleGateKind rotation_kind(RotationAxis axis) {
    return axis == RotationAxis::RY ? SingleGateKind::RY : SingleGateKind::RX;
}

// Gate plus whether the controlled-rotation slot order (target, control) is needed.
std::pair<GateMatrix, bool> entangler_gate(const GateVariant& v) {
    switch (v.entangler) {
    case Entangler::CNOT: return {make_two_gate(TwoGateKind::CNOT), false};
    case Entangler::CZ: return {make_two_gate(TwoGateKind::CZ), false};
    case Entangler::SWAP: return {make_two_gate(TwoGateKind::SWAP), false};
    case Entangler::CRX: return {make_two_gate(TwoGateKind::CRX, v.entangler_angle), true};
    case Entangler::CRY: return {make_two_gate(TwoGateKind::CRY, v.entangler_angle), true};
    case Entangler::CRZ: return {make_two_gate(TwoGateKind::CRZ, v.entangler_angle), true};
    }
    throw ArgumentError("unknown entangler");
}

void check_length(std::span<const double> angles, int n_qubits, const char* what) {
    if (angles.size() != static_cast<std::size_t>(n_qubits)) {
        throw ArgumentError(std::string(what) + ": expected " + std::to_string(n_qubits) +
                            " angles, got " + std::to_string(angles.size()));
    }
}

} // namespace

GateVariant variant_from_name(std::string_view name) {
    for (const auto& p : presets()) {
        if (name == p.name) return p.variant;
    }
    std::string known;
    for (const auto& p : presets()) {
        if (!known.empty()) known += ", ";
        known += p.name;
    }
    throw ConfigError("unknown gate variant '" + std::string(name) + "' (known: " + known + ")");
}

std::optional<std::string> variant_name(const GateVariant& variant) {
    for (const auto& p : presets()) {
        if (p.variant == variant) return std::string(p.name);
    }
    return std::nullopt;
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& p : presets()) out.emplace_back(p.name);
        return out;
    }();
    return names;
}

void CircuitConfig::validate() const {
    if (n_qubits < kMinQubits || n_qubits > kMaxQubits) {
        throw ConfigError("n_qubits must be in [" + std::to_string(kMinQubits) + ", " +
                          std::to_string(kMaxQubits) + "], got " + std::to_string(n_qubits));
    }
    if (q_depth < 0) throw ConfigError("q_depth must be >= 0, got " + std::to_string(q_depth));
}

QuantumWeights::QuantumWeights(int q_depth, int n_qubits)
    : q_depth_(q_depth), n_qubits_(n_qubits),
      flat_(static_cast<std::size_t>(q_depth) * static_cast<std::size_t>(n_qubits), 0.0) {
    if (q_depth < 0 || n_qubits < 0) throw ArgumentError("negative weight dimensions");
}

QuantumWeights QuantumWeights::from_flat(std::span<const double> flat, int q_depth, int n_qubits) {
    QuantumWeights w(q_depth, n_qubits);
    if (flat.size() != w.flat_.size()) {
        throw ArgumentError("quantum weights: expected " + std::to_string(w.flat_.size()) +
                            " values (" + std::to_string(q_depth) + " x " +
                            std::to_string(n_qubits) + "), got " + std::to_string(flat.size()));
    }
    w.flat_.assign(flat.begin(), flat.end());
    return w;
}

std::span<const double> QuantumWeights::layer(int k) const {
    if (k < 0 || k >= q_depth_) throw ArgumentError("layer index out of range");
    return std::span<const double>(flat_).subspan(index(k, 0), static_cast<std::size_t>(n_qubits_));
}

void h_layer(QuantumState& state) {
    const auto h = make_single_gate(SingleGateKind::H);
    for (int q = 0; q < state.n_qubits(); ++q) apply_one(state, h, q);
}

void rotation_layer(QuantumState& state, std::span<const double> angles, RotationAxis axis) {
    check_length(angles, state.n_qubits(), "rotation layer");
    const auto kind = rotation_kind(axis);
    for (int q = 0; q < state.n_qubits(); ++q) {
        apply_one(state, make_single_gate(kind, angles[static_cast<std::size_t>(q)]), q);
    }
}

void entangling_layer(QuantumState& state, const GateVariant& variant) {
    const auto [gate, target_first] = entangler_gate(variant);
    const int n = state.n_qubits();
    for (int start : {0, 1}) {
        for (int control = start; control + 1 < n; control += 2) {
            const int target = control + 1;
            if (target_first) {
                apply_two(state, gate, target, control);
            } else {
                apply_two(state, gate, control, target);
            }
        }
    }
}

void embedding_layer(QuantumState& state, std::span<const double> input_angles,
                     const GateVariant& variant) {
    check_length(input_angles, state.n_qubits(), "embedding layer");
    switch (variant.superposition) {
    case Superposition::Hadamard:
        h_layer(state);
        break;
    case Superposition::HadamardThenS:
    case Superposition::HadamardThenSDagger: {
        h_layer(state);
        const auto phase = make_single_gate(variant.superposition == Superposition::HadamardThenS
                                                ? SingleGateKind::S
                                                : SingleGateKind::SDagger);
        for (int q = 0; q < state.n_qubits(); ++q) apply_one(state, phase, q);
        break;
    }
    case Superposition::None:
        break;
    }
    rotation_layer(state, input_angles, variant.rotation);
}

std::vector<double> quantum_net(std::span<const double> input_angles,
                                std::span<const double> flat_weights,
                                const CircuitConfig& config) {
    config.validate();
    if (input_angles.size() != static_cast<std::size_t>(config.n_qubits)) {
        throw ArgumentError("quantum_net: expected " + std::to_string(config.n_qubits) +
                            " input angles, got " + std::to_string(input_angles.size()));
    }
    if (flat_weights.size() != config.weight_count()) {
        throw ArgumentError("quantum_net: expected " + std::to_string(config.weight_count()) +
                            " weights (q_depth " + std::to_string(config.q_depth) + " x n_qubits " +
                            std::to_string(config.n_qubits) + "), got " +
                            std::to_string(flat_weights.size()));
    }

    auto state = QuantumState::zero(config.n_qubits);
    embedding_layer(state, input_angles, config.variant);
    const auto n = static_cast<std::size_t>(config.n_qubits);
    for (int k = 0; k < config.q_depth; ++k) {
        entangling_layer(state, config.variant);
        rotation_layer(state, flat_weights.subspan(static_cast<std::size_t>(k) * n, n),
                       config.variant.rotation);
    }

    std::vector<double> out(n);
    for (int q = 0; q < config.n_qubits; ++q) out[static_cast<std::size_t>(q)] = expval_z(state, q);
    return out;
}

} // namespace dqc
