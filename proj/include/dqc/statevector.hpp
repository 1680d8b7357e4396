#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace dqc {

using Complex = std::complex<double>;

inline constexpr int kMinQubits = 2;
inline constexpr int kMaxQubits = 12;

/// Pure state of n qubits as 2^n complex amplitudes.
///
/// Basis index i encodes qubit k in bit (n-1-k): qubit 0 is the most
/// significant bit, so for two qubits the basis order is |00>,|01>,|10>,|11>
/// with qubit 0 on the left.
class QuantumState {
public:
    /// |0...0> on n_qubits; throws ConfigError outside [kMinQubits, kMaxQubits].
    static QuantumState zero(int n_qubits);

    /// Wraps explicit amplitudes. The length must be 2^n_qubits; no normalization is applied.
    static QuantumState from_amplitudes(int n_qubits, std::vector<Complex> amplitudes);

    int n_qubits() const noexcept { return n_qubits_; }
    std::size_t dim() const noexcept { return amplitudes_.size(); }

    std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
    std::span<Complex> amplitudes() noexcept { return amplitudes_; }

    Complex operator[](std::size_t i) const { return amplitudes_[i]; }

    double norm_squared() const noexcept;

private:
    QuantumState(int n_qubits, std::vector<Complex> amplitudes)
        : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {}

    int n_qubits_;
    std::vector<Complex> amplitudes_;
};

enum class SingleGateKind { H, S, SDagger, RX, RY };
enum class TwoGateKind { CNOT, CZ, SWAP, CRX, CRY, CRZ };

/// Row-major 2x2 or 4x4 unitary. Two-qubit matrices use the basis
/// |00>,|01>,|10>,|11> where the left bit is the first qubit passed to
/// apply_two().
class GateMatrix {
public:
    GateMatrix(int arity, std::span<const Complex> entries);

    int arity() const noexcept { return arity_; }
    int dim() const noexcept { return arity_ == 1 ? 2 : 4; }

    Complex operator()(int row, int col) const { return entries_[row * dim() + col]; }

    /// max |(U^dagger U - I)_{ij}|
    double unitarity_error() const;

private:
    int arity_;
    std::array<Complex, 16> entries_{};
};

/// Hadamard, S, S-dagger, RX(theta), RY(theta). Angle must be given exactly
/// for the rotations; throws ArgumentError otherwise.
GateMatrix make_single_gate(SingleGateKind kind, std::optional<double> angle = std::nullopt);

/// CNOT, CZ, SWAP and the controlled rotations CRX/CRY/CRZ.
///
/// CNOT conditions on the left bit. The controlled rotations mix |01> with
/// |11>, i.e. they rotate the left bit conditioned on the right bit; pass
/// (target, control) to apply_two() to use them. Angle presence rules match
/// make_single_gate().
GateMatrix make_two_gate(TwoGateKind kind, std::optional<double> angle = std::nullopt);

void apply_one(QuantumState& state, const GateMatrix& gate, int qubit);

/// Applies a 4x4 gate with `first` as the left bit and `second` as the right bit.
void apply_two(QuantumState& state, const GateMatrix& gate, int first, int second);

/// <Z> on one qubit, computed exactly from the amplitudes.
double expval_z(const QuantumState& state, int qubit);

} // namespace dqc
