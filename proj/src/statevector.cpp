#include "dqc/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dqc/errors.hpp"

namespace dqc {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_qubit(const QuantumState& state, int qubit, const char* what) {
    if (qubit < 0 || qubit >= state.n_qubits()) {
        throw ArgumentError(std::string(what) + " qubit index " + std::to_string(qubit) +
                            " out of range for " + std::to_string(state.n_qubits()) + " qubits");
    }
}

// Bit position (from the least significant end) holding `qubit`.
std::size_t bit_mask(const QuantumState& state, int qubit) {
    return std::size_t{1} << (state.n_qubits() - 1 - qubit);
}

void check_angle(bool needs_angle, const std::optional<double>& angle, const char* name) {
    if (needs_angle && !angle) {
        throw ArgumentError(std::string(name) + " requires a rotation angle");
    }
    if (!needs_angle && angle) {
        throw ArgumentError(std::string(name) + " takes no angle");
    }
}

} // namespace

QuantumState QuantumState::zero(int n_qubits) {
    if (n_qubits < kMinQubits || n_qubits > kMaxQubits) {
        throw ConfigError("n_qubits must be in [" + std::to_string(kMinQubits) + ", " +
                          std::to_string(kMaxQubits) + "], got " + std::to_string(n_qubits));
    }
    std::vector<Complex> amps(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amps[0] = 1.0;
    return QuantumState(n_qubits, std::move(amps));
}

QuantumState QuantumState::from_amplitudes(int n_qubits, std::vector<Complex> amplitudes) {
    if (n_qubits < kMinQubits || n_qubits > kMaxQubits) {
        throw ConfigError("n_qubits must be in [" + std::to_string(kMinQubits) + ", " +
                          std::to_string(kMaxQubits) + "], got " + std::to_string(n_qubits));
    }
    if (amplitudes.size() != (std::size_t{1} << n_qubits)) {
        throw ArgumentError("expected " + std::to_string(std::size_t{1} << n_qubits) +
                            " amplitudes, got " + std::to_string(amplitudes.size()));
    }
    return QuantumState(n_qubits, std::move(amplitudes));
}

double QuantumState::norm_squared() const noexcept {
    double total = 0.0;
    for (const auto& a : amplitudes_) total += std::norm(a);
    return total;
}

GateMatrix::GateMatrix(int arity, std::span<const Complex> entries) : arity_(arity) {
    if (arity != 1 && arity != 2) throw ArgumentError("gate arity must be 1 or 2");
    const auto n = static_cast<std::size_t>(dim() * dim());
    if (entries.size() != n) {
        throw ArgumentError("gate of arity " + std::to_string(arity) + " needs " +
                            std::to_string(n) + " entries");
    }
    std::copy(entries.begin(), entries.end(), entries_.begin());
}

double GateMatrix::unitarity_error() const {
    const int d = dim();
    double worst = 0.0;
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            Complex acc{0.0, 0.0};
            for (int k = 0; k < d; ++k) acc += std::conj((*this)(k, r)) * (*this)(k, c);
            if (r == c) acc -= 1.0;
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

GateMatrix make_single_gate(SingleGateKind kind, std::optional<double> angle) {
    switch (kind) {
    case SingleGateKind::H: {
        check_angle(false, angle, "H");
        const double r = 1.0 / std::sqrt(2.0);
        const std::array<Complex, 4> m{r, r, r, -r};
        return GateMatrix(1, m);
    }
    case SingleGateKind::S: {
        check_angle(false, angle, "S");
        const std::array<Complex, 4> m{1.0, 0.0, 0.0, kI};
        return GateMatrix(1, m);
    }
    case SingleGateKind::SDagger: {
        check_angle(false, angle, "S_DAGGER");
        const std::array<Complex, 4> m{1.0, 0.0, 0.0, -kI};
        return GateMatrix(1, m);
    }
    case SingleGateKind::RX: {
        check_angle(true, angle, "RX");
        const double c = std::cos(*angle / 2.0);
        const double s = std::sin(*angle / 2.0);
        const std::array<Complex, 4> m{c, -kI * s, -kI * s, c};
        return GateMatrix(1, m);
    }
    case SingleGateKind::RY: {
        check_angle(true, angle, "RY");
        const double c = std::cos(*angle / 2.0);
        const double s = std::sin(*angle / 2.0);
        const std::array<Complex, 4> m{c, -s, s, c};
        return GateMatrix(1, m);
    }
    }
    throw ArgumentError("unknown single-qubit gate kind");
}

GateMatrix make_two_gate(TwoGateKind kind, std::optional<double> angle) {
    std::array<Complex, 16> m{};
    auto set = [&m](int r, int c, Complex v) { m[r * 4 + c] = v; };
    switch (kind) {
    case TwoGateKind::CNOT:
        check_angle(false, angle, "CNOT");
        set(0, 0, 1.0);
        set(1, 1, 1.0);
        set(2, 3, 1.0);
        set(3, 2, 1.0);
        break;
    case TwoGateKind::CZ:
        check_angle(false, angle, "CZ");
        set(0, 0, 1.0);
        set(1, 1, 1.0);
        set(2, 2, 1.0);
        set(3, 3, -1.0);
        break;
    case TwoGateKind::SWAP:
        check_angle(false, angle, "SWAP");
        set(0, 0, 1.0);
        set(1, 2, 1.0);
        set(2, 1, 1.0);
        set(3, 3, 1.0);
        break;
    case TwoGateKind::CRX: {
        check_angle(true, angle, "CRX");
        const double c = std::cos(*angle / 2.0);
        const double s = std::sin(*angle / 2.0);
        set(0, 0, 1.0);
        set(1, 1, c);
        set(1, 3, -kI * s);
        set(2, 2, 1.0);
        set(3, 1, -kI * s);
        set(3, 3, c);
        break;
    }
    case TwoGateKind::CRY: {
        check_angle(true, angle, "CRY");
        const double c = std::cos(*angle / 2.0);
        const double s = std::sin(*angle / 2.0);
        set(0, 0, 1.0);
        set(1, 1, c);
        set(1, 3, -s);
        set(2, 2, 1.0);
        set(3, 1, s);
        set(3, 3, c);
        break;
    }
    case TwoGateKind::CRZ: {
        check_angle(true, angle, "CRZ");
        set(0, 0, 1.0);
        set(1, 1, std::exp(-kI * (*angle / 2.0)));
        set(2, 2, 1.0);
        set(3, 3, std::exp(kI * (*angle / 2.0)));
        break;
    }
    default:
        throw ArgumentError("unknown two-qubit gate kind");
    }
    return GateMatrix(2, m);
}

void apply_one(QuantumState& state, const GateMatrix& gate, int qubit) {
    if (gate.arity() != 1) throw ArgumentError("apply_one needs a single-qubit gate");
    check_qubit(state, qubit, "target");

    const std::size_t mask = bit_mask(state, qubit);
    const Complex u00 = gate(0, 0), u01 = gate(0, 1), u10 = gate(1, 0), u11 = gate(1, 1);
    auto amps = state.amplitudes();
    const std::size_t n = amps.size();
    // Enumerate indices with the target bit clear in blocks of `mask`.
    for (std::size_t base = 0; base < n; base += 2 * mask) {
        for (std::size_t i0 = base; i0 < base + mask; ++i0) {
            const std::size_t i1 = i0 | mask;
            const Complex a = amps[i0];
            const Complex b = amps[i1];
            amps[i0] = u00 * a + u01 * b;
            amps[i1] = u10 * a + u11 * b;
        }
    }
}

void apply_two(QuantumState& state, const GateMatrix& gate, int first, int second) {
    if (gate.arity() != 2) throw ArgumentError("apply_two needs a two-qubit gate");
    check_qubit(state, first, "first");
    check_qubit(state, second, "second");
    if (first == second) {
        throw ArgumentError("apply_two needs distinct qubits, got " + std::to_string(first) +
                            " twice");
    }

    const std::size_t mf = bit_mask(state, first);
    const std::size_t ms = bit_mask(state, second);
    auto amps = state.amplitudes();
    const std::size_t n = amps.size();
    std::array<Complex, 4> in{};
    for (std::size_t i = 0; i < n; ++i) {
        if ((i & mf) || (i & ms)) continue;
        const std::array<std::size_t, 4> idx{i, i | ms, i | mf, i | mf | ms};
        for (int k = 0; k < 4; ++k) in[k] = amps[idx[k]];
        for (int r = 0; r < 4; ++r) {
            Complex acc{0.0, 0.0};
            for (int c = 0; c < 4; ++c) acc += gate(r, c) * in[c];
            amps[idx[r]] = acc;
        }
    }
}

double expval_z(const QuantumState& state, int qubit) {
    check_qubit(state, qubit, "measured");
    const std::size_t mask = bit_mask(state, qubit);
    const auto amps = state.amplitudes();
    double total = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        total += (i & mask) ? -p : p;
    }
    return std::clamp(total, -1.0, 1.0);
}

} // namespace dqc
