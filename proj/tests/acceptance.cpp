// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "dqc/checkpoint.hpp"
#include "dqc/gradients.hpp"
#include "dqc/training.hpp"
#include "support/dense_oracle.hpp"
#include "support/oracles.hpp"

using namespace dqc;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

std::string sci(double v) { return fmt("%.2e", v); }

int run_criterion(const char* name, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget_s > 0 && secs >= budget_s) {
        o.pass = false;
        o.detail += "; over time budget " + fmt("%.0f", budget_s) + " s";
    }
    std::printf("%s  %-28s %8.3f s  %s\n", o.pass ? "PASS" : "FAIL", name, secs, o.detail.c_str());
    std::fflush(stdout);
    return o.pass ? 0 : 1;
}

// ---------------------------------------------------------------- gates

using oracle::Complex;
using oracle::Dense;

Dense literal(int d, std::vector<Complex> entries) {
    Dense m(static_cast<std::size_t>(d));
    m.m = std::move(entries);
    return m;
}

double gate_error(const GateMatrix& g, const Dense& want) {
    double err = 0;
    for (int r = 0; r < g.dim(); ++r)
        for (int c = 0; c < g.dim(); ++c)
            err = std::max(err, std::abs(g(r, c) - want(static_cast<std::size_t>(r),
                                                        static_cast<std::size_t>(c))));
    return err;
}

Outcome gates() {
    const Complex i{0, 1};
    const double r2 = 1.0 / std::sqrt(2.0);
    std::vector<double> grid;
    for (int k = -8; k <= 8; ++k) grid.push_back(k * pi / 4);
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> dist(-4 * pi, 4 * pi);
    for (int k = 0; k < 32; ++k) grid.push_back(dist(rng));

    double entry = 0, unitary = 0;
    auto check = [&](const GateMatrix& g, const Dense& want) {
        entry = std::max(entry, gate_error(g, want));
        unitary = std::max(unitary, g.unitarity_error());
    };
    check(make_single_gate(SingleGateKind::H), literal(2, {r2, r2, r2, -r2}));
    check(make_single_gate(SingleGateKind::S), literal(2, {1, 0, 0, i}));
    check(make_single_gate(SingleGateKind::SDagger), literal(2, {1, 0, 0, -i}));
    check(make_two_gate(TwoGateKind::CNOT),
          literal(4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0}));
    check(make_two_gate(TwoGateKind::CZ),
          literal(4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1}));
    check(make_two_gate(TwoGateKind::SWAP),
          literal(4, {1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1}));
    for (double t : grid) {
        const double c = std::cos(t / 2), s = std::sin(t / 2);
        check(make_single_gate(SingleGateKind::RX, t), literal(2, {c, -i * s, -i * s, c}));
        check(make_single_gate(SingleGateKind::RY, t), literal(2, {c, -s, s, c}));
        check(make_two_gate(TwoGateKind::CRX, t),
              literal(4, {1, 0, 0, 0, 0, c, 0, -i * s, 0, 0, 1, 0, 0, -i * s, 0, c}));
        check(make_two_gate(TwoGateKind::CRY, t),
              literal(4, {1, 0, 0, 0, 0, c, 0, -s, 0, 0, 1, 0, 0, s, 0, c}));
        check(make_two_gate(TwoGateKind::CRZ, t),
              literal(4, {1, 0, 0, 0, 0, std::exp(-i * (t / 2)), 0, 0, 0, 0, 1, 0, 0, 0, 0,
                          std::exp(i * (t / 2))}));
    }
    return {entry < 1e-12 && unitary < 1e-12,
            "11 gates x " + std::to_string(grid.size()) + " angles, max entry error " + sci(entry) +
                ", max unitarity error " + sci(unitary)};
}

// ---------------------------------------------------------------- simulator

// A random gate drawn from every kind, applied both ways.
double random_gate_circuit(int n, int length, std::mt19937_64& rng) {
    const auto amps0 = oracle::random_state(n, rng);
    auto state = QuantumState::from_amplitudes(n, amps0);
    Dense u = oracle::identity(std::size_t{1} << n);
    std::uniform_real_distribution<double> angle(-pi, pi);
    for (int g = 0; g < length; ++g) {
        const int kind = static_cast<int>(rng() % 11);
        const int a = static_cast<int>(rng() % static_cast<unsigned>(n));
        int b = static_cast<int>(rng() % static_cast<unsigned>(n - 1));
        if (b >= a) ++b;
        const double t = angle(rng);
        Dense step;
        switch (kind) {
        case 0:
            apply_one(state, make_single_gate(SingleGateKind::H), a);
            step = oracle::on_qubit(oracle::h(), a, n);
            break;
        case 1:
            apply_one(state, make_single_gate(SingleGateKind::S), a);
            step = oracle::on_qubit(oracle::s(), a, n);
            break;
        case 2:
            apply_one(state, make_single_gate(SingleGateKind::SDagger), a);
            step = oracle::on_qubit(oracle::sdg(), a, n);
            break;
        case 3:
            apply_one(state, make_single_gate(SingleGateKind::RX, t), a);
            step = oracle::on_qubit(oracle::rx(t), a, n);
            break;
        case 4:
            apply_one(state, make_single_gate(SingleGateKind::RY, t), a);
            step = oracle::on_qubit(oracle::ry(t), a, n);
            break;
        // CNOT controls on its left bit, the controlled rotations on their right bit.
        case 5:
            apply_two(state, make_two_gate(TwoGateKind::CNOT), a, b);
            step = oracle::controlled(oracle::x(), a, b, n);
            break;
        case 6:
            apply_two(state, make_two_gate(TwoGateKind::CZ), a, b);
            step = oracle::controlled(oracle::z(), a, b, n);
            break;
        case 7:
            apply_two(state, make_two_gate(TwoGateKind::SWAP), a, b);
            step = oracle::swap_gate(a, b, n);
            break;
        case 8:
            apply_two(state, make_two_gate(TwoGateKind::CRX, t), b, a);
            step = oracle::controlled(oracle::rx(t), a, b, n);
            break;
        case 9:
            apply_two(state, make_two_gate(TwoGateKind::CRY, t), b, a);
            step = oracle::controlled(oracle::ry(t), a, b, n);
            break;
        default:
            apply_two(state, make_two_gate(TwoGateKind::CRZ, t), b, a);
            step = oracle::controlled(oracle::rz(t), a, b, n);
            break;
        }
        u = oracle::matmul(step, u);
    }
    return oracle::max_abs_diff(state.amplitudes(), oracle::matvec(u, amps0));
}

double variational_circuit(const CircuitConfig& cfg, std::mt19937_64& rng) {
    const auto inputs = oracle::random_angles(static_cast<std::size_t>(cfg.n_qubits), rng);
    const auto weights = oracle::random_angles(cfg.weight_count(), rng);
    auto state = QuantumState::zero(cfg.n_qubits);
    embedding_layer(state, inputs, cfg.variant);
    const auto n = static_cast<std::size_t>(cfg.n_qubits);
    for (int k = 0; k < cfg.q_depth; ++k) {
        entangling_layer(state, cfg.variant);
        rotation_layer(state, std::span<const double>(weights).subspan(k * n, n),
                       cfg.variant.rotation);
    }
    std::vector<Complex> zero(std::size_t{1} << cfg.n_qubits);
    zero[0] = 1.0;
    const auto want = oracle::matvec(oracle::circuit_unitary(inputs, weights, cfg), zero);
    const double state_err = oracle::max_abs_diff(state.amplitudes(), want);
    const double out_err = oracle::max_abs_diff(quantum_net(inputs, weights, cfg),
                                                oracle::quantum_net(inputs, weights, cfg));
    return std::max(state_err, out_err);
}

Outcome simulator() {
    std::mt19937_64 rng(202);
    const auto& presets = preset_names();
    double gate_err = 0, circ_err = 0;
    for (int k = 0; k < 50; ++k) {
        const int n = 2 + k % 3;
        gate_err = std::max(gate_err, random_gate_circuit(n, 25, rng));
        const CircuitConfig cfg{n, k % 5, variant_from_name(presets[k % presets.size()])};
        circ_err = std::max(circ_err, variational_circuit(cfg, rng));
    }
    return {gate_err < 1e-10 && circ_err < 1e-10,
            "50 random gate circuits max error " + sci(gate_err) +
                ", 50 variational circuits max error " + sci(circ_err)};
}

// ---------------------------------------------------------------- closed form

Outcome closed_form() {
    const CircuitConfig cfg{4, 0, {}};
    double err = 0;
    for (int k = 0; k < 20; ++k) {
        const double theta = -pi + 2 * pi * k / 19.0;
        const auto out = quantum_net(std::vector<double>{theta, 0, 0, 0}, {}, cfg);
        err = std::max(err, std::abs(out[0] + std::sin(theta)));
    }
    const auto zeros = quantum_net(std::vector<double>(4, 0.0), {}, cfg);
    double zero_err = 0;
    for (double v : zeros) zero_err = std::max(zero_err, std::abs(v));
    return {err < 1e-9 && zero_err < 1e-12,
            "output[0] vs -sin(theta) at 20 angles max error " + sci(err) +
                ", all-zero output max " + sci(zero_err)};
}

// ---------------------------------------------------------------- gradients

double jacobian_diff(const CircuitJacobian& a, const CircuitJacobian& b) {
    return std::max(oracle::max_abs_diff(a.d_weights, b.d_weights),
                    oracle::max_abs_diff(a.d_inputs, b.d_inputs));
}

Outcome gradients() {
    std::mt19937_64 rng(303);
    int instances = 0;
    double jac_err = 0;
    for (const auto& name : preset_names()) {
        for (int rep = 0; rep < 3; ++rep) {
            const CircuitConfig cfg{2 + rep, 1 + (instances % 4), variant_from_name(name)};
            const auto inputs = oracle::random_angles(static_cast<std::size_t>(cfg.n_qubits), rng);
            const auto weights = oracle::random_angles(cfg.weight_count(), rng);
            jac_err = std::max(jac_err, jacobian_diff(param_shift_jacobian(inputs, weights, cfg),
                                                      finite_diff_jacobian(inputs, weights, cfg)));
            ++instances;
        }
    }

    double loss_err = 0;
    int dressed = 0;
    std::normal_distribution<double> normal(0, 1);
    for (const auto& name : preset_names()) {
        const CircuitConfig cfg{2 + dressed % 2, 2, variant_from_name(name)};
        auto p = init_params(cfg, 6, 5, rng());
        for (auto t : p.tensors())
            for (auto& v : t) v = 0.8 * normal(rng);
        std::vector<double> x(6);
        for (auto& v : x) v = normal(rng);
        const int label = static_cast<int>(rng() % 5);
        const auto bw = backward(p, x, label, cfg);
        const auto fd = oracle::loss_gradient_fd(p, x, label, cfg);
        const auto got = bw.grads.tensors();
        const auto want = fd.tensors();
        for (std::size_t t = 0; t < got.size(); ++t)
            loss_err = std::max(loss_err, oracle::max_abs_diff(got[t], want[t]));
        ++dressed;
    }
    return {instances >= 20 && jac_err < 1e-6 && loss_err < 1e-5,
            std::to_string(instances) + " circuit Jacobians over 8 presets max error " +
                sci(jac_err) + ", " + std::to_string(dressed) +
                " dressed loss gradients max error " + sci(loss_err)};
}

// ---------------------------------------------------------------- learning

Outcome end_to_end() {
    const auto data = synth_blobs(7, 60, 16, 8.0);
    const auto [train_set, val_set] = split(data.records, 0.2, 7);
    const CircuitConfig circuit{4, 6, variant_from_name("hadamard-cnot")};
    TrainConfig train;
    train.epochs = 30;
    train.base_lr = 0.01;
    train.seed = 7;
    train.threads = 1;
    const auto r = fit(train_set, val_set, data.manifest, circuit, train);
    const double acc = evaluate(r.params, val_set, circuit).report.accuracy;
    const double ratio = r.history.back().train_loss / r.initial_train_loss;
    return {r.history.size() == 30 && acc >= 0.95 && ratio < 0.25,
            "held-out accuracy " + fmt("%.4f", acc) + " on " + std::to_string(val_set.size()) +
                " records, final/initial train loss " + fmt("%.4f", r.history.back().train_loss) +
                "/" + fmt("%.4f", r.initial_train_loss) + " = " + fmt("%.4f", ratio)};
}

// ---------------------------------------------------------------- metrics

double safe_ratio(std::int64_t num, std::int64_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

Outcome metrics() {
    std::mt19937_64 rng(404);
    bool counts_ok = true;
    double ratio_err = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n_classes = 2 + static_cast<int>(rng() % 5);
        const std::size_t len = 1 + rng() % 200;
        std::vector<int> truth(len), pred(len);
        for (std::size_t k = 0; k < len; ++k) {
            truth[k] = static_cast<int>(rng() % static_cast<unsigned>(n_classes));
            pred[k] = rng() % 3 == 0 ? truth[k]
                                     : static_cast<int>(rng() % static_cast<unsigned>(n_classes));
        }
        const auto rep = report(confusion(truth, pred, n_classes));
        const auto naive = oracle::naive_counts(truth, pred, n_classes);
        counts_ok &= rep.total == static_cast<std::int64_t>(len);
        ratio_err = std::max(ratio_err, std::abs(rep.accuracy - safe_ratio(naive.correct,
                                                                          static_cast<std::int64_t>(len))));
        for (int c = 0; c < n_classes; ++c) {
            const auto k = static_cast<std::size_t>(c);
            const auto& m = rep.per_class[k];
            const auto tp = naive.tp[k], tn = naive.tn[k], fp = naive.fp[k], fn = naive.fn[k];
            counts_ok &= m.counts.tp == tp && m.counts.tn == tn && m.counts.fp == fp &&
                         m.counts.fn == fn;
            const double precision = safe_ratio(tp, tp + fp);
            const double recall = safe_ratio(tp, tp + fn);
            const double f1 = precision + recall == 0
                                  ? 0.0
                                  : 2 * precision * recall / (precision + recall);
            ratio_err = std::max({ratio_err, std::abs(m.precision - precision),
                                  std::abs(m.recall - recall), std::abs(m.f1 - f1),
                                  std::abs(m.specificity - safe_ratio(tn, tn + fp))});
        }
    }

    // truth 1 = positive: TP 40, FN 10, FP 5, TN 45
    std::vector<int> truth, pred;
    auto add = [&](int t, int p, int count) {
        for (int k = 0; k < count; ++k) {
            truth.push_back(t);
            pred.push_back(p);
        }
    };
    add(1, 1, 40);
    add(1, 0, 10);
    add(0, 1, 5);
    add(0, 0, 45);
    const auto hand = report(confusion(truth, pred, 2)).per_class[1];
    const double hand_err =
        std::max({std::abs(hand.precision - 0.8889), std::abs(hand.recall - 0.8),
                  std::abs(hand.f1 - 0.8421), std::abs(hand.specificity - 0.9)});

    return {counts_ok && ratio_err < 1e-12 && hand_err < 1e-4,
            std::string("1000 random vectors counts ") + (counts_ok ? "exact" : "MISMATCH") +
                ", max ratio error " + sci(ratio_err) + "; hand case P/R/F1/Spec " +
                fmt("%.4f", hand.precision) + "/" + fmt("%.4f", hand.recall) + "/" +
                fmt("%.4f", hand.f1) + "/" + fmt("%.4f", hand.specificity)};
}

// ---------------------------------------------------------------- determinism

Outcome determinism() {
    const auto dir = fs::temp_directory_path() / ("dqc_accept_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
    struct Cleanup {
        fs::path p;
        ~Cleanup() { fs::remove_all(p); }
    } cleanup{dir};

    const auto data = synth_blobs(11, 20, 8, 5.0);
    const auto [train_set, val_set] = split(data.records, 0.2, 11);
    const CircuitConfig circuit{4, 3, variant_from_name("hadamard-crx")};
    TrainConfig train;
    train.epochs = 5;
    train.base_lr = 0.01;
    train.seed = 11;
    const auto a = fit(train_set, val_set, data.manifest, circuit, train);
    const auto b = fit(train_set, val_set, data.manifest, circuit, train);
    auto threaded = train;
    threaded.threads = 4;
    const auto c = fit(train_set, val_set, data.manifest, circuit, threaded);
    const bool histories = a.history == b.history && a.history == c.history && a.params == b.params;

    save_features(data.manifest, data.records, dir / "f.csv", dir / "m.json");
    const auto back = load_features(dir / "f.csv", dir / "m.json");
    const bool features = back.records == data.records && back.manifest == data.manifest;

    Checkpoint ck;
    ck.circuit = circuit;
    ck.feature_dim = 8;
    ck.n_classes = 5;
    ck.class_names = data.manifest.class_names;
    ck.params = a.params;
    ck.train = train;
    ck.best_epoch = a.best_epoch;
    save_checkpoint(ck, dir / "ck.json");
    const bool checkpoint = load_checkpoint(dir / "ck.json").params == a.params;

    const auto flat = a.params.quantum.flatten();
    const auto reshaped = QuantumWeights::from_flat(flat, 3, 4);
    const bool weights = reshaped == a.params.quantum && reshaped.flatten() == flat;

    auto yes = [](bool v) { return v ? "ok" : "MISMATCH"; };
    return {histories && features && checkpoint && weights,
            std::string("histories ") + yes(histories) + ", feature files " + yes(features) +
                ", checkpoint " + yes(checkpoint) + ", weight reshape " + yes(weights)};
}

} // namespace

int main() {
    int failed = 0;
    failed += run_criterion("gate correctness", 1.0, gates);
    failed += run_criterion("simulator oracle equivalence", 10.0, simulator);
    failed += run_criterion("closed-form circuit", 0.0, closed_form);
    failed += run_criterion("gradient fidelity", 60.0, gradients);
    failed += run_criterion("end-to-end learning", 300.0, end_to_end);
    failed += run_criterion("metrics oracle", 0.0, metrics);
    failed += run_criterion("determinism and round trips", 0.0, determinism);
    std::printf("%d of 7 criteria failed\n", failed);
    return failed;
}
