#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "dqc/circuit.hpp"
#include "dqc/data.hpp"
#include "dqc/dressed.hpp"
#include "dqc/metrics.hpp"

namespace dqc {

struct TrainConfig {
    int epochs = 30;
    int batch_size = 8;
    double base_lr = 1e-3;
    double lr_gamma = 0.1;
    int lr_step_epochs = 10;
    std::uint64_t seed = 0;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    double q_delta = 0.01;
    int threads = 1; ///< workers for per-sample gradients; results do not depend on it

    /// Throws ConfigError for out-of-range values. epochs may be 0.
    void validate() const;
};

/// base_lr * lr_gamma^floor(epoch / lr_step_epochs)
double lr_at_epoch(int epoch, const TrainConfig& cfg);

struct AdamHyper {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// One bias-corrected Adam update on a flat tensor; `step` is the 1-based
/// step number after incrementing.
void adam_update(std::span<double> params, std::span<const double> grads,
                 std::span<double> first_moment, std::span<double> second_moment,
                 std::int64_t step, double lr, const AdamHyper& hyper);

struct AdamState {
    DressedGradients first_moment;
    DressedGradients second_moment;
    std::int64_t step_count = 0;

    static AdamState for_params(const DressedTensors& params);
};

void adam_step(DressedParams& params, const DressedGradients& grads, AdamState& state, double lr,
               const AdamHyper& hyper = {});

struct EpochRecord {
    int epoch = 0;
    double learning_rate = 0.0;
    double train_loss = 0.0;     ///< mean sample loss over the epoch's batches
    double train_accuracy = 0.0; ///< running accuracy over the epoch's batches
    double val_loss = 0.0;       ///< end-of-epoch parameters
    double val_accuracy = 0.0;

    bool operator==(const EpochRecord&) const = default;
};

using TrainHistory = std::vector<EpochRecord>;

struct FitResult {
    DressedParams params;  ///< parameters of the best validation epoch
    DressedParams initial; ///< parameters before the first update
    TrainHistory history;
    int best_epoch = -1;   ///< -1 when no epoch ran
    double initial_train_loss = 0.0;
    std::int64_t optimizer_steps = 0;
};

/// Mean cross-entropy and accuracy of params over records.
struct LossAccuracy {
    double loss = 0.0;
    double accuracy = 0.0;
};
LossAccuracy loss_and_accuracy(const DressedParams& params,
                               const std::vector<FeatureRecord>& records,
                               const CircuitConfig& config, int threads = 1);

/// Trains the dressed head with Adam and the step schedule. Returns the
/// parameters with the best validation accuracy (ties: later epoch).
/// Throws ArgumentError on empty inputs or dimension mismatch and
/// NumericError if a batch loss becomes non-finite.
FitResult fit(const std::vector<FeatureRecord>& train_set,
              const std::vector<FeatureRecord>& val_set, const DatasetManifest& manifest,
              const CircuitConfig& circuit, const TrainConfig& train);

std::vector<int> predict_all(const DressedParams& params, const std::vector<FeatureRecord>& records,
                             const CircuitConfig& config, int threads = 1);

struct Evaluation {
    ConfusionMatrix matrix;
    MetricsReport report;
};

Evaluation evaluate(const DressedParams& params, const std::vector<FeatureRecord>& records,
                    const CircuitConfig& config, int threads = 1);

void save_history(const TrainHistory& history, const std::filesystem::path& path);
TrainHistory load_history(const std::filesystem::path& path);

} // namespace dqc
