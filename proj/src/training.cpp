#include "dqc/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "dqc/errors.hpp"
#include "dqc/loss.hpp"

namespace dqc {

namespace {

// Splits [0, n) into contiguous chunks, one per worker. Each index is
// handled by exactly one call of fn(i).
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::jthread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, w, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    pool.clear();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void check_records(const std::vector<FeatureRecord>& records, const DressedParams& params,
                   const char* what) {
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (r.features.size() != static_cast<std::size_t>(params.feature_dim())) {
            throw ArgumentError(std::string(what) + " record " + std::to_string(i) + " has " +
                                std::to_string(r.features.size()) + " features, model expects " +
                                std::to_string(params.feature_dim()));
        }
        if (r.label < 0 || r.label >= params.n_classes()) {
            throw ArgumentError(std::string(what) + " record " + std::to_string(i) +
                                " has label " + std::to_string(r.label) + " out of range");
        }
    }
}

} // namespace

void TrainConfig::validate() const {
    if (epochs < 0) throw ConfigError("epochs must be >= 0");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (!(base_lr > 0.0)) throw ConfigError("base_lr must be positive");
    if (!(lr_gamma > 0.0 && lr_gamma <= 1.0)) throw ConfigError("lr_gamma must be in (0, 1]");
    if (lr_step_epochs < 1) throw ConfigError("lr_step_epochs must be >= 1");
    if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0)) throw ConfigError("adam_beta1 must be in [0, 1)");
    if (!(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) throw ConfigError("adam_beta2 must be in [0, 1)");
    if (!(adam_epsilon > 0.0)) throw ConfigError("adam_epsilon must be positive");
    if (!(q_delta > 0.0)) throw ConfigError("q_delta must be positive");
    if (threads < 1) throw ConfigError("threads must be >= 1");
}

double lr_at_epoch(int epoch, const TrainConfig& cfg) {
    const int drops = std::max(0, epoch) / cfg.lr_step_epochs;
    return cfg.base_lr * std::pow(cfg.lr_gamma, drops);
}

void adam_update(std::span<double> params, std::span<const double> grads,
                 std::span<double> first_moment, std::span<double> second_moment,
                 std::int64_t step, double lr, const AdamHyper& hyper) {
    if (grads.size() != params.size() || first_moment.size() != params.size() ||
        second_moment.size() != params.size()) {
        throw ArgumentError("adam: tensor sizes differ");
    }
    const double t = static_cast<double>(step);
    const double correction1 = 1.0 - std::pow(hyper.beta1, t);
    const double correction2 = 1.0 - std::pow(hyper.beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        first_moment[i] = hyper.beta1 * first_moment[i] + (1.0 - hyper.beta1) * g;
        second_moment[i] = hyper.beta2 * second_moment[i] + (1.0 - hyper.beta2) * g * g;
        const double m_hat = first_moment[i] / correction1;
        const double v_hat = second_moment[i] / correction2;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + hyper.epsilon);
    }
}

AdamState AdamState::for_params(const DressedTensors& params) {
    return {DressedGradients::zeros_like(params), DressedGradients::zeros_like(params), 0};
}

void adam_step(DressedParams& params, const DressedGradients& grads, AdamState& state, double lr,
               const AdamHyper& hyper) {
    if (!params.same_shape(grads) || !params.same_shape(state.first_moment) ||
        !params.same_shape(state.second_moment)) {
        throw ArgumentError("adam: gradient/state shapes do not match parameters");
    }
    ++state.step_count;
    auto p = params.tensors();
    const auto g = grads.tensors();
    auto m = state.first_moment.tensors();
    auto v = state.second_moment.tensors();
    for (std::size_t k = 0; k < p.size(); ++k) {
        adam_update(p[k], g[k], m[k], v[k], state.step_count, lr, hyper);
    }
}

LossAccuracy loss_and_accuracy(const DressedParams& params,
                               const std::vector<FeatureRecord>& records,
                               const CircuitConfig& config, int threads) {
    if (records.empty()) throw ArgumentError("loss_and_accuracy: empty record set");
    std::vector<double> losses(records.size());
    std::vector<int> hits(records.size());
    parallel_for(records.size(), threads, [&](std::size_t i) {
        const auto logits = forward(params, records[i].features, config);
        losses[i] = cross_entropy(logits, records[i].label);
        hits[i] = argmax(logits) == records[i].label;
    });
    LossAccuracy out;
    const auto n = static_cast<double>(records.size());
    out.loss = std::accumulate(losses.begin(), losses.end(), 0.0) / n;
    out.accuracy = std::accumulate(hits.begin(), hits.end(), 0) / n;
    return out;
}

FitResult fit(const std::vector<FeatureRecord>& train_set,
              const std::vector<FeatureRecord>& val_set, const DatasetManifest& manifest,
              const CircuitConfig& circuit, const TrainConfig& train) {
    circuit.validate();
    train.validate();
    manifest.validate();
    if (train_set.empty()) throw ArgumentError("fit: training set is empty");
    if (val_set.empty()) throw ArgumentError("fit: validation set is empty");

    FitResult result;
    result.initial = init_params(circuit, manifest.feature_dim, manifest.n_classes, train.seed,
                                 train.q_delta);
    check_records(train_set, result.initial, "training");
    check_records(val_set, result.initial, "validation");

    DressedParams params = result.initial;
    result.params = params;
    result.initial_train_loss = loss_and_accuracy(params, train_set, circuit, train.threads).loss;

    AdamState adam = AdamState::for_params(params);
    const AdamHyper hyper{train.adam_beta1, train.adam_beta2, train.adam_epsilon};
    // Data order gets its own stream so it does not shift when init changes.
    std::mt19937_64 shuffle_rng(train.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    const auto batch = static_cast<std::size_t>(train.batch_size);
    double best_acc = -1.0;
    std::vector<LossAndGradients> sample(batch);

    for (int epoch = 0; epoch < train.epochs; ++epoch) {
        const double lr = lr_at_epoch(epoch, train);
        std::shuffle(order.begin(), order.end(), shuffle_rng);

        double loss_sum = 0.0;
        std::size_t correct = 0;
        std::size_t batch_index = 0;
        for (std::size_t start = 0; start < order.size(); start += batch, ++batch_index) {
            const std::size_t count = std::min(batch, order.size() - start);
            std::vector<int> hit(count, 0);
            try {
                parallel_for(count, train.threads, [&](std::size_t k) {
                    const auto& rec = train_set[order[start + k]];
                    sample[k] = backward(params, rec.features, rec.label, circuit);
                    hit[k] = predict(params, rec.features, circuit) == rec.label;
                });
            } catch (const NumericError& e) {
                throw NumericError("non-finite loss at epoch " + std::to_string(epoch) +
                                   ", batch " + std::to_string(batch_index) + ": " + e.what());
            }

            // Reduce in sample order so the result is independent of thread count.
            auto grads = DressedGradients::zeros_like(params);
            auto acc = grads.tensors();
            double batch_loss = 0.0;
            for (std::size_t k = 0; k < count; ++k) {
                batch_loss += sample[k].loss;
                const auto g = sample[k].grads.tensors();
                for (std::size_t t = 0; t < acc.size(); ++t) {
                    for (std::size_t i = 0; i < acc[t].size(); ++i) acc[t][i] += g[t][i];
                }
                correct += static_cast<std::size_t>(hit[k]);
            }
            if (!std::isfinite(batch_loss)) {
                throw NumericError("non-finite loss at epoch " + std::to_string(epoch) +
                                   ", batch " + std::to_string(batch_index));
            }
            const double inv = 1.0 / static_cast<double>(count);
            for (auto& t : acc) {
                for (auto& v : t) v *= inv;
            }
            loss_sum += batch_loss;
            adam_step(params, grads, adam, lr, hyper);
        }

        EpochRecord rec;
        rec.epoch = epoch;
        rec.learning_rate = lr;
        rec.train_loss = loss_sum / static_cast<double>(train_set.size());
        rec.train_accuracy = static_cast<double>(correct) / static_cast<double>(train_set.size());
        const auto val = loss_and_accuracy(params, val_set, circuit, train.threads);
        rec.val_loss = val.loss;
        rec.val_accuracy = val.accuracy;
        result.history.push_back(rec);

        if (rec.val_accuracy >= best_acc) {
            best_acc = rec.val_accuracy;
            result.best_epoch = epoch;
            result.params = params;
        }
    }
    result.optimizer_steps = adam.step_count;
    return result;
}

std::vector<int> predict_all(const DressedParams& params, const std::vector<FeatureRecord>& records,
                             const CircuitConfig& config, int threads) {
    std::vector<int> out(records.size());
    parallel_for(records.size(), threads,
                 [&](std::size_t i) { out[i] = predict(params, records[i].features, config); });
    return out;
}

Evaluation evaluate(const DressedParams& params, const std::vector<FeatureRecord>& records,
                    const CircuitConfig& config, int threads) {
    if (records.empty()) throw ArgumentError("evaluate: dataset is empty");
    check_records(records, params, "evaluation");
    const auto predicted = predict_all(params, records, config, threads);
    std::vector<int> truth(records.size());
    std::transform(records.begin(), records.end(), truth.begin(),
                   [](const FeatureRecord& r) { return r.label; });
    auto matrix = confusion(truth, predicted, params.n_classes());
    auto rep = report(matrix);
    return {std::move(matrix), std::move(rep)};
}

void save_history(const TrainHistory& history, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write history " + path.string());
    out << "epoch,learning_rate,train_loss,train_accuracy,val_loss,val_accuracy\n";
    for (const auto& r : history) {
        out << r.epoch << ',' << format_double(r.learning_rate) << ','
            << format_double(r.train_loss) << ',' << format_double(r.train_accuracy) << ','
            << format_double(r.val_loss) << ',' << format_double(r.val_accuracy) << '\n';
    }
    if (!out) throw IoError("failed writing history " + path.string());
}

TrainHistory load_history(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open history " + path.string());
    TrainHistory history;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        line.erase(std::remove_if(line.begin(), line.end(),
                                  [](char c) { return c == ' ' || c == '\t' || c == '\r'; }),
                   line.end());
        if (line.empty() || line.front() == '#') continue;
        if (!have_header) {
            if (line != "epoch,learning_rate,train_loss,train_accuracy,val_loss,val_accuracy") {
                throw LoadError(path.string() + ": unexpected history header");
            }
            have_header = true;
            continue;
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        EpochRecord r;
        std::string extra;
        if (!(fields >> r.epoch >> r.learning_rate >> r.train_loss >> r.train_accuracy >>
              r.val_loss >> r.val_accuracy) ||
            (fields >> extra)) {
            throw LoadError(path.string() + " line " + std::to_string(line_no) +
                            ": malformed history row");
        }
        history.push_back(r);
    }
    if (!have_header) throw LoadError(path.string() + ": missing history header");
    return history;
}

} // namespace dqc
