#include "dqc/checkpoint.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "dqc/errors.hpp"

namespace dqc {

namespace {

using nlohmann::json;

json tensor(std::vector<int> shape, std::span<const double> values) {
    return json{{"shape", std::move(shape)}, {"values", std::vector<double>(values.begin(), values.end())}};
}

std::vector<double> read_tensor(const json& doc, const char* name, std::vector<int> want) {
    const auto& t = doc.at("tensors").at(name);
    const auto shape = t.at("shape").get<std::vector<int>>();
    if (shape != want) {
        std::string got, exp;
        for (int s : shape) got += (got.empty() ? "" : "x") + std::to_string(s);
        for (int s : want) exp += (exp.empty() ? "" : "x") + std::to_string(s);
        throw LoadError(std::string("checkpoint tensor ") + name + " has shape " + got +
                        ", expected " + exp);
    }
    auto values = t.at("values").get<std::vector<double>>();
    std::size_t n = 1;
    for (int s : want) n *= static_cast<std::size_t>(s);
    if (values.size() != n) {
        throw LoadError(std::string("checkpoint tensor ") + name + " has " +
                        std::to_string(values.size()) + " values, shape needs " +
                        std::to_string(n));
    }
    return values;
}

json train_to_json(const TrainConfig& t) {
    return json{{"epochs", t.epochs},       {"batch_size", t.batch_size},
                {"base_lr", t.base_lr},     {"lr_gamma", t.lr_gamma},
                {"lr_step_epochs", t.lr_step_epochs}, {"seed", t.seed},
                {"adam_beta1", t.adam_beta1}, {"adam_beta2", t.adam_beta2},
                {"adam_epsilon", t.adam_epsilon}, {"q_delta", t.q_delta},
                {"threads", t.threads}};
}

TrainConfig train_from_json(const json& j) {
    TrainConfig t;
    t.epochs = j.value("epochs", t.epochs);
    t.batch_size = j.value("batch_size", t.batch_size);
    t.base_lr = j.value("base_lr", t.base_lr);
    t.lr_gamma = j.value("lr_gamma", t.lr_gamma);
    t.lr_step_epochs = j.value("lr_step_epochs", t.lr_step_epochs);
    t.seed = j.value("seed", t.seed);
    t.adam_beta1 = j.value("adam_beta1", t.adam_beta1);
    t.adam_beta2 = j.value("adam_beta2", t.adam_beta2);
    t.adam_epsilon = j.value("adam_epsilon", t.adam_epsilon);
    t.q_delta = j.value("q_delta", t.q_delta);
    t.threads = j.value("threads", t.threads);
    return t;
}

} // namespace

std::string checkpoint_to_json(const Checkpoint& c) {
    const auto preset = variant_name(c.circuit.variant);
    if (!preset) throw ArgumentError("checkpoint: circuit variant is not a named preset");
    const auto& p = c.params;
    json doc;
    doc["format_version"] = kCheckpointFormatVersion;
    doc["circuit_preset"] = *preset;
    doc["entangler_angle"] = c.circuit.variant.entangler_angle;
    doc["n_qubits"] = c.circuit.n_qubits;
    doc["q_depth"] = c.circuit.q_depth;
    doc["feature_dim"] = c.feature_dim;
    doc["n_classes"] = c.n_classes;
    doc["class_names"] = c.class_names;
    doc["tensors"] = {
        {"pre_weights", tensor({p.pre.out_dim, p.pre.in_dim}, p.pre.weights)},
        {"pre_bias", tensor({p.pre.out_dim}, p.pre.bias)},
        {"q_weights", tensor({p.quantum.q_depth(), p.quantum.n_qubits()}, p.quantum.flat())},
        {"post_weights", tensor({p.post.out_dim, p.post.in_dim}, p.post.weights)},
        {"post_bias", tensor({p.post.out_dim}, p.post.bias)},
    };
    doc["train_config"] = train_to_json(c.train);
    doc["best_epoch"] = c.best_epoch;
    return doc.dump(1) + "\n";
}

Checkpoint checkpoint_from_json(const std::string& text) {
    Checkpoint c;
    try {
        const auto doc = json::parse(text);
        const int version = doc.at("format_version").get<int>();
        if (version != kCheckpointFormatVersion) {
            throw LoadError("unsupported checkpoint format_version " + std::to_string(version));
        }
        // Preset names are what identifies a checkpoint's variant; a bad name
        // is a file problem here, not a configuration one.
        const auto preset = doc.at("circuit_preset").get<std::string>();
        try {
            c.circuit.variant = variant_from_name(preset);
        } catch (const ConfigError& e) {
            throw LoadError(std::string("checkpoint: ") + e.what());
        }
        c.circuit.variant.entangler_angle =
            doc.value("entangler_angle", c.circuit.variant.entangler_angle);
        c.circuit.n_qubits = doc.at("n_qubits").get<int>();
        c.circuit.q_depth = doc.at("q_depth").get<int>();
        try {
            c.circuit.validate();
        } catch (const ConfigError& e) {
            throw LoadError(std::string("checkpoint: ") + e.what());
        }
        c.feature_dim = doc.at("feature_dim").get<int>();
        c.n_classes = doc.at("n_classes").get<int>();
        if (c.feature_dim <= 0 || c.n_classes <= 0) {
            throw LoadError("checkpoint: feature_dim and n_classes must be positive");
        }
        c.class_names = doc.at("class_names").get<std::vector<std::string>>();
        if (c.class_names.size() != static_cast<std::size_t>(c.n_classes)) {
            throw LoadError("checkpoint: class_names length differs from n_classes");
        }

        const int nq = c.circuit.n_qubits;
        auto& p = c.params;
        p.pre = Linear(nq, c.feature_dim);
        p.pre.weights = read_tensor(doc, "pre_weights", {nq, c.feature_dim});
        p.pre.bias = read_tensor(doc, "pre_bias", {nq});
        p.quantum = QuantumWeights::from_flat(read_tensor(doc, "q_weights", {c.circuit.q_depth, nq}),
                                              c.circuit.q_depth, nq);
        p.post = Linear(c.n_classes, nq);
        p.post.weights = read_tensor(doc, "post_weights", {c.n_classes, nq});
        p.post.bias = read_tensor(doc, "post_bias", {c.n_classes});

        c.train = train_from_json(doc.value("train_config", json::object()));
        c.best_epoch = doc.value("best_epoch", -1);
    } catch (const json::exception& e) {
        throw LoadError(std::string("checkpoint: ") + e.what());
    }
    return c;
}

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
    const auto text = checkpoint_to_json(checkpoint);
    std::ofstream out(path);
    if (!out) throw IoError("cannot write checkpoint " + path.string());
    out << text;
    if (!out) throw IoError("failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open checkpoint " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return checkpoint_from_json(buf.str());
}

} // namespace dqc
