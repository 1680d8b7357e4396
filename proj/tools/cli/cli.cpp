#include "cli/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "cli/plot.hpp"
#include "dqc/checkpoint.hpp"
#include "dqc/errors.hpp"
#include "dqc/metrics.hpp"

namespace dqc::cli {
namespace fs = std::filesystem;
using nlohmann::json;

CircuitConfig RunConfig::circuit() const {
    CircuitConfig c{qubits, depth, variant_from_name(variant)};
    c.validate();
    return c;
}

fs::path RunConfig::manifest_path() const {
    if (!manifest.empty()) return manifest;
    return data.parent_path() / "manifest.json";
}

namespace {

template <class T>
void read_key(const json& doc, const char* key, T& target) {
    try {
        target = doc.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config key '") + key + "' has the wrong type");
    }
}

void read_path(const json& doc, const char* key, fs::path& target) {
    std::string s;
    read_key(doc, key, s);
    target = s;
}

using Binder = std::function<void(const json&, RunConfig&)>;

const std::map<std::string, Binder>& config_keys() {
    static const std::map<std::string, Binder> keys = {
        {"variant", [](const json& d, RunConfig& c) { read_key(d, "variant", c.variant); }},
        {"qubits", [](const json& d, RunConfig& c) { read_key(d, "qubits", c.qubits); }},
        {"depth", [](const json& d, RunConfig& c) { read_key(d, "depth", c.depth); }},
        {"seed", [](const json& d, RunConfig& c) { read_key(d, "seed", c.train.seed); }},
        {"epochs", [](const json& d, RunConfig& c) { read_key(d, "epochs", c.train.epochs); }},
        {"batch", [](const json& d, RunConfig& c) { read_key(d, "batch", c.train.batch_size); }},
        {"lr", [](const json& d, RunConfig& c) { read_key(d, "lr", c.train.base_lr); }},
        {"lr-gamma", [](const json& d, RunConfig& c) { read_key(d, "lr-gamma", c.train.lr_gamma); }},
        {"lr-step",
         [](const json& d, RunConfig& c) { read_key(d, "lr-step", c.train.lr_step_epochs); }},
        {"threads", [](const json& d, RunConfig& c) { read_key(d, "threads", c.train.threads); }},
        {"q-delta", [](const json& d, RunConfig& c) { read_key(d, "q-delta", c.train.q_delta); }},
        {"beta1", [](const json& d, RunConfig& c) { read_key(d, "beta1", c.train.adam_beta1); }},
        {"beta2", [](const json& d, RunConfig& c) { read_key(d, "beta2", c.train.adam_beta2); }},
        {"epsilon",
         [](const json& d, RunConfig& c) { read_key(d, "epsilon", c.train.adam_epsilon); }},
        {"val-fraction",
         [](const json& d, RunConfig& c) { read_key(d, "val-fraction", c.val_fraction); }},
        {"per-class", [](const json& d, RunConfig& c) { read_key(d, "per-class", c.per_class); }},
        {"dim", [](const json& d, RunConfig& c) { read_key(d, "dim", c.dim); }},
        {"separation",
         [](const json& d, RunConfig& c) { read_key(d, "separation", c.separation); }},
        {"data", [](const json& d, RunConfig& c) { read_path(d, "data", c.data); }},
        {"manifest", [](const json& d, RunConfig& c) { read_path(d, "manifest", c.manifest); }},
        {"out", [](const json& d, RunConfig& c) { read_path(d, "out", c.out); }},
        {"checkpoint",
         [](const json& d, RunConfig& c) { read_path(d, "checkpoint", c.checkpoint); }},
        {"history", [](const json& d, RunConfig& c) { read_path(d, "history", c.history); }},
    };
    return keys;
}

} // namespace

void apply_config(const json& doc, RunConfig& cfg) {
    if (!doc.is_object()) throw ConfigError("config file must hold a JSON object");
    const auto& keys = config_keys();
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const auto binder = keys.find(it.key());
        if (binder == keys.end()) throw ConfigError("unknown config key '" + it.key() + "'");
        binder->second(doc, cfg);
    }
}

json config_to_json(const RunConfig& c) {
    json doc;
    doc["variant"] = c.variant;
    doc["qubits"] = c.qubits;
    doc["depth"] = c.depth;
    doc["seed"] = c.train.seed;
    doc["epochs"] = c.train.epochs;
    doc["batch"] = c.train.batch_size;
    doc["lr"] = c.train.base_lr;
    doc["lr-gamma"] = c.train.lr_gamma;
    doc["lr-step"] = c.train.lr_step_epochs;
    doc["threads"] = c.train.threads;
    doc["q-delta"] = c.train.q_delta;
    doc["beta1"] = c.train.adam_beta1;
    doc["beta2"] = c.train.adam_beta2;
    doc["epsilon"] = c.train.adam_epsilon;
    doc["val-fraction"] = c.val_fraction;
    doc["data"] = c.data.string();
    doc["manifest"] = c.manifest_path().string();
    doc["out"] = c.out.string();
    return doc;
}

namespace {

// Errors raised while a named stage runs carry the stage in their message.
struct Stage {
    std::string name = "arguments";
};

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!(f << text)) throw IoError("cannot write " + path.string());
}

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

void require(bool present, const char* flag) {
    if (!present) throw ArgumentError(std::string(flag) + " is required");
}

void check_dataset_matches(const Checkpoint& ck, const DatasetManifest& m) {
    if (ck.feature_dim != m.feature_dim) {
        throw LoadError("checkpoint feature_dim " + std::to_string(ck.feature_dim) +
                        " does not match manifest feature_dim " + std::to_string(m.feature_dim));
    }
    if (ck.n_classes != m.n_classes) {
        throw LoadError("checkpoint n_classes " + std::to_string(ck.n_classes) +
                        " does not match manifest n_classes " + std::to_string(m.n_classes));
    }
}

int cmd_synth(const RunConfig& cfg, Stage& stage, std::ostream& out) {
    require(!cfg.out.empty(), "--out");
    stage.name = "generate";
    const auto ds = synth_blobs(cfg.train.seed, cfg.per_class, cfg.dim, cfg.separation);
    stage.name = "write";
    fs::create_directories(cfg.out);
    save_features(ds.manifest, ds.records, cfg.out / "features.csv", cfg.out / "manifest.json");
    out << "wrote " << ds.records.size() << " records to " << (cfg.out / "features.csv").string()
        << "\n";
    return kExitOk;
}

int cmd_train(const RunConfig& cfg, Stage& stage, std::ostream& out) {
    require(!cfg.data.empty(), "--data");
    require(!cfg.out.empty(), "--out");
    const auto circuit = cfg.circuit();
    cfg.train.validate();

    stage.name = "load";
    const auto ds = load_features(cfg.data, cfg.manifest_path());
    stage.name = "split";
    const auto [train_set, val_set] = split(ds.records, cfg.val_fraction, cfg.train.seed);

    stage.name = "train";
    const auto result = fit(train_set, val_set, ds.manifest, circuit, cfg.train);

    stage.name = "write";
    fs::create_directories(cfg.out);
    Checkpoint ck;
    ck.circuit = circuit;
    ck.feature_dim = ds.manifest.feature_dim;
    ck.n_classes = ds.manifest.n_classes;
    ck.class_names = ds.manifest.class_names;
    ck.params = result.params;
    ck.train = cfg.train;
    ck.best_epoch = result.best_epoch;
    save_checkpoint(ck, cfg.out / "checkpoint.json");
    save_history(result.history, cfg.out / "history.csv");
    write_text(cfg.out / "effective_config.json", config_to_json(cfg).dump(2) + "\n");

    const auto val = loss_and_accuracy(result.params, val_set, circuit, cfg.train.threads);
    out << "final epochs " << result.history.size() << " best_epoch " << result.best_epoch
        << " train_loss "
        << fixed4(result.history.empty() ? result.initial_train_loss
                                         : result.history.back().train_loss)
        << " val_loss " << fixed4(val.loss) << " val_accuracy " << fixed4(val.accuracy) << "\n";
    return kExitOk;
}

int cmd_eval(const RunConfig& cfg, Stage& stage, std::ostream& out) {
    require(!cfg.checkpoint.empty(), "--checkpoint");
    require(!cfg.data.empty(), "--data");
    require(!cfg.out.empty(), "--out");
    stage.name = "load";
    const auto ck = load_checkpoint(cfg.checkpoint);
    const auto manifest = load_manifest(cfg.manifest_path());
    check_dataset_matches(ck, manifest);
    const auto ds = load_features(cfg.data, cfg.manifest_path());

    stage.name = "evaluate";
    const auto ev = evaluate(ck.params, ds.records, ck.circuit, cfg.train.threads);

    stage.name = "write";
    fs::create_directories(cfg.out);
    write_text(cfg.out / "metrics.json", report_to_json(ev.report, ev.matrix, ck.class_names));
    write_text(cfg.out / "confusion.csv", confusion_to_csv(ev.matrix));
    out << "accuracy " << fixed4(ev.report.accuracy) << " over " << ev.report.total
        << " records\n";
    return kExitOk;
}

std::string read_row_file(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw LoadError("cannot open " + path.string());
    std::string line;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") != std::string::npos) return line;
    }
    throw ArgumentError(path.string() + " holds no feature row");
}

int cmd_predict(const RunConfig& cfg, const std::string& row, const fs::path& row_file,
                Stage& stage, std::ostream& out) {
    require(!cfg.checkpoint.empty(), "--checkpoint");
    if (row.empty() == row_file.empty())
        throw ArgumentError("give exactly one of --row or --row-file");
    stage.name = "load";
    const auto ck = load_checkpoint(cfg.checkpoint);
    stage.name = "parse";
    const auto features = parse_feature_row(row_file.empty() ? row : read_row_file(row_file));
    if (static_cast<int>(features.size()) != ck.feature_dim) {
        throw ArgumentError("row has " + std::to_string(features.size()) +
                            " values but the checkpoint expects " +
                            std::to_string(ck.feature_dim));
    }
    stage.name = "predict";
    const int label = predict(ck.params, features, ck.circuit);
    out << label << " " << ck.class_names.at(static_cast<std::size_t>(label)) << "\n";
    return kExitOk;
}

int cmd_plot(const RunConfig& cfg, Stage& stage, std::ostream& out) {
    require(!cfg.history.empty(), "--history");
    require(!cfg.out.empty(), "--out");
    stage.name = "load";
    const auto history = load_history(cfg.history);
    stage.name = "write";
    write_history_plot(history, cfg.out);
    out << "wrote " << (cfg.out / "history.svg").string() << "\n";
    return kExitOk;
}

// --config is located before the real parse so that flags given on the
// command line land on top of the file's values.
fs::path find_config_flag(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 < args.size()) return args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            return args[i].substr(9);
        }
    }
    return {};
}

RunConfig load_config_file(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file " + path.string());
    RunConfig cfg;
    try {
        apply_config(json::parse(f), cfg);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
    }
    return cfg;
}

struct Flags {
    fs::path config;
    std::string row;
    fs::path row_file;
};

void add_path(CLI::App* app, const char* name, fs::path& target, const char* help) {
    app->add_option(name, target, help);
}

void add_common(CLI::App* app, RunConfig& c, Flags& f) {
    add_path(app, "--config", f.config, "JSON config file; flags override its values");
    app->add_option("--seed", c.train.seed, "Seed for data generation, initialisation and shuffling");
    app->add_option("--threads", c.train.threads, "Worker threads")->check(CLI::PositiveNumber);
}

void add_model(CLI::App* app, RunConfig& c) {
    app->add_option("--variant", c.variant, "Circuit preset")
        ->check(CLI::IsMember(preset_names()));
    app->add_option("--qubits", c.qubits, "Number of qubits");
    app->add_option("--depth", c.depth, "Variational layers");
}

void add_data(CLI::App* app, RunConfig& c) {
    add_path(app, "--data", c.data, "Feature CSV");
    add_path(app, "--manifest", c.manifest, "Manifest JSON (default: manifest.json beside --data)");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::string command = "dqc";
    Stage stage;
    try {
        const auto config_path = find_config_flag(args);
        RunConfig cfg = config_path.empty() ? RunConfig{} : load_config_file(config_path);
        Flags flags;

        CLI::App app{"Dressed quantum circuit classifier", "dqc"};
        app.require_subcommand(1);
        app.set_help_all_flag("--help-all");

        auto* synth = app.add_subcommand("synth", "Write a synthetic Gaussian-blob dataset");
        add_common(synth, cfg, flags);
        synth->add_option("--per-class", cfg.per_class, "Records per class");
        synth->add_option("--dim", cfg.dim, "Feature dimension");
        synth->add_option("--separation", cfg.separation, "Distance of cluster centres from 0");
        add_path(synth, "--out", cfg.out, "Output directory");

        auto* train = app.add_subcommand("train", "Train a dressed circuit head");
        add_common(train, cfg, flags);
        add_model(train, cfg);
        add_data(train, cfg);
        add_path(train, "--out", cfg.out, "Output directory");
        train->add_option("--epochs", cfg.train.epochs, "Training epochs");
        train->add_option("--batch", cfg.train.batch_size, "Batch size");
        train->add_option("--lr", cfg.train.base_lr, "Initial learning rate");
        train->add_option("--lr-gamma", cfg.train.lr_gamma, "Step decay factor");
        train->add_option("--lr-step", cfg.train.lr_step_epochs, "Epochs between decays");
        train->add_option("--q-delta", cfg.train.q_delta, "Spread of initial circuit weights");
        train->add_option("--val-fraction", cfg.val_fraction, "Share of records held out");

        auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on a dataset");
        add_common(eval, cfg, flags);
        add_data(eval, cfg);
        add_path(eval, "--checkpoint", cfg.checkpoint, "Checkpoint JSON");
        add_path(eval, "--out", cfg.out, "Output directory");

        auto* predict = app.add_subcommand("predict", "Classify one feature row");
        add_common(predict, cfg, flags);
        add_path(predict, "--checkpoint", cfg.checkpoint, "Checkpoint JSON");
        predict->add_option("--row", flags.row, "Comma-separated feature values");
        add_path(predict, "--row-file", flags.row_file, "File whose first line is a feature row");

        auto* plot = app.add_subcommand("plot", "Render a training history as SVG");
        add_common(plot, cfg, flags);
        add_path(plot, "--history", cfg.history, "History CSV written by train");
        add_path(plot, "--out", cfg.out, "Output directory");

        std::vector<std::string> reversed(args.rbegin(), args.rend());
        try {
            app.parse(reversed);
        } catch (const CLI::CallForHelp&) {
            out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands()[0]->help());
            return kExitOk;
        } catch (const CLI::CallForAllHelp&) {
            out << app.help("", CLI::AppFormatMode::All);
            return kExitOk;
        } catch (const CLI::ParseError& e) {
            err << "dqc: " << e.what() << "\n";
            if (!app.get_subcommands().empty())
                err << "run 'dqc " << app.get_subcommands()[0]->get_name() << " --help' for usage\n";
            return kExitUsage;
        }

        auto* sub = app.get_subcommands().front();
        command += " " + sub->get_name();
        if (sub == synth) return cmd_synth(cfg, stage, out);
        if (sub == train) return cmd_train(cfg, stage, out);
        if (sub == eval) return cmd_eval(cfg, stage, out);
        if (sub == predict) return cmd_predict(cfg, flags.row, flags.row_file, stage, out);
        return cmd_plot(cfg, stage, out);
    } catch (const std::invalid_argument& e) {
        // ArgumentError and ConfigError: the invocation itself is wrong.
        err << command << ": " << stage.name << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << command << ": " << stage.name << ": " << e.what() << "\n";
        return kExitRuntime;
    }
}

} // namespace dqc::cli
