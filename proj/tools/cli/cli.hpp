#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dqc/circuit.hpp"
#include "dqc/training.hpp"

namespace dqc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Everything a subcommand can be configured with. Config-file keys are the
/// long flag names without the leading dashes.
struct RunConfig {
    std::string variant = "hadamard-cnot";
    int qubits = 4;
    int depth = 6;
    TrainConfig train;
    double val_fraction = 0.2;

    int per_class = 60;
    int dim = 16;
    double separation = 8.0;

    std::filesystem::path data;
    std::filesystem::path manifest; ///< defaults to manifest.json next to data
    std::filesystem::path out;
    std::filesystem::path checkpoint;
    std::filesystem::path history;

    CircuitConfig circuit() const;
    std::filesystem::path manifest_path() const;
};

/// Throws ConfigError on unknown keys or wrongly typed values.
void apply_config(const nlohmann::json& doc, RunConfig& cfg);
nlohmann::json config_to_json(const RunConfig& cfg);

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dqc::cli
