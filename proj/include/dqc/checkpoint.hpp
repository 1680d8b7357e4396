#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dqc/circuit.hpp"
#include "dqc/dressed.hpp"
#include "dqc/training.hpp"

namespace dqc {

inline constexpr int kCheckpointFormatVersion = 1;

/// Everything needed to rebuild a trained head. Stored as JSON; tensors are
/// {"shape": [...], "values": [...]} with shortest round-trip number text,
/// so parameters reload bit-exactly.
struct Checkpoint {
    CircuitConfig circuit;
    int feature_dim = 0;
    int n_classes = 0;
    std::vector<std::string> class_names;
    DressedParams params;
    TrainConfig train;
    int best_epoch = -1;
};

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);

/// Throws LoadError on unknown versions, missing fields or inconsistent shapes.
Checkpoint load_checkpoint(const std::filesystem::path& path);

std::string checkpoint_to_json(const Checkpoint& checkpoint);
Checkpoint checkpoint_from_json(const std::string& text);

} // namespace dqc
