#pragma once

#include <filesystem>
#include <string>

#include "dqc/training.hpp"

namespace dqc::cli {

/// Two side-by-side panels (loss, accuracy), each with a train and a val curve.
/// Throws LoadError on an empty history.
std::string render_history_svg(const TrainHistory& history);

/// Writes history.svg and history_clean.csv into out_dir.
void write_history_plot(const TrainHistory& history, const std::filesystem::path& out_dir);

} // namespace dqc::cli
