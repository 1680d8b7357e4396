#include "cli/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "dqc/errors.hpp"

namespace dqc::cli {
namespace {

constexpr double kWidth = 960, kHeight = 400;
constexpr double kPanelW = 400, kPanelH = 280, kTop = 60;
constexpr const char* kTrainColour = "#1f77b4";
constexpr const char* kValColour = "#d62728";

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

struct Panel {
    double left;
    double x_min, x_max, y_min, y_max;

    double x(double epoch) const {
        const double span = x_max - x_min;
        return left + (span > 0 ? (epoch - x_min) / span : 0.5) * kPanelW;
    }
    double y(double value) const {
        const double span = y_max - y_min;
        return kTop + kPanelH - (span > 0 ? (value - y_min) / span : 0.5) * kPanelH;
    }
};

std::string polyline(const Panel& p, const TrainHistory& h, double EpochRecord::*field,
                     const char* cls, const char* colour) {
    std::string pts;
    for (const auto& rec : h) {
        if (!pts.empty()) pts += ' ';
        pts += fmt("%.2f", p.x(rec.epoch)) + "," + fmt("%.2f", p.y(rec.*field));
    }
    return std::string("  <polyline class=\"") + cls + "\" fill=\"none\" stroke=\"" + colour +
           "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
}

std::string text(double x, double y, const std::string& s, const char* anchor = "middle") {
    return "  <text x=\"" + fmt("%.2f", x) + "\" y=\"" + fmt("%.2f", y) + "\" text-anchor=\"" +
           anchor + "\">" + s + "</text>\n";
}

std::string panel(const Panel& p, const std::string& title, const TrainHistory& h,
                  double EpochRecord::*train, double EpochRecord::*val) {
    std::string out = "<g class=\"panel\" id=\"" + title + "\">\n";
    out += "  <rect x=\"" + fmt("%.2f", p.left) + "\" y=\"" + fmt("%.2f", kTop) + "\" width=\"" +
           fmt("%.0f", kPanelW) + "\" height=\"" + fmt("%.0f", kPanelH) +
           "\" fill=\"none\" stroke=\"#444\"/>\n";
    out += text(p.left + kPanelW / 2, kTop - 12, title);
    for (int k = 0; k <= 4; ++k) {
        const double v = p.y_min + (p.y_max - p.y_min) * k / 4.0;
        out += text(p.left - 6, p.y(v) + 4, fmt("%.3g", v), "end");
    }
    out += text(p.left, kTop + kPanelH + 18, fmt("%.0f", p.x_min));
    out += text(p.left + kPanelW, kTop + kPanelH + 18, fmt("%.0f", p.x_max));
    out += text(p.left + kPanelW / 2, kTop + kPanelH + 36, "epoch");
    out += polyline(p, h, train, "train", kTrainColour);
    out += polyline(p, h, val, "val", kValColour);
    out += "  <text x=\"" + fmt("%.2f", p.left + 10) + "\" y=\"" + fmt("%.2f", kTop + 18) +
           "\" fill=\"" + kTrainColour + "\">train</text>\n";
    out += "  <text x=\"" + fmt("%.2f", p.left + 10) + "\" y=\"" + fmt("%.2f", kTop + 34) +
           "\" fill=\"" + kValColour + "\">val</text>\n";
    return out + "</g>\n";
}

} // namespace

std::string render_history_svg(const TrainHistory& history) {
    if (history.empty()) throw LoadError("history is empty; nothing to plot");
    const double x_min = history.front().epoch;
    const double x_max = history.back().epoch;
    double loss_max = 0;
    for (const auto& r : history) loss_max = std::max({loss_max, r.train_loss, r.val_loss});
    if (loss_max <= 0) loss_max = 1;

    const Panel loss{60, x_min, x_max, 0.0, loss_max * 1.05};
    const Panel acc{540, x_min, x_max, 0.0, 1.0};

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", kWidth) +
                      "\" height=\"" + fmt("%.0f", kHeight) +
                      "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += panel(loss, "loss", history, &EpochRecord::train_loss, &EpochRecord::val_loss);
    svg += panel(acc, "accuracy", history, &EpochRecord::train_accuracy,
                 &EpochRecord::val_accuracy);
    return svg + "</svg>\n";
}

void write_history_plot(const TrainHistory& history, const std::filesystem::path& out_dir) {
    const auto svg = render_history_svg(history);
    std::filesystem::create_directories(out_dir);
    const auto path = out_dir / "history.svg";
    std::ofstream f(path, std::ios::binary);
    if (!(f << svg)) throw IoError("cannot write " + path.string());
    save_history(history, out_dir / "history_clean.csv");
}

} // namespace dqc::cli
