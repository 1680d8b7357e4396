#include "dqc/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dqc/errors.hpp"

namespace dqc {

namespace {

void check(std::span<const double> logits, int label) {
    if (label < 0 || static_cast<std::size_t>(label) >= logits.size()) {
        throw ArgumentError("label " + std::to_string(label) + " out of range for " +
                            std::to_string(logits.size()) + " classes");
    }
    for (double v : logits) {
        if (!std::isfinite(v)) throw NumericError("non-finite logit in cross-entropy");
    }
}

} // namespace

double cross_entropy(std::span<const double> logits, int label) {
    check(logits, label);
    const double top = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double v : logits) sum += std::exp(v - top);
    return std::log(sum) - (logits[static_cast<std::size_t>(label)] - top);
}

std::vector<double> cross_entropy_grad(std::span<const double> logits, int label) {
    check(logits, label);
    const double top = *std::max_element(logits.begin(), logits.end());
    std::vector<double> g(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        g[i] = std::exp(logits[i] - top);
        sum += g[i];
    }
    for (auto& v : g) v /= sum;
    g[static_cast<std::size_t>(label)] -= 1.0;
    return g;
}

} // namespace dqc
