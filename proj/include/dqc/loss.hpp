#pragma once

#include <span>
#include <vector>

namespace dqc {

/// -log softmax(logits)[label], evaluated with max subtraction.
/// Throws NumericError on non-finite logits, ArgumentError on a bad label.
double cross_entropy(std::span<const double> logits, int label);

/// softmax(logits) - onehot(label): gradient of cross_entropy w.r.t. the logits.
std::vector<double> cross_entropy_grad(std::span<const double> logits, int label);

} // namespace dqc
