#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dqc {

/// counts[true][predicted].
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(int n_classes);

    int n_classes() const noexcept { return n_classes_; }
    std::int64_t& at(int truth, int predicted) { return counts_[index(truth, predicted)]; }
    std::int64_t at(int truth, int predicted) const { return counts_[index(truth, predicted)]; }
    std::int64_t total() const;
    std::int64_t trace() const;

    bool operator==(const ConfusionMatrix&) const = default;

private:
    std::size_t index(int t, int p) const {
        return static_cast<std::size_t>(t) * static_cast<std::size_t>(n_classes_) +
               static_cast<std::size_t>(p);
    }

    int n_classes_;
    std::vector<std::int64_t> counts_;
};

ConfusionMatrix confusion(std::span<const int> true_labels, std::span<const int> predicted_labels,
                          int n_classes);

/// One-vs-rest outcome counts for one class.
struct OneVsRest {
    std::int64_t tp = 0, tn = 0, fp = 0, fn = 0;
};

OneVsRest one_vs_rest(const ConfusionMatrix& matrix, int cls);

/// Per-class metrics. A metric whose denominator is zero is reported as 0
/// with its flag set.
struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double specificity = 0.0;
    bool precision_undefined = false;
    bool recall_undefined = false;
    bool f1_undefined = false;
    bool specificity_undefined = false;
    OneVsRest counts{};
};

struct MetricsReport {
    std::int64_t total = 0;
    double accuracy = 0.0; ///< trace / total
    std::vector<ClassMetrics> per_class;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    double macro_specificity = 0.0;
};

/// Throws ArgumentError for an empty matrix.
MetricsReport report(const ConfusionMatrix& matrix);

/// Report as a JSON document; class_names may be empty.
std::string report_to_json(const MetricsReport& report, const ConfusionMatrix& matrix,
                           std::span<const std::string> class_names);

/// Comma-separated integer grid, one row per true class, no header.
std::string confusion_to_csv(const ConfusionMatrix& matrix);

} // namespace dqc
