#include "dqc/metrics.hpp"

#include <json.hpp>
#include <sstream>

#include "dqc/errors.hpp"

namespace dqc {

namespace {

// 0/0 -> 0 with the flag raised.
double ratio(std::int64_t num, std::int64_t den, bool& undefined) {
    undefined = den == 0;
    return undefined ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

} // namespace

ConfusionMatrix::ConfusionMatrix(int n_classes)
    : n_classes_(n_classes),
      counts_(static_cast<std::size_t>(n_classes) * static_cast<std::size_t>(n_classes), 0) {
    if (n_classes <= 0) throw ArgumentError("confusion matrix needs at least one class");
}

std::int64_t ConfusionMatrix::total() const {
    std::int64_t sum = 0;
    for (auto c : counts_) sum += c;
    return sum;
}

std::int64_t ConfusionMatrix::trace() const {
    std::int64_t sum = 0;
    for (int k = 0; k < n_classes_; ++k) sum += at(k, k);
    return sum;
}

ConfusionMatrix confusion(std::span<const int> true_labels, std::span<const int> predicted_labels,
                          int n_classes) {
    if (true_labels.size() != predicted_labels.size()) {
        throw ArgumentError("label vectors differ in length: " +
                            std::to_string(true_labels.size()) + " vs " +
                            std::to_string(predicted_labels.size()));
    }
    ConfusionMatrix m(n_classes);
    for (std::size_t i = 0; i < true_labels.size(); ++i) {
        const int t = true_labels[i];
        const int p = predicted_labels[i];
        if (t < 0 || t >= n_classes || p < 0 || p >= n_classes) {
            throw ArgumentError("label out of range at position " + std::to_string(i));
        }
        ++m.at(t, p);
    }
    return m;
}

OneVsRest one_vs_rest(const ConfusionMatrix& matrix, int cls) {
    OneVsRest o;
    const int n = matrix.n_classes();
    for (int t = 0; t < n; ++t) {
        for (int p = 0; p < n; ++p) {
            const auto c = matrix.at(t, p);
            if (t == cls && p == cls) o.tp += c;
            else if (t == cls) o.fn += c;
            else if (p == cls) o.fp += c;
            else o.tn += c;
        }
    }
    return o;
}

MetricsReport report(const ConfusionMatrix& matrix) {
    MetricsReport r;
    r.total = matrix.total();
    if (r.total == 0) throw ArgumentError("cannot report metrics for an empty confusion matrix");
    r.accuracy = static_cast<double>(matrix.trace()) / static_cast<double>(r.total);

    const int n = matrix.n_classes();
    r.per_class.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        ClassMetrics m;
        m.counts = one_vs_rest(matrix, k);
        const auto& o = m.counts;
        m.precision = ratio(o.tp, o.tp + o.fp, m.precision_undefined);
        m.recall = ratio(o.tp, o.tp + o.fn, m.recall_undefined);
        m.specificity = ratio(o.tn, o.tn + o.fp, m.specificity_undefined);
        const double pr = m.precision + m.recall;
        m.f1_undefined = pr == 0.0;
        m.f1 = m.f1_undefined ? 0.0 : 2.0 * m.precision * m.recall / pr;
        r.macro_precision += m.precision;
        r.macro_recall += m.recall;
        r.macro_f1 += m.f1;
        r.macro_specificity += m.specificity;
        r.per_class.push_back(m);
    }
    r.macro_precision /= n;
    r.macro_recall /= n;
    r.macro_f1 /= n;
    r.macro_specificity /= n;
    return r;
}

std::string report_to_json(const MetricsReport& report, const ConfusionMatrix& matrix,
                           std::span<const std::string> class_names) {
    using nlohmann::json;
    json doc;
    doc["total"] = report.total;
    doc["accuracy"] = report.accuracy;
    doc["macro"] = {{"precision", report.macro_precision},
                    {"recall", report.macro_recall},
                    {"f1", report.macro_f1},
                    {"specificity", report.macro_specificity}};
    json classes = json::array();
    for (std::size_t k = 0; k < report.per_class.size(); ++k) {
        const auto& m = report.per_class[k];
        json c;
        c["index"] = k;
        if (k < class_names.size()) c["name"] = class_names[k];
        c["precision"] = m.precision;
        c["recall"] = m.recall;
        c["f1"] = m.f1;
        c["specificity"] = m.specificity;
        c["undefined"] = {{"precision", m.precision_undefined},
                          {"recall", m.recall_undefined},
                          {"f1", m.f1_undefined},
                          {"specificity", m.specificity_undefined}};
        c["tp"] = m.counts.tp;
        c["tn"] = m.counts.tn;
        c["fp"] = m.counts.fp;
        c["fn"] = m.counts.fn;
        classes.push_back(std::move(c));
    }
    doc["per_class"] = std::move(classes);
    json grid = json::array();
    for (int t = 0; t < matrix.n_classes(); ++t) {
        json row = json::array();
        for (int p = 0; p < matrix.n_classes(); ++p) row.push_back(matrix.at(t, p));
        grid.push_back(std::move(row));
    }
    doc["confusion_matrix"] = std::move(grid);
    return doc.dump(2) + "\n";
}

std::string confusion_to_csv(const ConfusionMatrix& matrix) {
    std::ostringstream out;
    for (int t = 0; t < matrix.n_classes(); ++t) {
        for (int p = 0; p < matrix.n_classes(); ++p) {
            if (p) out << ',';
            out << matrix.at(t, p);
        }
        out << '\n';
    }
    return out.str();
}

} // namespace dqc
