#include "dqc/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <map>
#include <random>
#include <sstream>

#include "dqc/errors.hpp"

namespace dqc {

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool parse_double(std::string_view text, double& out) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string expected_header(int dim) {
    std::string h = "label";
    for (int i = 0; i < dim; ++i) h += ",f" + std::to_string(i);
    return h;
}

void check_record(const DatasetManifest& m, const FeatureRecord& r, std::size_t row) {
    const std::string where = "record " + std::to_string(row);
    if (r.label < 0 || r.label >= m.n_classes) {
        throw ArgumentError(where + ": label " + std::to_string(r.label) + " out of range");
    }
    if (r.features.size() != static_cast<std::size_t>(m.feature_dim)) {
        throw ArgumentError(where + ": expected " + std::to_string(m.feature_dim) +
                            " features, got " + std::to_string(r.features.size()));
    }
    for (double v : r.features) {
        if (!std::isfinite(v)) throw ArgumentError(where + ": non-finite feature value");
    }
}

} // namespace

const std::vector<std::string>& dr_class_names() {
    static const std::vector<std::string> names{"No_DR", "Mild", "Moderate", "Severe",
                                                "Proliferate_DR"};
    return names;
}

void DatasetManifest::validate() const {
    if (feature_dim <= 0) throw LoadError("manifest feature_dim must be positive");
    if (n_classes <= 0) throw LoadError("manifest n_classes must be positive");
    if (class_names.size() != static_cast<std::size_t>(n_classes)) {
        throw LoadError("manifest lists " + std::to_string(class_names.size()) +
                        " class names for n_classes " + std::to_string(n_classes));
    }
}

DatasetManifest load_manifest(const std::filesystem::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw IoError("cannot open manifest " + manifest_path.string());
    DatasetManifest m;
    try {
        const auto doc = nlohmann::json::parse(in);
        m.feature_dim = doc.at("feature_dim").get<int>();
        m.n_classes = doc.at("n_classes").get<int>();
        m.class_names = doc.at("class_names").get<std::vector<std::string>>();
        m.backbone = doc.value("backbone", "");
        m.source = doc.value("source", "");
        m.normalization = doc.value("normalization", "");
    } catch (const nlohmann::json::exception& e) {
        throw LoadError("manifest " + manifest_path.string() + ": " + e.what());
    }
    m.validate();
    return m;
}

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& manifest_path) {
    const nlohmann::json doc{{"feature_dim", manifest.feature_dim},
                             {"n_classes", manifest.n_classes},
                             {"class_names", manifest.class_names},
                             {"backbone", manifest.backbone},
                             {"source", manifest.source},
                             {"normalization", manifest.normalization}};
    std::ofstream out(manifest_path);
    if (!out) throw IoError("cannot write manifest " + manifest_path.string());
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("failed writing manifest " + manifest_path.string());
}

Dataset load_features(const std::filesystem::path& data_path,
                      const std::filesystem::path& manifest_path) {
    Dataset ds;
    ds.manifest = load_manifest(manifest_path);
    const auto& m = ds.manifest;

    std::ifstream in(data_path);
    if (!in) throw IoError("cannot open feature file " + data_path.string());

    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = data_path.string() + " line " + std::to_string(line_no);
        if (!have_header) {
            if (line != expected_header(m.feature_dim)) {
                const auto cols = split_commas(line);
                throw LoadError(where + ": header has " + std::to_string(cols.size() - 1) +
                                " feature columns, manifest feature_dim is " +
                                std::to_string(m.feature_dim));
            }
            have_header = true;
            continue;
        }
        const auto cols = split_commas(line);
        if (cols.size() != static_cast<std::size_t>(m.feature_dim) + 1) {
            throw LoadError(where + ": expected " + std::to_string(m.feature_dim) +
                            " features, got " + std::to_string(cols.size() - 1));
        }
        FeatureRecord r;
        double label = 0.0;
        if (!parse_double(cols[0], label) || label != std::floor(label)) {
            throw LoadError(where + ": malformed label '" + std::string(cols[0]) + "'");
        }
        if (label < 0 || label >= m.n_classes) {
            throw LoadError(where + ": label " + std::string(cols[0]) + " out of range [0, " +
                            std::to_string(m.n_classes - 1) + "]");
        }
        r.label = static_cast<int>(label);
        r.features.resize(static_cast<std::size_t>(m.feature_dim));
        for (std::size_t k = 1; k < cols.size(); ++k) {
            double v = 0.0;
            if (!parse_double(cols[k], v)) {
                throw LoadError(where + ": malformed value in column " + std::to_string(k));
            }
            if (!std::isfinite(v)) {
                throw LoadError(where + ": non-finite value in column " + std::to_string(k));
            }
            r.features[k - 1] = v;
        }
        ds.records.push_back(std::move(r));
    }
    if (!have_header) throw LoadError(data_path.string() + ": missing header line");
    return ds;
}

void save_features(const DatasetManifest& manifest, const std::vector<FeatureRecord>& records,
                   const std::filesystem::path& data_path,
                   const std::filesystem::path& manifest_path) {
    manifest.validate();
    for (std::size_t i = 0; i < records.size(); ++i) check_record(manifest, records[i], i);

    std::ofstream out(data_path);
    if (!out) throw IoError("cannot write feature file " + data_path.string());
    out << expected_header(manifest.feature_dim) << '\n';
    for (const auto& r : records) {
        out << r.label;
        for (double v : r.features) out << ',' << format_double(v);
        out << '\n';
    }
    if (!out) throw IoError("failed writing feature file " + data_path.string());
    save_manifest(manifest, manifest_path);
}

std::vector<double> parse_feature_row(const std::string& row) {
    std::string_view text(row);
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.remove_suffix(1);
    if (text.empty()) throw ArgumentError("empty feature row");
    std::vector<double> out;
    for (auto cell : split_commas(text)) {
        double v = 0.0;
        if (!parse_double(cell, v) || !std::isfinite(v)) {
            throw ArgumentError("malformed feature value '" + std::string(cell) + "'");
        }
        out.push_back(v);
    }
    return out;
}

Dataset synth_blobs(std::uint64_t seed, int per_class, int feature_dim, double separation) {
    if (per_class < 1) throw ArgumentError("per_class must be >= 1");
    if (feature_dim < 1) throw ArgumentError("feature_dim must be >= 1");
    if (!(separation >= 0.0)) throw ArgumentError("separation must be >= 0");

    constexpr int kClasses = 5;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto dim = static_cast<std::size_t>(feature_dim);

    // Gram-Schmidt over Gaussian draws; falls back to plain normalization
    // once the space is exhausted (feature_dim < 5).
    std::vector<std::vector<double>> dirs;
    for (int c = 0; c < kClasses; ++c) {
        std::vector<double> u(dim);
        for (auto& v : u) v = normal(rng);
        if (static_cast<std::size_t>(c) < dim) {
            for (const auto& prev : dirs) {
                double dot = 0.0;
                for (std::size_t i = 0; i < dim; ++i) dot += u[i] * prev[i];
                for (std::size_t i = 0; i < dim; ++i) u[i] -= dot * prev[i];
            }
        }
        double norm = 0.0;
        for (double v : u) norm += v * v;
        norm = std::sqrt(norm);
        for (auto& v : u) v /= norm;
        dirs.push_back(std::move(u));
    }

    Dataset ds;
    ds.manifest.feature_dim = feature_dim;
    ds.manifest.backbone = "synthetic";
    ds.manifest.source = "synth_blobs(seed=" + std::to_string(seed) +
                         ", per_class=" + std::to_string(per_class) +
                         ", separation=" + format_double(separation) + ")";
    ds.manifest.normalization = "none";
    ds.records.reserve(static_cast<std::size_t>(kClasses * per_class));
    for (int c = 0; c < kClasses; ++c) {
        for (int k = 0; k < per_class; ++k) {
            FeatureRecord r;
            r.label = c;
            r.features.resize(dim);
            for (std::size_t i = 0; i < dim; ++i) {
                r.features[i] = separation * dirs[static_cast<std::size_t>(c)][i] + normal(rng);
            }
            ds.records.push_back(std::move(r));
        }
    }
    return ds;
}

std::pair<std::vector<FeatureRecord>, std::vector<FeatureRecord>>
split(const std::vector<FeatureRecord>& records, double val_fraction, std::uint64_t seed) {
    if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
        throw ArgumentError("val_fraction must be in (0, 1)");
    }
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < records.size(); ++i) by_class[records[i].label].push_back(i);

    std::mt19937_64 rng(seed);
    std::vector<bool> to_val(records.size(), false);
    std::size_t n_val = 0;
    for (auto& [label, idx] : by_class) {
        std::shuffle(idx.begin(), idx.end(), rng);
        const auto take =
            static_cast<std::size_t>(std::llround(val_fraction * static_cast<double>(idx.size())));
        if (take >= idx.size()) {
            throw ArgumentError("split leaves class " + std::to_string(label) +
                                " with no training records");
        }
        for (std::size_t k = 0; k < take; ++k) to_val[idx[k]] = true;
        n_val += take;
    }
    if (n_val == 0) throw ArgumentError("split leaves the validation side empty");

    std::pair<std::vector<FeatureRecord>, std::vector<FeatureRecord>> out;
    for (std::size_t i = 0; i < records.size(); ++i) {
        (to_val[i] ? out.second : out.first).push_back(records[i]);
    }
    return out;
}

} // namespace dqc
