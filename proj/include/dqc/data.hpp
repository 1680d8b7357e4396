#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace dqc {

/// The five diabetic-retinopathy grades, in label order.
const std::vector<std::string>& dr_class_names();

struct DatasetManifest {
    int feature_dim = 0;
    int n_classes = 5;
    std::vector<std::string> class_names = dr_class_names();
    std::string backbone;
    std::string source;
    std::string normalization;

    /// Throws LoadError on a non-positive dimension or a class_names/n_classes mismatch.
    void validate() const;

    bool operator==(const DatasetManifest&) const = default;
};

struct FeatureRecord {
    int label = 0;
    std::vector<double> features;

    bool operator==(const FeatureRecord&) const = default;
};

struct Dataset {
    DatasetManifest manifest;
    std::vector<FeatureRecord> records;
};

/// Reads `label,f0,...,f{D-1}` rows and the JSON manifest sidecar. Every row
/// is checked against the manifest; errors name the 1-based line number.
Dataset load_features(const std::filesystem::path& data_path,
                      const std::filesystem::path& manifest_path);

DatasetManifest load_manifest(const std::filesystem::path& manifest_path);
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& manifest_path);

/// Writes both files. Values use 17 significant digits, so a reload is bit-exact.
/// Records are validated before anything is written.
void save_features(const DatasetManifest& manifest, const std::vector<FeatureRecord>& records,
                   const std::filesystem::path& data_path,
                   const std::filesystem::path& manifest_path);

/// Parses one comma-separated row of feature values (no label).
/// Throws ArgumentError on malformed or non-finite input.
std::vector<double> parse_feature_row(const std::string& row);

/// Five isotropic unit-variance Gaussian clusters, class c centred at
/// separation * u_c for seeded orthonormal directions u_c (exactly orthonormal
/// when feature_dim >= 5). Records are emitted class by class.
Dataset synth_blobs(std::uint64_t seed, int per_class, int feature_dim, double separation);

/// Seeded stratified split into (train, validation), each preserving input order.
/// Per class, round(val_fraction * count) records go to validation; throws
/// ArgumentError if that leaves any class without training records or the
/// validation side empty.
std::pair<std::vector<FeatureRecord>, std::vector<FeatureRecord>>
split(const std::vector<FeatureRecord>& records, double val_fraction, std::uint64_t seed);

} // namespace dqc
