#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <cmath>
#include <set>

#include "dqc/data.hpp"
#include "dqc/errors.hpp"
#include "support/oracles.hpp"

using namespace dqc;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("dqc_data_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
}

DatasetManifest manifest(int dim) {
    DatasetManifest m;
    m.feature_dim = dim;
    m.backbone = "test";
    return m;
}

} // namespace

TEST_CASE("class names") {
    CHECK(dr_class_names() ==
          std::vector<std::string>{"No_DR", "Mild", "Moderate", "Severe", "Proliferate_DR"});
}

TEST_CASE("load_features") {
    TempDir dir;
    const auto data = dir.path / "features.csv";
    const auto man = dir.path / "manifest.json";
    save_manifest(manifest(4), man);

    SUBCASE("three rows") {
        write(data, "label,f0,f1,f2,f3\n0,1,2,3,4\n4,0.5,-1e-3,2.5e10,0\n2,1,1,1,1\n");
        const auto ds = load_features(data, man);
        REQUIRE(ds.records.size() == 3);
        CHECK(ds.records[1].label == 4);
        CHECK(ds.records[1].features == std::vector<double>{0.5, -1e-3, 2.5e10, 0.0});
        CHECK(ds.manifest.class_names.size() == 5);
    }
    SUBCASE("bad label names the line") {
        write(data, "label,f0,f1,f2,f3\n0,1,2,3,4\n7,1,2,3,4\n");
        CHECK_THROWS_WITH_AS(load_features(data, man), doctest::Contains("line 3"), LoadError);
    }
    SUBCASE("short row") {
        write(data, "label,f0,f1,f2,f3\n0,1,2,3\n");
        CHECK_THROWS_WITH_AS(load_features(data, man), doctest::Contains("line 2"), LoadError);
    }
    SUBCASE("non-finite value") {
        write(data, "label,f0,f1,f2,f3\n0,1,nan,3,4\n");
        CHECK_THROWS_AS(load_features(data, man), LoadError);
        write(data, "label,f0,f1,f2,f3\n0,1,inf,3,4\n");
        CHECK_THROWS_AS(load_features(data, man), LoadError);
    }
    SUBCASE("garbage value") {
        write(data, "label,f0,f1,f2,f3\n0,1,abc,3,4\n");
        CHECK_THROWS_AS(load_features(data, man), LoadError);
    }
    SUBCASE("header disagrees with manifest dimension") {
        write(data, "label,f0,f1\n0,1,2\n");
        CHECK_THROWS_WITH_AS(load_features(data, man), doctest::Contains("feature_dim is 4"),
                             LoadError);
    }
    SUBCASE("missing files") {
        CHECK_THROWS_AS(load_features(dir.path / "nope.csv", man), IoError);
        CHECK_THROWS_AS(load_manifest(dir.path / "nope.json"), IoError);
    }
    SUBCASE("manifest with wrong class count") {
        write(man, R"({"feature_dim": 4, "n_classes": 5, "class_names": ["a"]})");
        CHECK_THROWS_AS(load_manifest(man), LoadError);
    }
}

TEST_CASE("save_features") {
    TempDir dir;
    const auto data = dir.path / "features.csv";
    const auto man = dir.path / "manifest.json";

    SUBCASE("empty list writes only the header") {
        save_features(manifest(3), {}, data, man);
        std::ifstream in(data);
        std::string all((std::istreambuf_iterator<char>(in)), {});
        CHECK(all == "label,f0,f1,f2\n");
        CHECK(load_features(data, man).records.empty());
    }
    SUBCASE("mismatched record is refused before writing") {
        std::vector<FeatureRecord> recs{{0, {1.0, 2.0, 3.0}}, {1, {1.0}}};
        CHECK_THROWS_AS(save_features(manifest(3), recs, data, man), ArgumentError);
        CHECK_FALSE(fs::exists(data));
    }
    SUBCASE("round trip is bit-exact") {
        std::mt19937_64 rng(51);
        std::normal_distribution<double> normal(0.0, 1e3);
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<FeatureRecord> recs;
            for (int i = 0; i < 20; ++i) {
                FeatureRecord r{static_cast<int>(rng() % 5), {}};
                for (int k = 0; k < 7; ++k) r.features.push_back(normal(rng) * std::pow(10.0, k - 3));
                recs.push_back(r);
            }
            recs[0].features[0] = 5e-324; // subnormal
            recs[1].features[1] = -0.0;
            auto m = manifest(7);
            m.source = "round trip";
            save_features(m, recs, data, man);
            const auto back = load_features(data, man);
            CHECK(back.manifest == m);
            CHECK(back.records == recs);
        }
    }
    SUBCASE("unwritable path") {
        CHECK_THROWS_AS(save_features(manifest(3), {}, dir.path / "missing" / "f.csv", man), IoError);
    }
}

TEST_CASE("parse_feature_row") {
    CHECK(parse_feature_row("1, 2.5,-3\n") == std::vector<double>{1.0, 2.5, -3.0});
    CHECK_THROWS_AS(parse_feature_row(""), ArgumentError);
    CHECK_THROWS_AS(parse_feature_row("1,,2"), ArgumentError);
    CHECK_THROWS_AS(parse_feature_row("1,x"), ArgumentError);
}

TEST_CASE("synth_blobs") {
    const auto a = synth_blobs(7, 60, 16, 8.0);
    const auto b = synth_blobs(7, 60, 16, 8.0);
    CHECK(a.records == b.records);
    CHECK(a.manifest == b.manifest);
    CHECK(a.manifest.feature_dim == 16);
    CHECK(a.manifest.class_names == dr_class_names());
    CHECK_FALSE(a.records == synth_blobs(8, 60, 16, 8.0).records);

    std::map<int, int> counts;
    for (const auto& r : a.records) {
        CHECK(r.features.size() == 16);
        ++counts[r.label];
    }
    for (int c = 0; c < 5; ++c) CHECK(counts[c] == 60);

    SUBCASE("well separated clusters are easy for nearest centroid") {
        const auto [train, test] = split(a.records, 0.2, 3);
        CHECK(oracle::nearest_centroid_accuracy(train, test, 5) >= 0.95);
    }
    SUBCASE("zero separation is chance level for nearest centroid") {
        const auto flat = synth_blobs(7, 60, 16, 0.0);
        const auto [train, test] = split(flat.records, 0.2, 3);
        CHECK(oracle::nearest_centroid_accuracy(train, test, 5) < 0.4);
    }
    SUBCASE("low dimensional variant") {
        const auto tiny = synth_blobs(1, 3, 2, 1.0);
        CHECK(tiny.records.size() == 15);
    }
    CHECK_THROWS_AS(synth_blobs(1, 0, 4, 1.0), ArgumentError);
}

TEST_CASE("split") {
    std::vector<FeatureRecord> recs;
    for (int i = 0; i < 100; ++i) recs.push_back({i % 5, {static_cast<double>(i)}});

    const auto [train, val] = split(recs, 0.2, 9);
    CHECK(train.size() == 80);
    CHECK(val.size() == 20);
    std::map<int, int> per_class;
    for (const auto& r : val) ++per_class[r.label];
    for (int c = 0; c < 5; ++c) CHECK(per_class[c] == 4);

    const auto again = split(recs, 0.2, 9);
    CHECK(again.first == train);
    CHECK(again.second == val);

    std::vector<FeatureRecord> five;
    for (int c = 0; c < 5; ++c) five.push_back({c, {0.0}});
    CHECK_THROWS_AS(split(five, 0.999, 1), ArgumentError);
    CHECK_THROWS_AS(split(recs, 0.0, 1), ArgumentError);
    CHECK_THROWS_AS(split(recs, 1.0, 1), ArgumentError);

    SUBCASE("partition property on random inputs") {
        std::mt19937_64 rng(52);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<FeatureRecord> in;
            const int n = 20 + static_cast<int>(rng() % 80);
            for (int i = 0; i < n; ++i) in.push_back({static_cast<int>(rng() % 5), {double(i)}});
            const double frac = 0.1 + 0.5 * std::uniform_real_distribution<double>(0, 1)(rng);
            std::pair<std::vector<FeatureRecord>, std::vector<FeatureRecord>> parts;
            try {
                parts = split(in, frac, rng());
            } catch (const ArgumentError&) {
                continue; // a class with too few records for this fraction
            }
            std::multiset<double> all, seen;
            for (const auto& r : in) all.insert(r.features[0]);
            for (const auto& r : parts.first) seen.insert(r.features[0]);
            for (const auto& r : parts.second) {
                CHECK(seen.count(r.features[0]) == 0);
                seen.insert(r.features[0]);
            }
            CHECK(seen == all);

            std::map<int, int> total, in_val;
            for (const auto& r : in) ++total[r.label];
            for (const auto& r : parts.second) ++in_val[r.label];
            for (const auto& [label, count] : total) {
                CHECK(std::abs(in_val[label] - frac * count) <= 1.0);
            }
        }
    }
}
