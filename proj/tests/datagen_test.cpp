// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <sstream>

#include "pxmap/datagen.h"
#include "pxmap/error.h"
#include "pxmap/random.h"
#include "test_util.h"

namespace pxmap {
namespace {

GenConfig PlainLambertian() {
    GenConfig cfg = GenConfig::Dense();
    cfg.material_mode = MaterialMode::Lambertian;
    cfg.effects = EffectsConfig::Off();
    cfg.fixed_albedo = Rgb(0.7, 0.5, 0.3);
    cfg.seed = 42;
    return cfg;
}

// Replays the record's random stream by hand and evaluates the map
// definition cell by cell.
TEST(SampleRecord, LambertianMatchesHandComputedMap) {
    GenConfig cfg = PlainLambertian();
    for (uint64_t index : {0u, 1u, 17u}) {
        SampleResult got = SampleRecord(cfg, index);
        ASSERT_FALSE(got.discarded);

        RandomStream rng(DeriveSeed({cfg.seed, index, 0}));
        Direction n = SampleHemisphereUniform(rng);
        int count = rng.UniformInt(cfg.lights_min, cfg.lights_max);
        struct L {
            Direction dir;
            Rgb phi;
        };
        std::vector<L> lights(count);
        for (L &l : lights) {
            l.dir = SampleHemisphereUniform(rng, Radians(70));
            for (int c = 0; c < 3; ++c) l.phi[c] = rng.Uniform(0.28, 3.2);
        }
        EXPECT_EQ(got.record.normal, n);
        EXPECT_EQ(got.traits.lights, count);

        const int d = 32;
        std::vector<int> owner(d * d, -1);
        for (int j = 0; j < count; ++j) {
            int u = std::min(int(std::floor(d * (lights[j].dir.x + 1) / 2)), d - 1);
            int v = std::min(int(std::floor(d * (lights[j].dir.y + 1) / 2)), d - 1);
            owner[u * d + v] = j;
        }
        double max_gray = 0;
        for (int j : owner)
            if (j >= 0) max_gray = std::max(max_gray, 1.5 * std::max(Dot(n, lights[j].dir), 0.0));
        const Rgb rho = *cfg.fixed_albedo;
        for (int u = 0; u < d; ++u)
            for (int v = 0; v < d; ++v) {
                int j = owner[u * d + v];
                const ObservationMap &m = got.record.map;
                if (j < 0) {
                    for (int c = 0; c < 4; ++c) ASSERT_EQ(m.At(u, v, c), 0.0);
                    continue;
                }
                double shade = std::max(Dot(n, lights[j].dir), 0.0);
                for (int c = 0; c < 3; ++c) ASSERT_NEAR(m.At(u, v, c), rho[c] * shade, 1e-14);
                ASSERT_NEAR(m.At(u, v, 3), 1.5 * shade / max_gray, 1e-12);
            }
    }
}

TEST(SampleRecord, Deterministic) {
    GenConfig cfg = GenConfig::Dense();
    cfg.seed = 3;
    SampleResult a = SampleRecord(cfg, 5), b = SampleRecord(cfg, 5);
    EXPECT_EQ(a.record.map, b.record.map);
    EXPECT_EQ(a.record.normal, b.record.normal);
    EXPECT_FALSE(SampleRecord(cfg, 6).record.map == a.record.map);
    EXPECT_FALSE(SampleRecord(cfg, 5, 1).record.map == a.record.map);
}

TEST(SampleRecord, DarkAlbedoIsDiscarded) {
    GenConfig cfg = PlainLambertian();
    cfg.fixed_albedo = Rgb(1e-6);
    EXPECT_TRUE(SampleRecord(cfg, 0).discarded);
}

TEST(SampleRecord, RecordInvariants) {
    GenConfig cfg = GenConfig::Dense();
    MerlLibrary lib;
    lib.Add(testing::SyntheticMerl("a"));
    for (uint64_t i = 0; i < 300; ++i) {
        SampleResult r = SampleRecord(cfg, i, 0, lib);
        EXPECT_NEAR(Length(r.record.normal), 1, 1e-12);
        EXPECT_GE(r.record.normal.z, -1e-12);
        EXPECT_GE(r.traits.lights, 50);
        EXPECT_LE(r.traits.lights, 1000);
        if (r.discarded) continue;
        const ObservationMap &m = r.record.map;
        double max_n = 0;
        for (int u = 0; u < 32; ++u)
            for (int v = 0; v < 32; ++v) {
                for (int c = 0; c < 4; ++c) {
                    EXPECT_TRUE(std::isfinite(m.At(u, v, c)));
                    EXPECT_GE(m.At(u, v, c), 0);
                }
                max_n = std::max(max_n, m.At(u, v, 3));
            }
        EXPECT_EQ(max_n, 1.0);
        EXPECT_GE(m.MaxRgb(), cfg.discard_threshold);
    }
}

TEST(SampleRecord, SparsePreset) {
    GenConfig cfg = GenConfig::Sparse();
    for (uint64_t i = 0; i < 50; ++i) {
        SampleResult r = SampleRecord(cfg, i);
        EXPECT_EQ(r.traits.lights, 10);
        EXPECT_LE(r.record.map.OccupiedCount(), 10);
    }
}

TEST(SampleRecord, LightsRespectElevation) {
    GenConfig cfg = GenConfig::Sparse();
    cfg.lights_min = cfg.lights_max = 1;
    double limit = std::sin(Radians(45));
    // Distance from the origin to the nearest point of a cell's interval.
    auto nearest = [](int i) {
        double lo = -1 + 2.0 * i / 32, hi = -1 + 2.0 * (i + 1) / 32;
        return lo <= 0 && hi >= 0 ? 0.0 : std::min(std::abs(lo), std::abs(hi));
    };
    for (uint64_t i = 0; i < 500; ++i) {
        const ObservationMap &m = SampleRecord(cfg, i).record.map;
        for (int u = 0; u < 32; ++u)
            for (int v = 0; v < 32; ++v)
                if (m.Occupied(u, v)) EXPECT_LE(std::hypot(nearest(u), nearest(v)), limit + 1e-12);
    }
}

TEST(GenConfig, Validation) {
    EXPECT_NO_THROW(GenConfig::Dense().Validate());
    EXPECT_NO_THROW(GenConfig::Sparse().Validate());
    auto bad = [](auto mutate) {
        GenConfig c = GenConfig::Dense();
        mutate(c);
        try {
            c.Validate();
        } catch (const Error &e) {
            return e.code() == Errc::ConfigInvalid;
        }
        return false;
    };
    EXPECT_TRUE(bad([](GenConfig &c) { c.effects.p_ambient = 1.5; }));
    EXPECT_TRUE(bad([](GenConfig &c) { c.lights_min = 0; }));
    EXPECT_TRUE(bad([](GenConfig &c) { c.lights_max = 10; }));
    EXPECT_TRUE(bad([](GenConfig &c) { c.brightness_min = 4; }));
    EXPECT_TRUE(bad([](GenConfig &c) { c.discard_threshold = 0; }));
    EXPECT_TRUE(bad([](GenConfig &c) { c.d = 0; }));
    EXPECT_TRUE(bad([](GenConfig &c) { c.merl_fraction = -0.1; }));
}

TEST(GenConfig, KeyValueRoundTrip) {
    GenConfig cfg = GenConfig::Sparse();
    cfg.seed = 99;
    cfg.effects.p_ambient = 0.3;
    cfg.material_mode = MaterialMode::Disney;
    GenConfig back = GenConfig::Dense();
    for (const auto &[k, v] : ToKeyValues(cfg)) SetConfigValue(back, k, v);
    EXPECT_EQ(ToKeyValues(back), ToKeyValues(cfg));
    EXPECT_EQ(back.lights_max, 10);
    EXPECT_EQ(back.effects.p_ambient, 0.3);
    EXPECT_EQ(back.material_mode, MaterialMode::Disney);
    for (const auto &[k, v] : ToKeyValues(cfg)) EXPECT_TRUE(ConfigKeyHelp().count(k)) << k;
}

TEST(GenConfig, ConfigFile) {
    GenConfig cfg = GenConfig::Dense();
    std::istringstream in("# comment\n p_ambient = 0.5\n\nlights_min=20 # trailing\nnoise = false\n");
    ApplyConfigFile(cfg, in);
    EXPECT_EQ(cfg.effects.p_ambient, 0.5);
    EXPECT_EQ(cfg.lights_min, 20);
    EXPECT_FALSE(cfg.effects.noise);
    std::istringstream unknown("no_such_key = 1\n");
    EXPECT_THROW(ApplyConfigFile(cfg, unknown), Error);
    std::istringstream garbage("p_ambient = abc\n");
    EXPECT_THROW(ApplyConfigFile(cfg, garbage), Error);
}

class VectorSink : public RecordSink {
  public:
    void Write(const TrainingRecord &r) override { records.push_back(r); }
    std::vector<TrainingRecord> records;
};

TEST(Generate, IndependentOfWorkerCount) {
    GenConfig cfg = GenConfig::Dense();
    cfg.seed = 11;
    std::string bytes[3];
    int workers[3] = {1, 3, 8};
    for (int i = 0; i < 3; ++i) {
        std::stringstream out;
        DatasetWriter w(out, cfg.d);
        GenStats s = Generate(cfg, 300, workers[i], w);
        w.Finish();
        EXPECT_EQ(s.generated, 300u);
        EXPECT_EQ(s.generated + s.discarded, s.attempts);
        bytes[i] = out.str();
    }
    EXPECT_EQ(bytes[0], bytes[1]);
    EXPECT_EQ(bytes[0], bytes[2]);
}

TEST(Generate, ReplacesDiscardsInPlace) {
    GenConfig cfg = GenConfig::Dense();
    cfg.seed = 5;
    cfg.lights_min = cfg.lights_max = 1;  // frequent dark maps
    VectorSink sink;
    GenStats s = Generate(cfg, 200, 2, sink);
    EXPECT_EQ(sink.records.size(), 200u);
    EXPECT_GT(s.discarded, 0u);
    for (const auto &r : sink.records) EXPECT_GE(r.map.MaxRgb(), cfg.discard_threshold);
    // Record k is the first surviving retry of index k.
    for (uint64_t k = 0; k < 20; ++k) {
        uint32_t retry = 0;
        while (SampleRecord(cfg, k, retry).discarded) ++retry;
        EXPECT_EQ(SampleRecord(cfg, k, retry).record.map, sink.records[k].map);
    }
}

TEST(Generate, CountZeroIsInvalid) {
    VectorSink sink;
    try {
        Generate(GenConfig::Dense(), 0, 1, sink);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), Errc::ConfigInvalid);
    }
}

TEST(Generate, HopelessConfigGivesUp) {
    GenConfig cfg = PlainLambertian();
    cfg.fixed_albedo = Rgb(1e-9);
    cfg.max_retries = 5;
    VectorSink sink;
    EXPECT_THROW(Generate(cfg, 3, 2, sink), Error);
}

TEST(Generate, NoMerlTablesForcesFractionToZero) {
    VectorSink sink;
    GenStats s = Generate(GenConfig::Dense(), 200, 1, sink);
    EXPECT_EQ(s.merl_fraction, 0);
}

///////////////////////////////////////////////////////////////////////////
// PXOM files

std::vector<TrainingRecord> SomeRecords(int n) {
    VectorSink sink;
    Generate(GenConfig::Dense(), n, 1, sink);
    // Make values exactly representable so the round trip is lossless.
    for (auto &r : sink.records) {
        for (double &x : r.map.grid()) x = double(float(x));
        r.normal = Vec3(float(r.normal.x), float(r.normal.y), float(r.normal.z));
    }
    return sink.records;
}

TEST(Dataset, RoundTrip) {
    auto records = SomeRecords(100);
    std::stringstream buf;
    WriteDataset(buf, records, 32);
    EXPECT_EQ(buf.str().size(), 24 + 100 * (32 * 32 * 4 + 3) * 4);
    auto back = ReadDataset(buf);
    ASSERT_EQ(back.size(), records.size());
    for (size_t i = 0; i < records.size(); ++i) {
        EXPECT_EQ(back[i].map.grid().size(), records[i].map.grid().size());
        EXPECT_TRUE(std::equal(back[i].map.grid().begin(), back[i].map.grid().end(),
                               records[i].map.grid().begin()));
        EXPECT_EQ(back[i].normal, records[i].normal);
        // Occupancy is recovered from nonzero cells.
        for (int u = 0; u < 32; ++u)
            for (int v = 0; v < 32; ++v)
                if (back[i].map.Occupied(u, v)) EXPECT_TRUE(records[i].map.Occupied(u, v));
    }
}

TEST(Dataset, HeaderLayout) {
    auto records = SomeRecords(2);
    std::stringstream buf;
    WriteDataset(buf, records, 32);
    std::string s = buf.str();
    EXPECT_EQ(s.substr(0, 4), "PXOM");
    uint32_t version, d, channels;
    uint64_t count;
    std::memcpy(&version, s.data() + 4, 4);
    std::memcpy(&d, s.data() + 8, 4);
    std::memcpy(&channels, s.data() + 12, 4);
    std::memcpy(&count, s.data() + 16, 8);
    EXPECT_EQ(version, 1u);
    EXPECT_EQ(d, 32u);
    EXPECT_EQ(channels, 4u);
    EXPECT_EQ(count, 2u);
    // First cell value of record 0 as little-endian float32.
    float first;
    std::memcpy(&first, s.data() + 24, 4);
    EXPECT_EQ(double(first), records[0].map.grid()[0]);
}

Errc ReadError(const std::string &bytes) {
    std::istringstream in(bytes);
    try {
        ReadDataset(in);
    } catch (const Error &e) {
        return e.code();
    }
    return Errc::IoFailure;  // nothing thrown
}

TEST(Dataset, CorruptFiles) {
    std::stringstream buf;
    WriteDataset(buf, SomeRecords(3), 32);
    std::string good = buf.str();

    std::string magic = good;
    magic[0] = 'X';
    EXPECT_EQ(ReadError(magic), Errc::BadMagic);

    std::string version = good;
    version[4] = 7;
    EXPECT_EQ(ReadError(version), Errc::VersionUnsupported);

    std::string count = good;
    count[16] = 4;  // header claims one record more than the payload has
    EXPECT_EQ(ReadError(count), Errc::TruncatedFile);

    EXPECT_EQ(ReadError(good.substr(0, good.size() - 1)), Errc::TruncatedFile);
    EXPECT_EQ(ReadError(good.substr(0, 10)), Errc::TruncatedFile);
    EXPECT_EQ(ReadError(good + "x"), Errc::TruncatedFile);
}

TEST(Dataset, WriterRejectsWrongSize) {
    std::stringstream buf;
    DatasetWriter w(buf, 16);
    EXPECT_THROW(w.Write(TrainingRecord{ObservationMap(32), Vec3(0, 0, 1)}), Error);
}

}  // namespace
}  // namespace pxmap
