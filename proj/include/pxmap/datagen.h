// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pxmap/brdf.h"
#include "pxmap/effects.h"
#include "pxmap/obsmap.h"

namespace pxmap {

class RandomStream;

// Per-pixel effect switches and magnitudes. Defaults follow the data
// generation hyperparameter table; Off() disables everything including
// noise and quantization.
struct EffectsConfig {
    double p_shadow = 0.75;
    double p_zero_height = 0.25;
    double wall_sigma = 2.0;
    int wall_knots = ShadowWall::kDefaultKnots;
    bool reflections = true;
    int reflection_candidates = kReflectionCandidates;
    double p_discontinuity = 0.15;
    int discontinuity_t_min = 2;
    int discontinuity_t_max = 3;
    double p_ambient = 0.75;
    double ambient_max = 0.01;
    bool noise = true;
    NoiseParams noise_params;
    bool quantize = true;

    static EffectsConfig Off();
};

enum class MaterialMode { Mixed, Disney, Lambertian };

struct GenConfig {
    int d = kDefaultMapSize;
    int lights_min = 50;
    int lights_max = 1000;
    double light_max_elevation_deg = 70;
    double brightness_min = 0.28;
    double brightness_max = 3.2;
    double merl_fraction = 0.25;
    MaterialMode material_mode = MaterialMode::Mixed;
    std::optional<Rgb> fixed_albedo;  // test hook; normally albedo ~ U(0,1)^3
    EffectsConfig effects;
    double discard_threshold = 1e-3;
    int max_retries = 1000;
    uint64_t seed = 0;

    static GenConfig Dense();
    static GenConfig Sparse();

    // Throws Errc::ConfigInvalid describing the first bad field.
    void Validate() const;
};

// Flat key/value view of GenConfig; keys are the field names (effect
// fields without the "effects." prefix).
std::map<std::string, std::string> ToKeyValues(const GenConfig &cfg);
// Applies one key; throws ConfigInvalid on unknown keys or bad values.
void SetConfigValue(GenConfig &cfg, const std::string &key, const std::string &value);
// "key = value" lines, '#' comments.
void ApplyConfigFile(GenConfig &cfg, std::istream &in);
// Short description of each key, for --help output.
const std::map<std::string, std::string> &ConfigKeyHelp();

struct TrainingRecord {
    ObservationMap map;
    Direction normal;
};

struct RecordTraits {
    bool shadow_sampled = false;  // the non-empty wall procedure was chosen
    bool wall_empty = true;
    bool ambient = false;
    bool discontinuity = false;
    bool merl = false;
    int reflections = 0;
    int lights = 0;
};

struct SampleResult {
    TrainingRecord record;
    RecordTraits traits;
    bool discarded = false;
};

// Randomized pixel: sub-pixels, shadow wall, reflectors and ambient.
struct PixelDraw {
    PixelModel model;
    Rgb ambient;
    Direction normal;  // ground truth (renormalized sub-pixel mean)
    RecordTraits traits;
};

// Samples every per-pixel effect for a pixel with the given base normal and
// albedo. Sub-pixel albedos are fixed_albedo if set, else U(0,1)^3.
PixelDraw SamplePixelEffects(RandomStream &rng, const Direction &normal, const Rgb &albedo,
                             const MaterialSpec &material, const MerlLibrary &library,
                             const EffectsConfig &effects,
                             const std::optional<Rgb> &fixed_albedo = std::nullopt);

// Shades a sampled pixel under one light: reflectance, noise, sensor.
Rgb PixelIntensity(RandomStream &rng, const PixelDraw &pixel, const Direction &l, const Rgb &phi,
                   const EffectsConfig &effects);

// One record from the stream keyed by (seed, index, retry).
SampleResult SampleRecord(const GenConfig &cfg, uint64_t index, uint32_t retry = 0,
                          const MerlLibrary &library = {});

class RecordSink {
  public:
    virtual ~RecordSink() = default;
    virtual void Write(const TrainingRecord &record) = 0;
};

struct GenStats {
    uint64_t attempts = 0;
    uint64_t generated = 0;
    uint64_t discarded = 0;
    double shadow_fraction = 0;
    double empty_wall_fraction = 0;
    double ambient_fraction = 0;
    double discontinuity_fraction = 0;
    double merl_fraction = 0;
    double mean_reflections = 0;
    double seconds = 0;
    double records_per_second = 0;
};

// Emits exactly `count` kept records in index order. A discarded record is
// replaced by the next retry of the same index, so the output depends only
// on (cfg, count) and never on `workers`.
GenStats Generate(const GenConfig &cfg, uint64_t count, int workers, RecordSink &sink,
                  const MerlLibrary &library = {});

///////////////////////////////////////////////////////////////////////////
// "PXOM" dataset files

inline constexpr char kDatasetMagic[4] = {'P', 'X', 'O', 'M'};
inline constexpr uint32_t kDatasetVersion = 1;

class DatasetWriter : public RecordSink {
  public:
    // Writes the header immediately; the record count is patched by Finish().
    DatasetWriter(std::ostream &out, int d);
    void Write(const TrainingRecord &record) override;
    // Seeks back to store the final record count; the stream must be seekable.
    void Finish();
    uint64_t written() const { return written_; }

  private:
    std::ostream &out_;
    int d_;
    std::streampos count_pos_;
    uint64_t written_ = 0;
    std::vector<float> buffer_;
};

struct DatasetHeader {
    uint32_t version = kDatasetVersion;
    int d = 0;
    int channels = kMapChannels;
    uint64_t count = 0;
};

class DatasetReader {
  public:
    explicit DatasetReader(std::istream &in);
    const DatasetHeader &header() const { return header_; }
    // False once `count` records were read; throws TruncatedFile on short data.
    bool Next(TrainingRecord *record);

  private:
    std::istream &in_;
    DatasetHeader header_;
    uint64_t read_ = 0;
    std::vector<float> buffer_;
};

void WriteDataset(std::ostream &out, const std::vector<TrainingRecord> &records, int d);
std::vector<TrainingRecord> ReadDataset(std::istream &in);

}  // namespace pxmap
