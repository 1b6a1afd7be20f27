// SPDX-License-Identifier: Apache-2.0

#include "pxmap/datagen.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>
#include <istream>
#include <ostream>

#include "pxmap/binary_io.h"
#include "pxmap/error.h"
#include "pxmap/random.h"

namespace pxmap {

EffectsConfig EffectsConfig::Off() {
    EffectsConfig e;
    e.p_shadow = 0;
    e.reflections = false;
    e.p_discontinuity = 0;
    e.p_ambient = 0;
    e.noise = false;
    e.quantize = false;
    return e;
}

GenConfig GenConfig::Dense() { return GenConfig{}; }

GenConfig GenConfig::Sparse() {
    GenConfig cfg;
    cfg.lights_min = cfg.lights_max = 10;
    cfg.light_max_elevation_deg = 45;
    return cfg;
}

namespace {

void Require(bool ok, const std::string &what) {
    if (!ok) throw Error(Errc::ConfigInvalid, what);
}

bool IsProbability(double p) { return p >= 0 && p <= 1; }

}  // namespace

void GenConfig::Validate() const {
    const EffectsConfig &e = effects;
    Require(d >= 1 && d <= 4096, "d must be in [1, 4096]");
    Require(lights_min >= 1 && lights_min <= lights_max, "need 1 <= lights_min <= lights_max");
    Require(light_max_elevation_deg > 0 && light_max_elevation_deg <= 90,
            "light_max_elevation_deg must be in (0, 90]");
    Require(brightness_min > 0 && brightness_min <= brightness_max,
            "need 0 < brightness_min <= brightness_max");
    Require(IsProbability(merl_fraction), "merl_fraction must be a probability");
    Require(IsProbability(e.p_shadow), "p_shadow must be a probability");
    Require(IsProbability(e.p_zero_height), "p_zero_height must be a probability");
    Require(e.wall_sigma > 0, "wall_sigma must be > 0");
    Require(e.wall_knots >= 1, "wall_knots must be >= 1");
    Require(e.reflection_candidates >= 0, "reflection_candidates must be >= 0");
    Require(IsProbability(e.p_discontinuity), "p_discontinuity must be a probability");
    Require(e.discontinuity_t_min >= 2 && e.discontinuity_t_min <= e.discontinuity_t_max,
            "need 2 <= discontinuity_t_min <= discontinuity_t_max");
    Require(IsProbability(e.p_ambient), "p_ambient must be a probability");
    Require(e.ambient_max >= 0, "ambient_max must be >= 0");
    const NoiseParams &n = e.noise_params;
    Require(n.mult_uniform_lo <= n.mult_uniform_hi, "noise_mu_lo must be <= noise_mu_hi");
    Require(n.mult_gauss_std >= 0 && n.add_gauss_std >= 0 && n.add_uniform >= 0,
            "noise magnitudes must be >= 0");
    Require(discard_threshold > 0, "discard_threshold must be > 0");
    Require(max_retries >= 1, "max_retries must be >= 1");
    if (fixed_albedo) {
        const Rgb &a = *fixed_albedo;
        Require(a.r >= 0 && a.g >= 0 && a.b >= 0, "fixed_albedo must be >= 0");
    }
}

///////////////////////////////////////////////////////////////////////////
// Flat key/value config

namespace {

struct KeyInfo {
    std::string help;
    std::function<std::string(const GenConfig &)> get;
    std::function<void(GenConfig &, const std::string &)> set;
};

// Shortest text that parses back to the same double.
std::string FormatDouble(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

double ParseDouble(const std::string &key, const std::string &s) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos == s.size()) return v;
    } catch (const std::exception &) {
    }
    throw Error(Errc::ConfigInvalid, key + ": not a number: '" + s + "'");
}

long long ParseInt(const std::string &key, const std::string &s) {
    try {
        size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos == s.size()) return v;
    } catch (const std::exception &) {
    }
    throw Error(Errc::ConfigInvalid, key + ": not an integer: '" + s + "'");
}

bool ParseBool(const std::string &key, const std::string &s) {
    if (s == "1" || s == "true" || s == "on" || s == "yes") return true;
    if (s == "0" || s == "false" || s == "off" || s == "no") return false;
    throw Error(Errc::ConfigInvalid, key + ": not a boolean: '" + s + "'");
}

#define PX_DOUBLE(name, path, help)                                                   \
    {                                                                                 \
        name, KeyInfo {                                                               \
            help, [](const GenConfig &c) { return FormatDouble(c.path); },            \
                [](GenConfig &c, const std::string &v) { c.path = ParseDouble(name, v); } \
        }                                                                             \
    }
#define PX_INT(name, path, help)                                                           \
    {                                                                                      \
        name, KeyInfo {                                                                    \
            help, [](const GenConfig &c) { return std::to_string(c.path); },               \
                [](GenConfig &c, const std::string &v) { c.path = decltype(c.path)(ParseInt(name, v)); } \
        }                                                                                  \
    }
#define PX_BOOL(name, path, help)                                                       \
    {                                                                                   \
        name, KeyInfo {                                                                 \
            help, [](const GenConfig &c) { return std::string(c.path ? "true" : "false"); }, \
                [](GenConfig &c, const std::string &v) { c.path = ParseBool(name, v); }  \
        }                                                                               \
    }

const std::map<std::string, KeyInfo> &Keys() {
    static const std::map<std::string, KeyInfo> keys = {
        PX_INT("d", d, "observation map side (cells)"),
        PX_INT("lights_min", lights_min, "minimum light count, U_I(lights_min, lights_max)"),
        PX_INT("lights_max", lights_max, "maximum light count"),
        PX_DOUBLE("light_max_elevation_deg", light_max_elevation_deg,
                  "lights uniform on the cap up to this angle from the view axis"),
        PX_DOUBLE("brightness_min", brightness_min, "per-channel light brightness lower bound"),
        PX_DOUBLE("brightness_max", brightness_max, "per-channel light brightness upper bound"),
        PX_DOUBLE("merl_fraction", merl_fraction,
                  "probability of a MERL/Lambertian mixture material (needs tables)"),
        PX_DOUBLE("p_shadow", effects.p_shadow, "probability of a non-empty shadow wall"),
        PX_DOUBLE("p_zero_height", effects.p_zero_height,
                  "probability that a single wall height is zeroed"),
        PX_DOUBLE("wall_sigma", effects.wall_sigma, "wall heights ~ |N(0, wall_sigma)|"),
        PX_INT("wall_knots", effects.wall_knots, "wall heights at equally spaced azimuths"),
        PX_BOOL("reflections", effects.reflections, "enable self reflections"),
        PX_INT("reflection_candidates", effects.reflection_candidates,
               "candidate reflection directions per pixel"),
        PX_DOUBLE("p_discontinuity", effects.p_discontinuity,
                  "probability of a multi-normal pixel"),
        PX_INT("discontinuity_t_min", effects.discontinuity_t_min, "minimum sub-pixel count"),
        PX_INT("discontinuity_t_max", effects.discontinuity_t_max, "maximum sub-pixel count"),
        PX_DOUBLE("p_ambient", effects.p_ambient, "probability of ambient light"),
        PX_DOUBLE("ambient_max", effects.ambient_max, "a = rho (N.V0) U(0, ambient_max)"),
        PX_BOOL("noise", effects.noise, "enable the four noise terms"),
        PX_DOUBLE("noise_mu_lo", effects.noise_params.mult_uniform_lo,
                  "multiplicative uniform noise lower bound"),
        PX_DOUBLE("noise_mu_hi", effects.noise_params.mult_uniform_hi,
                  "multiplicative uniform noise upper bound"),
        PX_DOUBLE("noise_mg_std", effects.noise_params.mult_gauss_std,
                  "multiplicative Gaussian noise std (mean 1)"),
        PX_DOUBLE("noise_au", effects.noise_params.add_uniform,
                  "additive uniform noise half-width"),
        PX_DOUBLE("noise_ag_std", effects.noise_params.add_gauss_std,
                  "additive Gaussian noise std (mean 0)"),
        PX_BOOL("quantize", effects.quantize, "16-bit discretisation and saturation"),
        PX_DOUBLE("discard_threshold", discard_threshold,
                  "maps with max rgb below this are discarded"),
        PX_INT("max_retries", max_retries, "discard retries per record before giving up"),
        PX_INT("seed", seed, "master seed"),
        {"material_mode",
         KeyInfo{"mixed | disney | lambertian",
                 [](const GenConfig &c) {
                     switch (c.material_mode) {
                     case MaterialMode::Disney: return std::string("disney");
                     case MaterialMode::Lambertian: return std::string("lambertian");
                     default: return std::string("mixed");
                     }
                 },
                 [](GenConfig &c, const std::string &v) {
                     if (v == "mixed") c.material_mode = MaterialMode::Mixed;
                     else if (v == "disney") c.material_mode = MaterialMode::Disney;
                     else if (v == "lambertian") c.material_mode = MaterialMode::Lambertian;
                     else throw Error(Errc::ConfigInvalid, "material_mode: unknown '" + v + "'");
                 }}},
    };
    return keys;
}

#undef PX_DOUBLE
#undef PX_INT
#undef PX_BOOL

std::string Trim(const std::string &s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::map<std::string, std::string> ToKeyValues(const GenConfig &cfg) {
    std::map<std::string, std::string> out;
    for (const auto &[k, info] : Keys()) out[k] = info.get(cfg);
    return out;
}

void SetConfigValue(GenConfig &cfg, const std::string &key, const std::string &value) {
    auto it = Keys().find(key);
    if (it == Keys().end()) throw Error(Errc::ConfigInvalid, "unknown config key '" + key + "'");
    it->second.set(cfg, Trim(value));
}

void ApplyConfigFile(GenConfig &cfg, std::istream &in) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (size_t hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = Trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(Errc::ConfigInvalid,
                        "line " + std::to_string(lineno) + ": expected key = value");
        SetConfigValue(cfg, Trim(line.substr(0, eq)), line.substr(eq + 1));
    }
}

const std::map<std::string, std::string> &ConfigKeyHelp() {
    static const std::map<std::string, std::string> help = [] {
        std::map<std::string, std::string> h;
        for (const auto &[k, info] : Keys()) h[k] = info.help;
        return h;
    }();
    return help;
}

///////////////////////////////////////////////////////////////////////////
// Sampling

PixelDraw SamplePixelEffects(RandomStream &rng, const Direction &normal, const Rgb &albedo,
                             const MaterialSpec &material, const MerlLibrary &library,
                             const EffectsConfig &effects, const std::optional<Rgb> &fixed_albedo) {
    RecordTraits traits;

    ShadowWallParams wall_params;
    wall_params.p_empty = 1 - effects.p_shadow;
    wall_params.p_zero_height = effects.p_zero_height;
    wall_params.sigma = effects.wall_sigma;
    wall_params.knots = effects.wall_knots;
    ShadowWall wall = effects.p_shadow > 0 ? SampleShadowWall(rng, wall_params)
                                           : ShadowWall(std::vector<double>(effects.wall_knots, 0.0));
    traits.wall_empty = wall.IsEmpty();
    // The wall sampler draws heights only for the non-empty branch, and an
    // all-zero non-empty wall has probability p_zero^knots.
    traits.shadow_sampled = !traits.wall_empty;

    ReflectionSet reflections;
    if (effects.reflections) reflections = SampleReflections(rng, wall, effects.reflection_candidates);
    traits.reflections = int(reflections.size());

    std::vector<SubPixel> subpixels{{normal, albedo}};
    Direction truth = normal;
    if (effects.p_discontinuity > 0 && rng.Bernoulli(effects.p_discontinuity)) {
        int t = rng.UniformInt(effects.discontinuity_t_min, effects.discontinuity_t_max);
        traits.discontinuity = true;
        // Near-antipodal sub-normals have no meaningful mean; redraw them.
        for (;;) {
            subpixels.resize(1);
            Vec3 sum = normal;
            for (int k = 1; k < t; ++k) {
                Direction nk = SampleHemisphereUniform(rng);
                Rgb ak = fixed_albedo ? *fixed_albedo
                                      : Rgb(rng.Uniform(), rng.Uniform(), rng.Uniform());
                subpixels.push_back({nk, ak});
                sum += nk;
            }
            double len = Length(sum);
            if (len > 1e-3 * t) {
                truth = sum / len;
                break;
            }
        }
    }

    Rgb ambient;
    if (effects.p_ambient > 0 && rng.Bernoulli(effects.p_ambient)) {
        ambient = SampleAmbient(rng, subpixels, effects.ambient_max);
        traits.ambient = true;
    }

    PreparedMaterial prepared(material, library);
    return PixelDraw{PixelModel(std::move(subpixels), std::move(wall), std::move(reflections),
                                prepared),
                     ambient, truth, traits};
}

Rgb PixelIntensity(RandomStream &rng, const PixelDraw &pixel, const Direction &l, const Rgb &phi,
                   const EffectsConfig &effects) {
    NoiseDraws noise = effects.noise ? SampleNoise(rng, effects.noise_params) : NoiseDraws{};
    return ComposeIntensity(pixel.model.Reflectance(l), pixel.ambient, phi, noise,
                            effects.quantize);
}

namespace {

MaterialSpec SampleMaterial(RandomStream &rng, const GenConfig &cfg, const MerlLibrary &library,
                            bool *is_merl) {
    *is_merl = false;
    switch (cfg.material_mode) {
    case MaterialMode::Lambertian: return Lambertian{};
    case MaterialMode::Mixed:
        if (!library.empty() && rng.Bernoulli(cfg.merl_fraction)) {
            *is_merl = true;
            MerlMix m;
            m.table_id = size_t(rng.UniformInt(0, int(library.size()) - 1));
            m.w = rng.Uniform();
            return m;
        }
        [[fallthrough]];
    case MaterialMode::Disney: break;
    }
    DisneyParams p;
    p.metallic = rng.Uniform();
    p.specular = rng.Uniform();
    p.roughness = rng.Uniform();
    p.specularTint = rng.Uniform();
    p.sheen = rng.Uniform();
    p.sheenTint = rng.Uniform();
    p.clearcoat = rng.Uniform();
    p.clearcoatRoughness = rng.Uniform();
    return p;
}

}  // namespace

SampleResult SampleRecord(const GenConfig &cfg, uint64_t index, uint32_t retry,
                          const MerlLibrary &library) {
    RandomStream rng(DeriveSeed({cfg.seed, index, retry}));

    Direction normal = SampleHemisphereUniform(rng);

    int count = rng.UniformInt(cfg.lights_min, cfg.lights_max);
    double max_elev = Radians(cfg.light_max_elevation_deg);
    std::vector<LightSample> lights(count);
    for (LightSample &s : lights) {
        s.direction = SampleHemisphereUniform(rng, max_elev);
        s.phi = Rgb(rng.Uniform(cfg.brightness_min, cfg.brightness_max),
                    rng.Uniform(cfg.brightness_min, cfg.brightness_max),
                    rng.Uniform(cfg.brightness_min, cfg.brightness_max));
    }

    bool is_merl = false;
    MaterialSpec material = SampleMaterial(rng, cfg, library, &is_merl);
    Rgb albedo = cfg.fixed_albedo ? *cfg.fixed_albedo
                                  : Rgb(rng.Uniform(), rng.Uniform(), rng.Uniform());

    PixelDraw pixel =
        SamplePixelEffects(rng, normal, albedo, material, library, cfg.effects, cfg.fixed_albedo);

    for (LightSample &s : lights)
        s.intensity = PixelIntensity(rng, pixel, s.direction, s.phi, cfg.effects);

    SampleResult result;
    result.record.map = BuildMap(lights, cfg.d);
    result.record.normal = pixel.normal;
    result.traits = pixel.traits;
    result.traits.merl = is_merl;
    result.traits.lights = count;
    result.discarded = result.record.map.MaxRgb() < cfg.discard_threshold;
    return result;
}

///////////////////////////////////////////////////////////////////////////
// Dataset I/O

DatasetWriter::DatasetWriter(std::ostream &out, int d) : out_(out), d_(d) {
    out_.write(kDatasetMagic, 4);
    WriteLE<uint32_t>(out_, kDatasetVersion);
    WriteLE<uint32_t>(out_, uint32_t(d));
    WriteLE<uint32_t>(out_, uint32_t(kMapChannels));
    count_pos_ = out_.tellp();
    WriteLE<uint64_t>(out_, 0);
    if (!out_) throw Error(Errc::IoFailure, "failed writing dataset header");
    buffer_.resize(size_t(d) * d * kMapChannels + 3);
}

void DatasetWriter::Write(const TrainingRecord &record) {
    if (record.map.d() != d_)
        throw Error(Errc::DimensionMismatch, "record map size " + std::to_string(record.map.d()) +
                                                 " != dataset size " + std::to_string(d_));
    auto grid = record.map.grid();
    std::transform(grid.begin(), grid.end(), buffer_.begin(), [](double v) { return float(v); });
    size_t n = grid.size();
    buffer_[n] = float(record.normal.x);
    buffer_[n + 1] = float(record.normal.y);
    buffer_[n + 2] = float(record.normal.z);
    WriteArrayLE(out_, std::span<const float>(buffer_));
    if (!out_) throw Error(Errc::IoFailure, "failed writing dataset record");
    ++written_;
}

void DatasetWriter::Finish() {
    std::streampos end = out_.tellp();
    out_.seekp(count_pos_);
    WriteLE<uint64_t>(out_, written_);
    out_.seekp(end);
    out_.flush();
    if (!out_) throw Error(Errc::IoFailure, "failed finalizing dataset (stream not seekable?)");
}

DatasetReader::DatasetReader(std::istream &in) : in_(in) {
    char magic[4];
    if (!in_.read(magic, 4)) throw Error(Errc::TruncatedFile, "dataset header is incomplete");
    if (!std::equal(magic, magic + 4, kDatasetMagic))
        throw Error(Errc::BadMagic, "not a PXOM dataset");
    uint32_t version, d, channels;
    if (!ReadLE(in_, &version)) throw Error(Errc::TruncatedFile, "dataset header is incomplete");
    if (version != kDatasetVersion)
        throw Error(Errc::VersionUnsupported, "dataset version " + std::to_string(version));
    if (!ReadLE(in_, &d) || !ReadLE(in_, &channels) || !ReadLE(in_, &header_.count))
        throw Error(Errc::TruncatedFile, "dataset header is incomplete");
    if (d < 1 || d > 4096) throw Error(Errc::DimensionMismatch, "bad map size " + std::to_string(d));
    if (channels != uint32_t(kMapChannels))
        throw Error(Errc::DimensionMismatch, "expected 4 channels, got " + std::to_string(channels));
    header_.version = version;
    header_.d = int(d);
    header_.channels = int(channels);
    buffer_.resize(size_t(d) * d * kMapChannels + 3);
}

bool DatasetReader::Next(TrainingRecord *record) {
    if (read_ == header_.count) return false;
    if (!ReadArrayLE(in_, std::span<float>(buffer_)))
        throw Error(Errc::TruncatedFile, "dataset ends after " + std::to_string(read_) + " of " +
                                             std::to_string(header_.count) + " records");
    int d = header_.d;
    ObservationMap map(d);
    auto grid = map.grid();
    std::copy(buffer_.begin(), buffer_.begin() + grid.size(), grid.begin());
    // Occupancy is not stored; cells with any non-zero channel count as occupied.
    for (int u = 0; u < d; ++u)
        for (int v = 0; v < d; ++v)
            for (int c = 0; c < kMapChannels; ++c)
                if (map.At(u, v, c) != 0) {
                    map.SetOccupied(u, v);
                    break;
                }
    size_t n = grid.size();
    record->map = std::move(map);
    record->normal = Vec3(buffer_[n], buffer_[n + 1], buffer_[n + 2]);
    ++read_;
    return true;
}

void WriteDataset(std::ostream &out, const std::vector<TrainingRecord> &records, int d) {
    DatasetWriter writer(out, d);
    for (const TrainingRecord &r : records) writer.Write(r);
    writer.Finish();
}

std::vector<TrainingRecord> ReadDataset(std::istream &in) {
    DatasetReader reader(in);
    std::vector<TrainingRecord> records;
    records.reserve(size_t(std::min<uint64_t>(reader.header().count, 1 << 20)));
    TrainingRecord r;
    while (reader.Next(&r)) records.push_back(std::move(r));
    if (in.peek() != std::char_traits<char>::eof())
        throw Error(Errc::TruncatedFile, "payload holds more data than the header count declares");
    return records;
}

}  // namespace pxmap
