// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "pxmap/binary_io.h"
#include "pxmap/error.h"
#include "pxmap/png_io.h"
#include "pxmap/pstereo.h"
#include "pxmap/random.h"

namespace fs = std::filesystem;

namespace pxmap {

namespace {

std::vector<Vec3> ReadTriples(std::istream &in, const char *what) {
    std::vector<Vec3> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::istringstream ls(line);
        double v[3];
        if (!(ls >> v[0] >> v[1] >> v[2]))
            throw Error(Errc::ParseError, std::string(what) + " line " + std::to_string(lineno) +
                                              ": expected three reals");
        std::string extra;
        if (ls >> extra)
            throw Error(Errc::ParseError, std::string(what) + " line " + std::to_string(lineno) +
                                              ": trailing '" + extra + "'");
        for (double x : v)
            if (!std::isfinite(x))
                throw Error(Errc::ParseError, std::string(what) + " line " +
                                                  std::to_string(lineno) + ": non-finite value");
        out.emplace_back(v[0], v[1], v[2]);
    }
    return out;
}

}  // namespace

std::vector<Light> LoadLights(std::istream &directions, std::istream &intensities) {
    std::vector<Vec3> dirs = ReadTriples(directions, "light directions");
    std::vector<Vec3> ints = ReadTriples(intensities, "light intensities");
    if (dirs.size() != ints.size())
        throw Error(Errc::LineCountMismatch, std::to_string(dirs.size()) + " directions vs " +
                                                 std::to_string(ints.size()) + " intensities");
    std::vector<Light> lights(dirs.size());
    for (size_t j = 0; j < dirs.size(); ++j) {
        double len = Length(dirs[j]);
        if (!(len > 0))
            throw Error(Errc::ParseError, "light direction " + std::to_string(j + 1) + " is zero");
        if (!(ints[j].x > 0 && ints[j].y > 0 && ints[j].z > 0))
            throw Error(Errc::ParseError,
                        "light intensity " + std::to_string(j + 1) + " must be positive");
        lights[j].direction = dirs[j] / len;
        lights[j].brightness = Rgb(ints[j].x, ints[j].y, ints[j].z);
    }
    return lights;
}

std::vector<Light> LoadLightFiles(const std::string &directions_path,
                                  const std::string &intensities_path) {
    std::ifstream d(directions_path), i(intensities_path);
    if (!d) throw Error(Errc::IoFailure, "cannot open " + directions_path);
    if (!i) throw Error(Errc::IoFailure, "cannot open " + intensities_path);
    return LoadLights(d, i);
}

void WriteLightFiles(const std::string &directions_path, const std::string &intensities_path,
                     const std::vector<Light> &lights) {
    std::ofstream d(directions_path), i(intensities_path);
    if (!d || !i) throw Error(Errc::IoFailure, "cannot create light files");
    d.precision(17);
    i.precision(17);
    for (const Light &l : lights) {
        d << l.direction.x << ' ' << l.direction.y << ' ' << l.direction.z << '\n';
        i << l.brightness.r << ' ' << l.brightness.g << ' ' << l.brightness.b << '\n';
    }
    if (!d || !i) throw Error(Errc::IoFailure, "failed writing light files");
}

ImageStack::ImageStack(int height, int width, std::vector<Light> lights)
    : height_(height), width_(width), lights_(std::move(lights)),
      images_(lights_.size(), std::vector<Rgb>(size_t(height) * width)),
      mask_(size_t(height) * width, 1) {}

std::vector<LightSample> ImageStack::Samples(int row, int col) const {
    std::vector<LightSample> samples(lights_.size());
    size_t p = PixelIndex(row, col);
    for (size_t j = 0; j < lights_.size(); ++j)
        samples[j] = LightSample{lights_[j].direction, lights_[j].brightness, images_[j][p]};
    return samples;
}

namespace {

std::vector<fs::path> ListStackImages(const fs::path &dir) {
    std::vector<fs::path> files;
    fs::path list = dir / "filenames.txt";
    if (fs::exists(list)) {
        std::ifstream in(list);
        std::string name;
        while (in >> name) files.push_back(dir / name);
        return files;
    }
    for (const auto &entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".png") continue;
        std::string stem = entry.path().stem().string();
        if (stem.rfind("mask", 0) == 0 || stem.rfind("Normal", 0) == 0) continue;
        files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

}  // namespace

ImageStack LoadImageStack(const std::string &directory, std::vector<Light> lights,
                          const std::string &mask_path) {
    std::error_code ec;
    if (!fs::is_directory(directory, ec))
        throw Error(Errc::IoFailure, "not a directory: " + directory);
    std::vector<fs::path> files = ListStackImages(directory);
    if (files.size() != lights.size())
        throw Error(Errc::CountMismatch, std::to_string(files.size()) + " images vs " +
                                             std::to_string(lights.size()) + " lights");
    if (files.empty()) throw Error(Errc::CountMismatch, "no images in " + directory);

    ImageStack stack;
    for (size_t j = 0; j < files.size(); ++j) {
        PngImage png = ReadPng(files[j].string());
        if (j == 0) {
            stack = ImageStack(png.height, png.width, lights);
        } else if (png.height != stack.height() || png.width != stack.width()) {
            throw Error(Errc::DimensionMismatch, files[j].string() + " differs in size from " +
                                                     files[0].string());
        }
        double scale = 1.0 / png.MaxValue();
        std::vector<Rgb> &img = stack.image(int(j));
        for (int r = 0; r < png.height; ++r) {
            for (int c = 0; c < png.width; ++c) {
                Rgb &px = img[stack.PixelIndex(r, c)];
                if (png.channels == 1) {
                    px = Rgb(png.At(r, c, 0) * scale);
                } else {
                    px = Rgb(png.At(r, c, 0) * scale, png.At(r, c, 1) * scale,
                             png.At(r, c, 2) * scale);
                }
            }
        }
    }

    if (!mask_path.empty()) {
        PngImage mask = ReadPng(mask_path);
        if (mask.height != stack.height() || mask.width != stack.width())
            throw Error(Errc::DimensionMismatch, "mask size differs from the images");
        for (int r = 0; r < mask.height; ++r)
            for (int c = 0; c < mask.width; ++c) {
                bool on = false;
                for (int ch = 0; ch < mask.channels; ++ch) on |= mask.At(r, c, ch) != 0;
                stack.mask()[stack.PixelIndex(r, c)] = on ? 1 : 0;
            }
    }
    return stack;
}

void SaveImageStack(const std::string &directory, const ImageStack &stack) {
    fs::create_directories(directory);
    fs::path dir(directory);
    for (int j = 0; j < stack.count(); ++j) {
        PngImage png{stack.width(), stack.height(), 3, 16, {}};
        png.samples.resize(size_t(stack.width()) * stack.height() * 3);
        const std::vector<Rgb> &img = stack.image(j);
        for (size_t p = 0; p < img.size(); ++p)
            for (int c = 0; c < 3; ++c)
                png.samples[p * 3 + c] =
                    uint16_t(std::lround(std::clamp(img[p][c], 0.0, 1.0) * 65535.0));
        char name[32];
        std::snprintf(name, sizeof(name), "%03d.png", j + 1);
        WritePng((dir / name).string(), png);
    }
    PngImage mask{stack.width(), stack.height(), 1, 8, {}};
    mask.samples.resize(stack.mask().size());
    for (size_t p = 0; p < stack.mask().size(); ++p) mask.samples[p] = stack.mask()[p] ? 255 : 0;
    WritePng((dir / "mask.png").string(), mask);
    WriteLightFiles((dir / "light_directions.txt").string(),
                    (dir / "light_intensities.txt").string(), stack.lights());
}

ImageStack SelectLights(const ImageStack &stack, const std::vector<int> &indices) {
    std::vector<Light> lights;
    for (int j : indices) {
        if (j < 0 || j >= stack.count())
            throw Error(Errc::ConfigInvalid, "light index " + std::to_string(j) + " out of range");
        lights.push_back(stack.lights()[j]);
    }
    ImageStack out(stack.height(), stack.width(), std::move(lights));
    for (size_t k = 0; k < indices.size(); ++k) out.image(int(k)) = stack.image(indices[k]);
    out.mask() = stack.mask();
    return out;
}

std::vector<std::vector<int>> RandomLightSubsets(int lights, int subset_size, int count,
                                                 uint64_t seed) {
    if (subset_size < 1 || subset_size > lights || count < 1)
        throw Error(Errc::ConfigInvalid, "need 1 <= subset_size <= lights and count >= 1");
    std::vector<std::vector<int>> subsets;
    for (int s = 0; s < count; ++s) {
        RandomStream rng(DeriveSeed({seed, uint64_t(s)}));
        std::vector<int> all(lights);
        std::iota(all.begin(), all.end(), 0);
        std::shuffle(all.begin(), all.end(), rng.engine());
        all.resize(subset_size);
        std::sort(all.begin(), all.end());
        subsets.push_back(std::move(all));
    }
    return subsets;
}

///////////////////////////////////////////////////////////////////////////
// Normal maps

int NormalMap::ValidCount() const { return int(std::count(mask_.begin(), mask_.end(), uint8_t(1))); }

void WriteNormalMap(std::ostream &out, const NormalMap &map) {
    out.write(kNormalMapMagic, 4);
    WriteLE<uint32_t>(out, kNormalMapVersion);
    WriteLE<uint32_t>(out, uint32_t(map.height()));
    WriteLE<uint32_t>(out, uint32_t(map.width()));
    const float nan = std::numeric_limits<float>::quiet_NaN();
    std::vector<float> buf(size_t(map.height()) * map.width() * 3);
    for (int r = 0; r < map.height(); ++r)
        for (int c = 0; c < map.width(); ++c) {
            size_t p = map.PixelIndex(r, c) * 3;
            if (map.Valid(r, c)) {
                const Direction &n = map.At(r, c);
                buf[p] = float(n.x);
                buf[p + 1] = float(n.y);
                buf[p + 2] = float(n.z);
            } else {
                buf[p] = buf[p + 1] = buf[p + 2] = nan;
            }
        }
    WriteArrayLE(out, std::span<const float>(buf));
    if (!out) throw Error(Errc::IoFailure, "failed writing normal map");
}

NormalMap ReadNormalMap(std::istream &in) {
    char magic[4];
    if (!in.read(magic, 4)) throw Error(Errc::TruncatedFile, "normal map header is incomplete");
    if (!std::equal(magic, magic + 4, kNormalMapMagic))
        throw Error(Errc::BadMagic, "not a PXNM normal map");
    uint32_t version, h, w;
    if (!ReadLE(in, &version)) throw Error(Errc::TruncatedFile, "normal map header is incomplete");
    if (version != kNormalMapVersion)
        throw Error(Errc::VersionUnsupported, "normal map version " + std::to_string(version));
    if (!ReadLE(in, &h) || !ReadLE(in, &w))
        throw Error(Errc::TruncatedFile, "normal map header is incomplete");
    if (uint64_t(h) * w > (uint64_t(1) << 32))
        throw Error(Errc::DimensionMismatch, "normal map is implausibly large");
    std::vector<float> buf(size_t(h) * w * 3);
    if (!ReadArrayLE(in, std::span<float>(buf)))
        throw Error(Errc::TruncatedFile, "normal map payload is short");
    NormalMap map{int(h), int(w)};
    for (int r = 0; r < int(h); ++r)
        for (int c = 0; c < int(w); ++c) {
            size_t p = map.PixelIndex(r, c) * 3;
            if (std::isnan(buf[p]) || std::isnan(buf[p + 1]) || std::isnan(buf[p + 2])) continue;
            map.Set(r, c, Vec3(buf[p], buf[p + 1], buf[p + 2]));
        }
    return map;
}

void WriteNormalMapFile(const std::string &path, const NormalMap &map) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::IoFailure, "cannot create " + path);
    WriteNormalMap(out, map);
}

NormalMap ReadNormalMapFile(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoFailure, "cannot open " + path);
    return ReadNormalMap(in);
}

NormalMap ReadNormalPng(const std::string &path, const std::string &mask_path) {
    PngImage png = ReadPng(path);
    if (png.channels != 3) throw Error(Errc::DecodeError, path + ": normal PNG must be RGB");
    std::optional<PngImage> mask;
    if (!mask_path.empty()) {
        mask = ReadPng(mask_path);
        if (mask->width != png.width || mask->height != png.height)
            throw Error(Errc::DimensionMismatch, "mask size differs from the normal map");
    }
    NormalMap map(png.height, png.width);
    double scale = 2.0 / png.MaxValue();
    for (int r = 0; r < png.height; ++r)
        for (int c = 0; c < png.width; ++c) {
            if (mask && mask->At(r, c, 0) == 0) continue;
            Vec3 n(png.At(r, c, 0) * scale - 1, png.At(r, c, 1) * scale - 1,
                   png.At(r, c, 2) * scale - 1);
            double len = Length(n);
            if (len < 0.5) continue;
            map.Set(r, c, n / len);
        }
    return map;
}

ObservationMap ExtractMap(const ImageStack &stack, int row, int col, int d) {
    if (row < 0 || row >= stack.height() || col < 0 || col >= stack.width() ||
        !stack.InMask(row, col))
        throw Error(Errc::OutsideMask, "pixel (" + std::to_string(row) + ", " +
                                           std::to_string(col) + ") is outside the mask");
    return BuildMap(stack.Samples(row, col), d);
}

}  // namespace pxmap
