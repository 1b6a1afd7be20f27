// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pxmap/brdf.h"
#include "pxmap/datagen.h"
#include "pxmap/obsmap.h"

namespace pxmap {

struct Light {
    Direction direction;
    Rgb brightness{1, 1, 1};
};

// DiLiGenT-style calibration: one light per non-empty line, three reals each.
std::vector<Light> LoadLights(std::istream &directions, std::istream &intensities);
std::vector<Light> LoadLightFiles(const std::string &directions_path,
                                  const std::string &intensities_path);
void WriteLightFiles(const std::string &directions_path, const std::string &intensities_path,
                     const std::vector<Light> &lights);

// J images under known lights, linear values in [0, 1], plus a mask.
// Pixel (row, col): row 0 is the top of the image, +y of normals points up.
class ImageStack {
  public:
    ImageStack() = default;
    ImageStack(int height, int width, std::vector<Light> lights);

    int height() const { return height_; }
    int width() const { return width_; }
    int count() const { return int(lights_.size()); }
    const std::vector<Light> &lights() const { return lights_; }

    size_t PixelIndex(int row, int col) const { return size_t(row) * width_ + col; }
    const Rgb &At(int image, int row, int col) const { return images_[image][PixelIndex(row, col)]; }
    Rgb &At(int image, int row, int col) { return images_[image][PixelIndex(row, col)]; }
    std::vector<Rgb> &image(int j) { return images_[j]; }
    const std::vector<Rgb> &image(int j) const { return images_[j]; }

    bool InMask(int row, int col) const { return mask_[PixelIndex(row, col)] != 0; }
    std::vector<uint8_t> &mask() { return mask_; }
    const std::vector<uint8_t> &mask() const { return mask_; }

    // Light samples for one pixel, in light order.
    std::vector<LightSample> Samples(int row, int col) const;

  private:
    int height_ = 0, width_ = 0;
    std::vector<Light> lights_;
    std::vector<std::vector<Rgb>> images_;
    std::vector<uint8_t> mask_;
};

// Reads the stack images of a directory. If `filenames.txt` exists it lists
// the images in light order; otherwise every *.png except mask*/Normal* is
// used in lexicographic order. An empty mask_path means "all pixels".
ImageStack LoadImageStack(const std::string &directory, std::vector<Light> lights,
                          const std::string &mask_path = {});
// Writes 16-bit PNGs 001.png..., mask.png, and the two light files.
void SaveImageStack(const std::string &directory, const ImageStack &stack);

// Restricts a stack to a subset of its lights (in the given order).
ImageStack SelectLights(const ImageStack &stack, const std::vector<int> &indices);
// `count` independent subsets of `subset_size` distinct light indices.
std::vector<std::vector<int>> RandomLightSubsets(int lights, int subset_size, int count,
                                                 uint64_t seed);

class NormalMap {
  public:
    NormalMap() = default;
    NormalMap(int height, int width)
        : height_(height), width_(width), normals_(size_t(height) * width),
          mask_(size_t(height) * width, 0) {}

    int height() const { return height_; }
    int width() const { return width_; }
    size_t PixelIndex(int row, int col) const { return size_t(row) * width_ + col; }
    const Direction &At(int row, int col) const { return normals_[PixelIndex(row, col)]; }
    bool Valid(int row, int col) const { return mask_[PixelIndex(row, col)] != 0; }
    void Set(int row, int col, const Direction &n) {
        normals_[PixelIndex(row, col)] = n;
        mask_[PixelIndex(row, col)] = 1;
    }
    void Invalidate(int row, int col) { mask_[PixelIndex(row, col)] = 0; }
    int ValidCount() const;

  private:
    int height_ = 0, width_ = 0;
    std::vector<Direction> normals_;
    std::vector<uint8_t> mask_;
};

// "PXNM": magic, u32 version, u32 H, u32 W, H*W*3 float32 (NaN = masked out).
inline constexpr char kNormalMapMagic[4] = {'P', 'X', 'N', 'M'};
inline constexpr uint32_t kNormalMapVersion = 1;
void WriteNormalMap(std::ostream &out, const NormalMap &map);
NormalMap ReadNormalMap(std::istream &in);
void WriteNormalMapFile(const std::string &path, const NormalMap &map);
NormalMap ReadNormalMapFile(const std::string &path);
// RGB PNG with n mapped from [-1, 1] to [0, max]; masked-out pixels black.
NormalMap ReadNormalPng(const std::string &path, const std::string &mask_path = {});

ObservationMap ExtractMap(const ImageStack &stack, int row, int col, int d = kDefaultMapSize);

// Least-squares Lambertian solve per pixel on the brightness-compensated
// gray channel. Observations that are exactly zero are left out of the
// system; pixels with fewer than three usable lights are invalid.
NormalMap WoodhamSolve(const ImageStack &stack);

struct SphereRender {
    ImageStack stack;
    NormalMap truth;
};

// Orthographic unit sphere filling a resolution x resolution image, shaded
// independently per pixel. Pixel randomness is keyed by (seed, pixel index).
SphereRender RenderSphere(const MaterialSpec &material, const Rgb &albedo,
                          const std::vector<Light> &lights, int resolution,
                          const EffectsConfig &effects, uint64_t seed = 0,
                          const MerlLibrary &library = {});

// Normal at a sphere pixel, or nullopt outside the disk.
std::optional<Direction> SphereNormal(int row, int col, int resolution);

struct Evaluation {
    double mean_deg = 0;
    double median_deg = 0;
    std::vector<std::pair<double, double>> percentiles;  // (percentile, degrees)
    size_t pixels = 0;
    int height = 0, width = 0;
    std::vector<double> error_map;  // degrees, NaN outside the intersection
};

Evaluation Evaluate(const NormalMap &pred, const NormalMap &truth);

// A normal predictor consumes a batch of observation maps and returns one
// normal per map.
using NormalPredictor = std::function<std::vector<Direction>(const std::vector<ObservationMap> &)>;

// Test-time rotation augmentation: predictions for K light rotations
// 2 pi k / K are rotated back, averaged and renormalized.
NormalMap KRotationPredict(const ImageStack &stack, int k, const NormalPredictor &predictor,
                           int d = kDefaultMapSize, size_t batch = 4096);

// Runs an external program per batch: the maps go to a PXOM file (normals
// zero-filled) and the program must write a 1 x N PXNM file. `command` may
// contain {input} and {output}; otherwise the two paths are appended.
class SubprocessPredictor {
  public:
    SubprocessPredictor(std::string command, std::string work_dir);
    std::vector<Direction> operator()(const std::vector<ObservationMap> &maps) const;

  private:
    std::string command_;
    std::string work_dir_;
};

}  // namespace pxmap
