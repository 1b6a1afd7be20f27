// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "pxmap/brdf.h"
#include "pxmap/geom.h"

namespace pxmap {

class RandomStream;

// Circular occluder of radius 1 around the pixel. Heights sit at equally
// spaced azimuths starting at 0 and are linearly interpolated (periodic).
class ShadowWall {
  public:
    static constexpr int kDefaultKnots = 20;

    ShadowWall() : heights_(kDefaultKnots, 0.0) {}
    explicit ShadowWall(std::vector<double> heights);

    const std::vector<double> &heights() const { return heights_; }
    int knots() const { return int(heights_.size()); }
    bool IsEmpty() const;
    double HeightAt(double azimuth) const;

  private:
    std::vector<double> heights_;
};

struct ShadowWallParams {
    double p_empty = 0.25;
    double p_zero_height = 0.25;
    double sigma = 2.0;
    int knots = ShadowWall::kDefaultKnots;
};

ShadowWall SampleShadowWall(RandomStream &rng, const ShadowWallParams &params = {});

// True when the ray from the pixel centre along l hits the wall, i.e.
// l.z < |l.xy| * h(azimuth). The zenith is never shaded.
bool IsShaded(const ShadowWall &wall, const Direction &l);

struct ReflectionPoint {
    Direction direction;  // L_R, towards the reflecting point
    Direction normal;     // N_R
    Rgb albedo;           // rho_R
};

using ReflectionSet = std::vector<ReflectionPoint>;

inline constexpr int kReflectionCandidates = 5;

// Draws kReflectionCandidates directions on the upper hemisphere and keeps
// the shaded ones; reflectors share the pixel's material.
ReflectionSet SampleReflections(RandomStream &rng, const ShadowWall &wall,
                                int candidates = kReflectionCandidates);

// Single bounce l -> L_R -> viewer, summed over reflectors with L_R != l.
Rgb SelfReflection(const Direction &n, const Direction &l, const ReflectionSet &refl,
                   const Rgb &albedo, const PreparedMaterial &m);
Rgb SelfReflection(const Direction &n, const Direction &l, const ReflectionSet &refl,
                   const Rgb &albedo, const MaterialSpec &m, const MerlLibrary &library);

struct SubPixel {
    Direction normal;
    Rgb albedo;
};

// Mean over sub-pixels of shadow-gated direct reflectance plus self reflection.
Rgb TotalReflectance(std::span<const SubPixel> subpixels, const Direction &l,
                     const ShadowWall &wall, const ReflectionSet &refl,
                     const PreparedMaterial &m);
Rgb TotalReflectance(std::span<const SubPixel> subpixels, const Direction &l,
                     const ShadowWall &wall, const ReflectionSet &refl, const MaterialSpec &m,
                     const MerlLibrary &library);

inline constexpr double kQuantScale = 65536.0;
inline constexpr double kQuantMax = 65535.0 / 65536.0;

double Quantize16(double x);
Rgb Quantize16(const Rgb &x);

struct NoiseDraws {
    Rgb mult_uniform{1, 1, 1};
    Rgb mult_gauss{1, 1, 1};
    Rgb add_uniform{0, 0, 0};
    Rgb add_gauss{0, 0, 0};
};

struct NoiseParams {
    double mult_uniform_lo = 0.95;
    double mult_uniform_hi = 1.05;
    double mult_gauss_std = 1e-3;
    double add_uniform = 1e-4;  // half-width of the symmetric interval
    double add_gauss_std = 1e-4;
};

NoiseDraws SampleNoise(RandomStream &rng, const NoiseParams &params = {});

// Sensor model: D((r_T + a) * phi * n_MU * n_MG + n_AU + n_AG), negatives
// clamped to 0 first. With quantize off only the clamp at 0 is applied.
Rgb ComposeIntensity(const Rgb &reflectance, const Rgb &ambient, const Rgb &phi,
                     const NoiseDraws &noise, bool quantize = true);

// a = mean_k(rho_k * (N_k . V0)) * u, u ~ U(0, max_scale).
Rgb SampleAmbient(RandomStream &rng, std::span<const SubPixel> subpixels, double max_scale = 0.01);

}  // namespace pxmap

namespace pxmap {

// Everything needed to shade one synthetic pixel under arbitrary lights.
// Per-reflector terms that do not depend on the light are cached, so
// Reflectance(l) costs one BRDF evaluation per sub-pixel and per reflector.
class PixelModel {
  public:
    PixelModel(std::vector<SubPixel> subpixels, ShadowWall wall, ReflectionSet reflections,
               PreparedMaterial material);

    // Equals TotalReflectance(...) up to floating-point reassociation.
    Rgb Reflectance(const Direction &l) const;

    const std::vector<SubPixel> &subpixels() const { return subpixels_; }
    const ShadowWall &wall() const { return wall_; }
    const ReflectionSet &reflections() const { return reflections_; }

  private:
    std::vector<SubPixel> subpixels_;
    ShadowWall wall_;
    ReflectionSet reflections_;
    PreparedMaterial material_;
    std::vector<Rgb> reflector_to_view_;  // mean_k B(N_k, L_R, V0, rho_k)
    bool wall_empty_;
};

}  // namespace pxmap
