// SPDX-License-Identifier: Apache-2.0

#include "pxmap/effects.h"

#include <algorithm>
#include <cmath>

#include "pxmap/error.h"
#include "pxmap/random.h"

namespace pxmap {

ShadowWall::ShadowWall(std::vector<double> heights) : heights_(std::move(heights)) {
    if (heights_.empty()) throw Error(Errc::ConfigInvalid, "shadow wall needs at least one knot");
    for (double h : heights_)
        if (!(h >= 0) || !std::isfinite(h))
            throw Error(Errc::ConfigInvalid, "shadow wall heights must be finite and >= 0");
}

bool ShadowWall::IsEmpty() const {
    return std::all_of(heights_.begin(), heights_.end(), [](double h) { return h == 0; });
}

double ShadowWall::HeightAt(double azimuth) const {
    int k = knots();
    double phi = std::fmod(azimuth, 2 * Pi);
    if (phi < 0) phi += 2 * Pi;
    double pos = phi / (2 * Pi) * k;
    int i0 = std::min(int(pos), k - 1);
    int i1 = (i0 + 1) % k;
    double frac = pos - i0;
    return heights_[i0] * (1 - frac) + heights_[i1] * frac;
}

ShadowWall SampleShadowWall(RandomStream &rng, const ShadowWallParams &params) {
    std::vector<double> heights(params.knots, 0.0);
    if (rng.Bernoulli(params.p_empty)) return ShadowWall(std::move(heights));
    for (double &h : heights) {
        h = std::abs(rng.Normal(0.0, params.sigma));
        if (rng.Bernoulli(params.p_zero_height)) h = 0;
    }
    return ShadowWall(std::move(heights));
}

bool IsShaded(const ShadowWall &wall, const Direction &l) {
    double s = std::sqrt(l.x * l.x + l.y * l.y);
    if (s == 0) return false;
    return l.z < s * wall.HeightAt(std::atan2(l.y, l.x));
}

ReflectionSet SampleReflections(RandomStream &rng, const ShadowWall &wall, int candidates) {
    ReflectionSet set;
    for (int i = 0; i < candidates; ++i) {
        Direction dir = SampleHemisphereUniform(rng);
        if (!IsShaded(wall, dir)) continue;
        ReflectionPoint p;
        p.direction = dir;
        p.normal = SampleHemisphereUniform(rng);
        p.albedo = Rgb(rng.Uniform(), rng.Uniform(), rng.Uniform());
        set.push_back(p);
    }
    return set;
}

Rgb SelfReflection(const Direction &n, const Direction &l, const ReflectionSet &refl,
                   const Rgb &albedo, const PreparedMaterial &m) {
    Rgb sum;
    for (const ReflectionPoint &p : refl) {
        if (p.direction == l) continue;
        Rgb incoming = m.Eval(p.normal, l, p.direction, p.albedo);
        if (incoming.IsBlack()) continue;
        sum += incoming * m.Eval(n, p.direction, kViewDir, albedo);
    }
    return sum;
}

Rgb SelfReflection(const Direction &n, const Direction &l, const ReflectionSet &refl,
                   const Rgb &albedo, const MaterialSpec &m, const MerlLibrary &library) {
    return SelfReflection(n, l, refl, albedo, PreparedMaterial(m, library));
}

Rgb TotalReflectance(std::span<const SubPixel> subpixels, const Direction &l,
                     const ShadowWall &wall, const ReflectionSet &refl,
                     const PreparedMaterial &m) {
    if (subpixels.empty()) throw Error(Errc::EmptyInput, "TotalReflectance needs sub-pixels");
    double visible = IsShaded(wall, l) ? 0.0 : 1.0;
    Rgb sum;
    for (const SubPixel &sp : subpixels) {
        sum += m.Eval(sp.normal, l, kViewDir, sp.albedo) * visible;
        sum += SelfReflection(sp.normal, l, refl, sp.albedo, m);
    }
    return sum / double(subpixels.size());
}

Rgb TotalReflectance(std::span<const SubPixel> subpixels, const Direction &l,
                     const ShadowWall &wall, const ReflectionSet &refl, const MaterialSpec &m,
                     const MerlLibrary &library) {
    return TotalReflectance(subpixels, l, wall, refl, PreparedMaterial(m, library));
}

double Quantize16(double x) {
    double c = std::clamp(x, 0.0, kQuantMax);
    return std::floor(c * kQuantScale) / kQuantScale;
}

Rgb Quantize16(const Rgb &x) { return {Quantize16(x.r), Quantize16(x.g), Quantize16(x.b)}; }

NoiseDraws SampleNoise(RandomStream &rng, const NoiseParams &params) {
    NoiseDraws n;
    for (int c = 0; c < 3; ++c) {
        n.mult_uniform[c] = rng.Uniform(params.mult_uniform_lo, params.mult_uniform_hi);
        n.mult_gauss[c] = rng.Normal(1.0, params.mult_gauss_std);
        n.add_uniform[c] = rng.Uniform(-params.add_uniform, params.add_uniform);
        n.add_gauss[c] = rng.Normal(0.0, params.add_gauss_std);
    }
    return n;
}

Rgb ComposeIntensity(const Rgb &reflectance, const Rgb &ambient, const Rgb &phi,
                     const NoiseDraws &noise, bool quantize) {
    Rgb raw = (reflectance + ambient) * phi * noise.mult_uniform * noise.mult_gauss +
              noise.add_uniform + noise.add_gauss;
    Rgb clamped(std::max(raw.r, 0.0), std::max(raw.g, 0.0), std::max(raw.b, 0.0));
    return quantize ? Quantize16(clamped) : clamped;
}

Rgb SampleAmbient(RandomStream &rng, std::span<const SubPixel> subpixels, double max_scale) {
    Rgb base;
    for (const SubPixel &sp : subpixels)
        base += sp.albedo * std::max(Dot(sp.normal, kViewDir), 0.0);
    base = base / double(subpixels.size());
    return base * rng.Uniform(0.0, max_scale);
}

PixelModel::PixelModel(std::vector<SubPixel> subpixels, ShadowWall wall,
                       ReflectionSet reflections, PreparedMaterial material)
    : subpixels_(std::move(subpixels)),
      wall_(std::move(wall)),
      reflections_(std::move(reflections)),
      material_(material),
      wall_empty_(wall_.IsEmpty()) {
    if (subpixels_.empty()) throw Error(Errc::EmptyInput, "PixelModel needs sub-pixels");
    double inv_t = 1.0 / double(subpixels_.size());
    reflector_to_view_.reserve(reflections_.size());
    for (const ReflectionPoint &p : reflections_) {
        Rgb sum;
        for (const SubPixel &sp : subpixels_)
            sum += material_.Eval(sp.normal, p.direction, kViewDir, sp.albedo);
        reflector_to_view_.push_back(sum * inv_t);
    }
}

Rgb PixelModel::Reflectance(const Direction &l) const {
    Rgb direct;
    if (wall_empty_ || !IsShaded(wall_, l)) {
        for (const SubPixel &sp : subpixels_) direct += material_.Eval(sp.normal, l, kViewDir, sp.albedo);
        direct = direct / double(subpixels_.size());
    }
    for (size_t r = 0; r < reflections_.size(); ++r) {
        const ReflectionPoint &p = reflections_[r];
        if (p.direction == l || reflector_to_view_[r].IsBlack()) continue;
        direct += material_.Eval(p.normal, l, p.direction, p.albedo) * reflector_to_view_[r];
    }
    return direct;
}

}  // namespace pxmap
