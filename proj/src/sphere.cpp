// SPDX-License-Identifier: Apache-2.0

#include "pxmap/error.h"
#include "pxmap/pstereo.h"
#include "pxmap/random.h"

namespace pxmap {

std::optional<Direction> SphereNormal(int row, int col, int resolution) {
    double radius = resolution / 2.0;
    double centre = (resolution - 1) / 2.0;
    double x = (col - centre) / radius;
    double y = (centre - row) / radius;
    double r2 = x * x + y * y;
    if (r2 >= 1) return std::nullopt;
    return Direction(x, y, std::sqrt(1 - r2));
}

SphereRender RenderSphere(const MaterialSpec &material, const Rgb &albedo,
                          const std::vector<Light> &lights, int resolution,
                          const EffectsConfig &effects, uint64_t seed,
                          const MerlLibrary &library) {
    if (resolution < 8) throw Error(Errc::ConfigInvalid, "sphere resolution must be >= 8");
    if (lights.empty()) throw Error(Errc::EmptyInput, "sphere rendering needs lights");

    SphereRender out{ImageStack(resolution, resolution, lights), NormalMap(resolution, resolution)};
    for (int r = 0; r < resolution; ++r) {
        for (int c = 0; c < resolution; ++c) {
            size_t p = out.stack.PixelIndex(r, c);
            std::optional<Direction> n = SphereNormal(r, c, resolution);
            if (!n) {
                out.stack.mask()[p] = 0;
                continue;
            }
            RandomStream rng(DeriveSeed({seed, uint64_t(p)}));
            PixelDraw pixel = SamplePixelEffects(rng, *n, albedo, material, library, effects);
            for (size_t j = 0; j < lights.size(); ++j)
                out.stack.image(int(j))[p] = PixelIntensity(
                    rng, pixel, lights[j].direction, lights[j].brightness, effects);
            out.truth.Set(r, c, *n);
        }
    }
    return out;
}

}  // namespace pxmap
