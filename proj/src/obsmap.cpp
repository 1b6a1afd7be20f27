// SPDX-License-Identifier: Apache-2.0

#include "pxmap/obsmap.h"

#include <algorithm>
#include <cmath>

#include "pxmap/error.h"

namespace pxmap {

ObservationMap::ObservationMap(int d)
    : d_(d), grid_(size_t(d) * d * kMapChannels, 0.0), occupancy_(size_t(d) * d, 0) {
    if (d < 1) throw Error(Errc::ConfigInvalid, "observation map size must be >= 1");
}

int ObservationMap::OccupiedCount() const {
    return int(std::count(occupancy_.begin(), occupancy_.end(), uint8_t(1)));
}

double ObservationMap::MaxRgb() const {
    double m = 0;
    for (size_t i = 0; i < grid_.size(); i += kMapChannels)
        m = std::max({m, grid_[i], grid_[i + 1], grid_[i + 2]});
    return m;
}

std::pair<int, int> CellOf(const Direction &l, int d) {
    auto index = [d](double c) {
        int i = int(std::floor(d * (c + 1) / 2));
        return std::clamp(i, 0, d - 1);
    };
    return {index(l.x), index(l.y)};
}

ObservationMap BuildMap(std::span<const LightSample> samples, int d) {
    if (samples.empty()) throw Error(Errc::EmptyInput, "observation map needs at least one light");
    ObservationMap map(d);

    // Resolve collisions first so the gray maximum is taken over the lights
    // that actually appear in the map.
    std::vector<int> winner(size_t(d) * d, -1);
    for (size_t j = 0; j < samples.size(); ++j) {
        const Rgb &phi = samples[j].phi;
        if (!(phi.r > 0 && phi.g > 0 && phi.b > 0))
            throw Error(Errc::ConfigInvalid, "light brightness must be positive");
        auto [u, v] = CellOf(samples[j].direction, d);
        winner[size_t(u) * d + v] = int(j);
    }

    double max_gray = 0;
    for (int j : winner)
        if (j >= 0) max_gray = std::max(max_gray, (samples[j].intensity / samples[j].phi).Sum());

    for (int u = 0; u < d; ++u) {
        for (int v = 0; v < d; ++v) {
            int j = winner[size_t(u) * d + v];
            if (j < 0) continue;
            Rgb comp = samples[j].intensity / samples[j].phi;
            map.At(u, v, 0) = comp.r;
            map.At(u, v, 1) = comp.g;
            map.At(u, v, 2) = comp.b;
            map.At(u, v, 3) = max_gray > 0 ? comp.Sum() / max_gray : 0.0;
            map.SetOccupied(u, v);
        }
    }
    return map;
}

ObservationMap RotatedVariant(std::span<const LightSample> samples, double theta, int d) {
    std::vector<LightSample> rotated(samples.begin(), samples.end());
    for (LightSample &s : rotated) s.direction = RotateAboutZ(s.direction, theta);
    return BuildMap(rotated, d);
}

}  // namespace pxmap
