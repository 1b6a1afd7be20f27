// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pxmap/geom.h"

namespace pxmap {

inline constexpr int kDefaultMapSize = 32;
inline constexpr int kMapChannels = 4;  // r, g, b (brightness compensated), normalized gray

// d x d x 4 observation map. Cell (u, v) is addressed by u from l.x and v
// from l.y; storage is row-major in (u, v) with the channels interleaved.
class ObservationMap {
  public:
    ObservationMap() = default;
    explicit ObservationMap(int d);

    int d() const { return d_; }
    size_t Offset(int u, int v) const { return (size_t(u) * d_ + v) * kMapChannels; }
    double At(int u, int v, int channel) const { return grid_[Offset(u, v) + channel]; }
    double &At(int u, int v, int channel) { return grid_[Offset(u, v) + channel]; }
    bool Occupied(int u, int v) const { return occupancy_[size_t(u) * d_ + v] != 0; }
    void SetOccupied(int u, int v) { occupancy_[size_t(u) * d_ + v] = 1; }
    int OccupiedCount() const;

    std::span<const double> grid() const { return grid_; }
    std::span<double> grid() { return grid_; }
    std::span<const uint8_t> occupancy() const { return occupancy_; }

    // Largest value over all cells of the rgb channels.
    double MaxRgb() const;

    bool operator==(const ObservationMap &) const = default;

  private:
    int d_ = 0;
    std::vector<double> grid_;
    std::vector<uint8_t> occupancy_;
};

struct LightSample {
    Direction direction;
    Rgb phi{1, 1, 1};  // per-channel brightness, > 0
    Rgb intensity;
};

// Grid cell of a light direction, clamped to [0, d-1] so that l.x = 1 or
// l.y = 1 stays in range.
std::pair<int, int> CellOf(const Direction &l, int d);

// Builds O = [O_rgb; O_n]. When two lights share a cell the later one in
// input order wins; the gray normalization uses the max over the lights
// that survive collisions, so max O_n is 1 whenever any light is lit.
ObservationMap BuildMap(std::span<const LightSample> samples, int d = kDefaultMapSize);

// BuildMap with every light direction rotated about z by theta.
ObservationMap RotatedVariant(std::span<const LightSample> samples, double theta,
                              int d = kDefaultMapSize);

}  // namespace pxmap
