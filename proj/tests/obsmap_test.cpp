// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "pxmap/error.h"
#include "pxmap/obsmap.h"
#include "pxmap/random.h"

namespace pxmap {
namespace {

TEST(CellOf, CentreAndBoundaries) {
    EXPECT_EQ(CellOf(Vec3(0, 0, 1), 32), std::make_pair(16, 16));
    EXPECT_EQ(CellOf(Vec3(1, 0, 0), 32), std::make_pair(31, 16));
    EXPECT_EQ(CellOf(Vec3(-1, 0, 0), 32), std::make_pair(0, 16));
    EXPECT_EQ(CellOf(Vec3(0, 1, 0), 32), std::make_pair(16, 31));
    EXPECT_EQ(CellOf(Vec3(0, -1, 0), 32), std::make_pair(16, 0));
    // Just below a cell edge: x = -1 + 2k/d - eps.
    EXPECT_EQ(CellOf(Vec3(-1 + 2.0 * 5 / 32 - 1e-12, 0, 0), 32).first, 4);
    EXPECT_EQ(CellOf(Vec3(-1 + 2.0 * 5 / 32, 0, 0), 32).first, 5);
}

TEST(BuildMap, SingleLight) {
    LightSample s{Normalize(Vec3(0.3, -0.2, 1)), Rgb(2, 1, 0.5), Rgb(0.4, 0.3, 0.2)};
    ObservationMap m = BuildMap({&s, 1}, 32);
    auto [u, v] = CellOf(s.direction, 32);
    EXPECT_EQ(m.OccupiedCount(), 1);
    EXPECT_EQ(m.At(u, v, 0), 0.2);
    EXPECT_EQ(m.At(u, v, 1), 0.3);
    EXPECT_EQ(m.At(u, v, 2), 0.4);
    EXPECT_EQ(m.At(u, v, 3), 1.0);
    double total = 0;
    for (double x : m.grid()) total += x;
    EXPECT_DOUBLE_EQ(total, 0.2 + 0.3 + 0.4 + 1.0);
}

TEST(BuildMap, HandComputedTwoLights) {
    // Two lights in different cells, unit brightness.
    std::vector<LightSample> s = {{Vec3(0, 0, 1), Rgb(1), Rgb(0.6, 0.3, 0.3)},
                                  {Normalize(Vec3(0.8, 0, 0.6)), Rgb(1), Rgb(0.1, 0.1, 0.2)}};
    ObservationMap m = BuildMap(s, 8);
    EXPECT_EQ(m.At(4, 4, 3), 1.0);
    // x = 0.8: floor(8 * 1.8 / 2) = 7.
    EXPECT_DOUBLE_EQ(m.At(7, 4, 3), 0.4 / 1.2);
    EXPECT_EQ(m.At(7, 4, 2), 0.2);
}

TEST(BuildMap, LaterLightWinsCollision) {
    std::vector<LightSample> s = {{Vec3(0, 0, 1), Rgb(1), Rgb(0.9)},
                                  {Normalize(Vec3(0.001, 0, 1)), Rgb(1), Rgb(0.3)}};
    ObservationMap m = BuildMap(s, 32);
    EXPECT_EQ(m.OccupiedCount(), 1);
    EXPECT_EQ(m.At(16, 16, 0), 0.3);
    // The overwritten sample no longer sets the gray maximum.
    EXPECT_EQ(m.At(16, 16, 3), 1.0);
}

TEST(BuildMap, AllDarkHasZeroGray) {
    std::vector<LightSample> s = {{Vec3(0, 0, 1), Rgb(1), Rgb(0)}};
    ObservationMap m = BuildMap(s, 32);
    EXPECT_EQ(m.At(16, 16, 3), 0.0);
    EXPECT_EQ(m.OccupiedCount(), 1);
}

TEST(BuildMap, Errors) {
    EXPECT_THROW(BuildMap({}, 32), Error);
    std::vector<LightSample> s = {{Vec3(0, 0, 1), Rgb(1, 0, 1), Rgb(0.5)}};
    EXPECT_THROW(BuildMap(s, 32), Error);
}

TEST(RotatedVariant, ZeroAngleIsIdentity) {
    RandomStream rng(4);
    std::vector<LightSample> s(50);
    for (auto &x : s) {
        x.direction = SampleHemisphereUniform(rng, Radians(70));
        x.intensity = Rgb(rng.Uniform(), rng.Uniform(), rng.Uniform());
    }
    EXPECT_EQ(RotatedVariant(s, 0, 32), BuildMap(s, 32));
}

TEST(RotatedVariant, HalfTurnMirrorsCells) {
    // Rotation by pi maps (x, y) to (-x, -y); away from cell edges the cell
    // (u, v) goes to (d - 1 - u, d - 1 - v).
    LightSample s{Normalize(Vec3(0.33, 0.51, 0.8)), Rgb(1), Rgb(0.5)};
    ObservationMap a = BuildMap({&s, 1}, 32);
    ObservationMap b = RotatedVariant({&s, 1}, Pi, 32);
    auto [u, v] = CellOf(s.direction, 32);
    EXPECT_TRUE(a.Occupied(u, v));
    EXPECT_TRUE(b.Occupied(31 - u, 31 - v));
}

}  // namespace
}  // namespace pxmap
