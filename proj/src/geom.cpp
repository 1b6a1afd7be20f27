// SPDX-License-Identifier: Apache-2.0

#include "pxmap/geom.h"

#include <algorithm>

#include "pxmap/random.h"

namespace pxmap {

Direction SampleHemisphereUniform(RandomStream &rng, double max_elevation) {
    double z_min = std::cos(max_elevation);
    double z = rng.Uniform(z_min, 1.0);
    double phi = rng.Uniform(0.0, 2 * Pi);
    double s = std::sqrt(std::max(0.0, 1 - z * z));
    return {s * std::cos(phi), s * std::sin(phi), z};
}

Direction RotateAboutZ(const Direction &d, double theta) {
    double c = std::cos(theta), s = std::sin(theta);
    return {c * d.x - s * d.y, s * d.x + c * d.y, d.z};
}

double AngularErrorDeg(const Direction &pred, const Direction &truth) {
    return std::abs(Degrees(std::atan2(Length(Cross(truth, pred)), Dot(truth, pred))));
}

void CoordinateSystem(const Vec3 &n, Vec3 *t, Vec3 *b) {
    double sign = std::copysign(1.0, n.z);
    double a = -1 / (sign + n.z);
    double c = n.x * n.y * a;
    *t = Vec3(1 + sign * n.x * n.x * a, sign * c, -sign * n.x);
    *b = Vec3(c, sign + n.y * n.y * a, -n.y);
}

}  // namespace pxmap
