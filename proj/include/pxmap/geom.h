// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <numbers>

namespace pxmap {

class RandomStream;

inline constexpr double Pi = std::numbers::pi;

inline constexpr double Radians(double deg) { return deg * (Pi / 180.0); }
inline constexpr double Degrees(double rad) { return rad * (180.0 / Pi); }

// Plain 3-vector. Used both for unit directions (normals, lights, view)
// and for intermediate sums; unit length is the caller's invariant.
struct Vec3 {
    double x = 0, y = 0, z = 0;

    constexpr Vec3() = default;
    constexpr Vec3(double x, double y, double z) : x(x), y(y), z(z) {}

    constexpr Vec3 operator+(const Vec3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 &operator+=(const Vec3 &o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    constexpr bool operator==(const Vec3 &) const = default;
};

using Direction = Vec3;

inline constexpr Vec3 operator*(double s, const Vec3 &v) { return v * s; }
inline constexpr double Dot(const Vec3 &a, const Vec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline constexpr Vec3 Cross(const Vec3 &a, const Vec3 &b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double Length(const Vec3 &v) { return std::sqrt(Dot(v, v)); }
inline Vec3 Normalize(const Vec3 &v) { return v / Length(v); }

// Orthographic viewer.
inline constexpr Direction kViewDir{0, 0, 1};

// Linear radiometric triple, 1.0 = sensor saturation.
struct Rgb {
    double r = 0, g = 0, b = 0;

    constexpr Rgb() = default;
    constexpr explicit Rgb(double v) : r(v), g(v), b(v) {}
    constexpr Rgb(double r, double g, double b) : r(r), g(g), b(b) {}

    constexpr double operator[](int c) const { return c == 0 ? r : (c == 1 ? g : b); }
    double &operator[](int c) { return c == 0 ? r : (c == 1 ? g : b); }

    constexpr Rgb operator+(const Rgb &o) const { return {r + o.r, g + o.g, b + o.b}; }
    constexpr Rgb operator-(const Rgb &o) const { return {r - o.r, g - o.g, b - o.b}; }
    constexpr Rgb operator*(const Rgb &o) const { return {r * o.r, g * o.g, b * o.b}; }
    constexpr Rgb operator/(const Rgb &o) const { return {r / o.r, g / o.g, b / o.b}; }
    constexpr Rgb operator*(double s) const { return {r * s, g * s, b * s}; }
    constexpr Rgb operator/(double s) const { return {r / s, g / s, b / s}; }
    Rgb &operator+=(const Rgb &o) {
        r += o.r;
        g += o.g;
        b += o.b;
        return *this;
    }
    constexpr bool operator==(const Rgb &) const = default;

    constexpr double Sum() const { return r + g + b; }
    constexpr double MaxComponent() const { return r > g ? (r > b ? r : b) : (g > b ? g : b); }
    bool IsBlack() const { return r == 0 && g == 0 && b == 0; }
};

inline constexpr Rgb operator*(double s, const Rgb &c) { return c * s; }

// Uniform with respect to solid angle on the cap {z >= cos(max_elevation)}.
// max_elevation is measured from the zenith.
Direction SampleHemisphereUniform(RandomStream &rng, double max_elevation = Pi / 2);

Direction RotateAboutZ(const Direction &d, double theta);

// Angle between two unit vectors in degrees, via atan2 for accuracy near 0.
double AngularErrorDeg(const Direction &pred, const Direction &truth);

// Builds an orthonormal tangent frame around n (Duff et al. branchless ONB).
void CoordinateSystem(const Vec3 &n, Vec3 *t, Vec3 *b);

}  // namespace pxmap
