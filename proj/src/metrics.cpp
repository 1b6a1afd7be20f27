// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>

#include "pxmap/error.h"
#include "pxmap/pstereo.h"

namespace pxmap {

namespace {

// Linear interpolation between order statistics.
double Percentile(const std::vector<double> &sorted, double pct) {
    double pos = pct / 100.0 * double(sorted.size() - 1);
    size_t lo = size_t(std::floor(pos));
    size_t hi = std::min(lo + 1, sorted.size() - 1);
    double frac = pos - double(lo);
    return sorted[lo] * (1 - frac) + sorted[hi] * frac;
}

}  // namespace

Evaluation Evaluate(const NormalMap &pred, const NormalMap &truth) {
    if (pred.height() != truth.height() || pred.width() != truth.width())
        throw Error(Errc::DimensionMismatch, "normal maps differ in size");

    Evaluation ev;
    ev.height = truth.height();
    ev.width = truth.width();
    ev.error_map.assign(size_t(ev.height) * ev.width, std::numeric_limits<double>::quiet_NaN());
    std::vector<double> errors;
    double sum = 0;
    for (int r = 0; r < ev.height; ++r)
        for (int c = 0; c < ev.width; ++c) {
            if (!pred.Valid(r, c) || !truth.Valid(r, c)) continue;
            double e = AngularErrorDeg(pred.At(r, c), truth.At(r, c));
            ev.error_map[truth.PixelIndex(r, c)] = e;
            errors.push_back(e);
            sum += e;
        }
    if (errors.empty()) throw Error(Errc::EmptyIntersection, "masks do not overlap");

    ev.pixels = errors.size();
    ev.mean_deg = sum / double(errors.size());
    std::sort(errors.begin(), errors.end());
    ev.median_deg = Percentile(errors, 50);
    for (double pct : {25.0, 50.0, 75.0, 90.0, 95.0, 99.0})
        ev.percentiles.emplace_back(pct, Percentile(errors, pct));
    return ev;
}

}  // namespace pxmap
