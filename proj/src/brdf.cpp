// SPDX-License-Identifier: Apache-2.0

#include "pxmap/brdf.h"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "pxmap/binary_io.h"
#include "pxmap/error.h"

namespace pxmap {

namespace {

inline double Sqr(double x) { return x * x; }
inline double Lerp(double t, double a, double b) { return (1 - t) * a + t * b; }
inline Rgb Lerp(double t, const Rgb &a, const Rgb &b) { return a * (1 - t) + b * t; }

inline double SchlickWeight(double cos_theta) {
    double m = std::clamp(1 - cos_theta, 0.0, 1.0);
    return (m * m) * (m * m) * m;
}

// Trowbridge-Reitz (GTR2) normal distribution.
inline double Gtr2(double n_dot_h, double alpha) {
    double a2 = alpha * alpha;
    double t = 1 + (a2 - 1) * n_dot_h * n_dot_h;
    return a2 / (Pi * t * t);
}

// GTR1 (Berry) distribution for the clearcoat lobe; log(alpha^2) is passed
// in so it can be hoisted out of per-light loops.
inline double Gtr1(double n_dot_h, double alpha, double log_a2) {
    if (alpha >= 1) return 1 / Pi;
    double a2 = alpha * alpha;
    double t = 1 + (a2 - 1) * n_dot_h * n_dot_h;
    return (a2 - 1) / (Pi * log_a2 * t);
}

// Separable Smith GGX term, already divided by 4 (n.l)(n.v) when paired.
inline double SmithGGX(double n_dot_v, double alpha) {
    double a = alpha * alpha;
    double b = n_dot_v * n_dot_v;
    return 1 / (n_dot_v + std::sqrt(a + b - a * b));
}

double SpecularAlpha(const DisneyParams &p) { return std::max(0.001, Sqr(p.roughness)); }
double ClearcoatAlpha(const DisneyParams &p) {
    return Lerp(1 - p.clearcoatRoughness, 0.1, 0.001);
}

// Isotropic principled BRDF without subsurface. Returns f(l, v) (no cosine).
Rgb DisneyBrdf(double n_dot_l, double n_dot_v, double n_dot_h, double l_dot_h,
               const Rgb &base_color, const DisneyParams &p, double spec_alpha,
               double clearcoat_alpha, double clearcoat_log) {
    double lum = 0.3 * base_color.r + 0.6 * base_color.g + 0.1 * base_color.b;
    Rgb tint = lum > 0 ? base_color / lum : Rgb(1);
    Rgb spec0 = Lerp(p.metallic, p.specular * 0.08 * Lerp(p.specularTint, Rgb(1), tint), base_color);
    Rgb sheen_color = Lerp(p.sheenTint, Rgb(1), tint);

    double fl = SchlickWeight(n_dot_l), fv = SchlickWeight(n_dot_v);
    double fd90 = 0.5 + 2 * l_dot_h * l_dot_h * p.roughness;
    double fd = Lerp(fl, 1.0, fd90) * Lerp(fv, 1.0, fd90);

    double ds = Gtr2(n_dot_h, spec_alpha);
    double fh = SchlickWeight(l_dot_h);
    Rgb fs = Lerp(fh, spec0, Rgb(1));
    double gs = SmithGGX(n_dot_l, spec_alpha) * SmithGGX(n_dot_v, spec_alpha);

    Rgb sheen = sheen_color * (fh * p.sheen);

    double dr = Gtr1(n_dot_h, clearcoat_alpha, clearcoat_log);
    double fr = Lerp(fh, 0.04, 1.0);
    double gr = SmithGGX(n_dot_l, 0.25) * SmithGGX(n_dot_v, 0.25);

    return (base_color * (fd / Pi) + sheen) * (1 - p.metallic) + fs * (gs * ds) +
           Rgb(0.25 * p.clearcoat * gr * fr * dr);
}

Rgb EvalDisneyImpl(const Direction &n, const Direction &l, const Direction &v, const Rgb &albedo,
                   const DisneyParams &p, double spec_alpha, double clearcoat_alpha,
                   double clearcoat_log) {
    double n_dot_l = Dot(n, l), n_dot_v = Dot(n, v);
    if (n_dot_l <= 0 || n_dot_v <= 0) return {};
    Vec3 h = Normalize(l + v);
    double n_dot_h = Dot(n, h), l_dot_h = Dot(l, h);
    return DisneyBrdf(n_dot_l, n_dot_v, n_dot_h, l_dot_h, albedo, p, spec_alpha, clearcoat_alpha,
                      clearcoat_log) *
           n_dot_l;
}

bool InUnit(double x) { return x >= 0 && x <= 1; }

}  // namespace

bool DisneyParams::IsValid() const {
    return InUnit(metallic) && InUnit(specular) && InUnit(roughness) && InUnit(specularTint) &&
           InUnit(sheen) && InUnit(sheenTint) && InUnit(clearcoat) && InUnit(clearcoatRoughness);
}

Rgb EvalLambertian(const Direction &n, const Direction &l, const Rgb &albedo) {
    return albedo * std::max(Dot(n, l), 0.0);
}

Rgb EvalDisney(const Direction &n, const Direction &l, const Direction &v, const Rgb &albedo,
               const DisneyParams &p) {
    double cc_alpha = ClearcoatAlpha(p);
    return EvalDisneyImpl(n, l, v, albedo, p, SpecularAlpha(p), cc_alpha,
                          std::log(cc_alpha * cc_alpha));
}

///////////////////////////////////////////////////////////////////////////
// MERL

MerlTable::MerlTable(std::string name, std::vector<double> data)
    : name_(std::move(name)), data_(std::move(data)) {
    if (data_.size() != 3 * kEntries)
        throw Error(Errc::DimensionMismatch, "MERL table needs " + std::to_string(3 * kEntries) +
                                                 " values, got " + std::to_string(data_.size()));
}

// Square-root warp: bins are denser near the specular peak.
int MerlTable::ThetaHalfIndex(double theta_half) {
    if (theta_half <= 0) return 0;
    double deg_idx = theta_half / (Pi / 2) * kThetaHalfRes;
    int idx = int(std::sqrt(deg_idx * kThetaHalfRes));
    return std::clamp(idx, 0, kThetaHalfRes - 1);
}

int MerlTable::ThetaDiffIndex(double theta_diff) {
    int idx = int(theta_diff / (Pi / 2) * kThetaDiffRes);
    return std::clamp(idx, 0, kThetaDiffRes - 1);
}

// Reciprocity folds phi_d onto [0, pi).
int MerlTable::PhiDiffIndex(double phi_diff) {
    double phi = std::fmod(phi_diff, Pi);
    if (phi < 0) phi += Pi;
    int idx = int(phi / Pi * kPhiDiffRes);
    return std::clamp(idx, 0, kPhiDiffRes - 1);
}

Rgb MerlTable::Lookup(size_t index) const {
    return {std::max(0.0, data_[index] * kRedScale),
            std::max(0.0, data_[index + kEntries] * kGreenScale),
            std::max(0.0, data_[index + 2 * kEntries] * kBlueScale)};
}

Rgb MerlTable::EvalLocal(const Vec3 &wi, const Vec3 &wo) const {
    Vec3 h = Normalize(wi + wo);
    double theta_h = std::acos(std::clamp(h.z, -1.0, 1.0));
    double phi_h = std::atan2(h.y, h.x);

    // Rotate wi so the half vector becomes the pole: first -phi_h about z,
    // then -theta_h about y.
    double cp = std::cos(phi_h), sp = std::sin(phi_h);
    Vec3 t(wi.x * cp + wi.y * sp, -wi.x * sp + wi.y * cp, wi.z);
    double ct = std::cos(theta_h), st = std::sin(theta_h);
    Vec3 diff(t.x * ct - t.z * st, t.y, t.x * st + t.z * ct);

    double theta_d = std::acos(std::clamp(diff.z, -1.0, 1.0));
    double phi_d = std::atan2(diff.y, diff.x);
    return Lookup(Index(ThetaHalfIndex(theta_h), ThetaDiffIndex(theta_d), PhiDiffIndex(phi_d)));
}

MerlTable LoadMerl(std::istream &in, std::string name) {
    int32_t dims[3];
    for (int32_t &d : dims)
        if (!ReadLE(in, &d)) throw Error(Errc::TruncatedFile, "MERL header is incomplete");
    if (dims[0] != MerlTable::kThetaHalfRes || dims[1] != MerlTable::kThetaDiffRes ||
        dims[2] != MerlTable::kPhiDiffRes)
        throw Error(Errc::DimensionMismatch,
                    "MERL header (" + std::to_string(dims[0]) + "," + std::to_string(dims[1]) +
                        "," + std::to_string(dims[2]) + ") != (90,90,180)");
    std::vector<double> data(3 * MerlTable::kEntries);
    if (!ReadArrayLE(in, std::span<double>(data)))
        throw Error(Errc::TruncatedFile, "MERL payload is shorter than 3*90*90*180 doubles");
    return MerlTable(std::move(name), std::move(data));
}

MerlTable LoadMerlFile(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoFailure, "cannot open " + path);
    return LoadMerl(in, std::filesystem::path(path).stem().string());
}

void WriteMerl(std::ostream &out, const MerlTable &table) {
    WriteLE<int32_t>(out, MerlTable::kThetaHalfRes);
    WriteLE<int32_t>(out, MerlTable::kThetaDiffRes);
    WriteLE<int32_t>(out, MerlTable::kPhiDiffRes);
    WriteArrayLE(out, std::span<const double>(table.raw()));
    if (!out) throw Error(Errc::IoFailure, "failed writing MERL table");
}

const MerlTable &MerlLibrary::Get(size_t id) const {
    if (id >= tables_.size())
        throw Error(Errc::UnknownMaterial, "MERL table id " + std::to_string(id) + " of " +
                                               std::to_string(tables_.size()));
    return *tables_[id];
}

MerlLibrary LoadMerlDirectory(const std::string &dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw Error(Errc::IoFailure, "not a directory: " + dir);
    std::vector<fs::path> files;
    for (const auto &entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".binary")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    MerlLibrary lib;
    for (const auto &f : files)
        lib.Add(std::make_shared<const MerlTable>(LoadMerlFile(f.string())));
    return lib;
}

Rgb EvalMerl(const MerlTable &t, const Direction &n, const Direction &l, const Direction &v) {
    double n_dot_l = Dot(n, l), n_dot_v = Dot(n, v);
    if (n_dot_l <= 0 || n_dot_v <= 0) return {};
    Vec3 s, b;
    CoordinateSystem(n, &s, &b);
    Vec3 wi(Dot(l, s), Dot(l, b), n_dot_l);
    Vec3 wo(Dot(v, s), Dot(v, b), n_dot_v);
    return t.EvalLocal(wi, wo) * n_dot_l;
}

///////////////////////////////////////////////////////////////////////////
// Material dispatch

Rgb EvalMaterial(const Direction &n, const Direction &l, const Direction &v, const Rgb &albedo,
                 const MaterialSpec &m, const MerlLibrary &library) {
    return PreparedMaterial(m, library).Eval(n, l, v, albedo);
}

PreparedMaterial::PreparedMaterial(const MaterialSpec &m, const MerlLibrary &library) {
    if (const auto *d = std::get_if<DisneyParams>(&m)) {
        kind_ = Kind::Disney;
        disney_ = *d;
        spec_alpha_ = SpecularAlpha(*d);
        clearcoat_alpha_ = ClearcoatAlpha(*d);
        clearcoat_log_ = std::log(clearcoat_alpha_ * clearcoat_alpha_);
    } else if (const auto *mm = std::get_if<MerlMix>(&m)) {
        kind_ = Kind::Merl;
        table_ = &library.Get(mm->table_id);
        w_ = mm->w;
    } else {
        kind_ = Kind::Lambertian;
    }
}

Rgb PreparedMaterial::Eval(const Direction &n, const Direction &l, const Direction &v,
                           const Rgb &albedo) const {
    switch (kind_) {
    case Kind::Disney:
        return EvalDisneyImpl(n, l, v, albedo, disney_, spec_alpha_, clearcoat_alpha_,
                              clearcoat_log_);
    case Kind::Merl: {
        Rgb measured = w_ > 0 ? EvalMerl(*table_, n, l, v) : Rgb();
        return albedo * (measured * w_ + Rgb(std::max(Dot(n, l), 0.0) * (1 - w_)));
    }
    case Kind::Lambertian:
        break;
    }
    return EvalLambertian(n, l, albedo);
}

}  // namespace pxmap
