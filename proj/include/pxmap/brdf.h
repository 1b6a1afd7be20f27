// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <istream>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "pxmap/geom.h"

namespace pxmap {

// Isotropic principled BRDF parameters, all in [0, 1]. Subsurface is fixed
// at 0 and the clearcoat IOR at 1.5.
struct DisneyParams {
    double metallic = 0;
    double specular = 0.5;
    double roughness = 0.5;
    double specularTint = 0;
    double sheen = 0;
    double sheenTint = 0.5;
    double clearcoat = 0;
    double clearcoatRoughness = 0.5;

    bool IsValid() const;
};

// MERL measured BRDF in the half/difference-angle parameterization.
class MerlTable {
  public:
    static constexpr int kThetaHalfRes = 90;
    static constexpr int kThetaDiffRes = 90;
    static constexpr int kPhiDiffRes = 180;
    static constexpr size_t kEntries = size_t(kThetaHalfRes) * kThetaDiffRes * kPhiDiffRes;
    static constexpr double kRedScale = 1.0 / 1500.0;
    static constexpr double kGreenScale = 1.15 / 1500.0;
    static constexpr double kBlueScale = 1.66 / 1500.0;

    MerlTable(std::string name, std::vector<double> data);

    const std::string &name() const { return name_; }
    // Raw (unscaled) values, channel-major: R block, G block, B block.
    const std::vector<double> &raw() const { return data_; }

    static size_t Index(int theta_half_idx, int theta_diff_idx, int phi_diff_idx) {
        return size_t(phi_diff_idx) + size_t(theta_diff_idx) * kPhiDiffRes +
               size_t(theta_half_idx) * kPhiDiffRes * kThetaDiffRes;
    }
    static int ThetaHalfIndex(double theta_half);
    static int ThetaDiffIndex(double theta_diff);
    static int PhiDiffIndex(double phi_diff);

    // Scaled BRDF value at a bin; invalid (negative) bins read as 0.
    Rgb Lookup(size_t index) const;
    // BRDF value (no cosine) for directions in the local frame (normal = +z).
    Rgb EvalLocal(const Vec3 &wi, const Vec3 &wo) const;

  private:
    std::string name_;
    std::vector<double> data_;
};

// Reads the MERL ".binary" layout: three 32-bit LE ints, then 3 * 90*90*180
// 64-bit LE doubles.
MerlTable LoadMerl(std::istream &in, std::string name = {});
MerlTable LoadMerlFile(const std::string &path);
void WriteMerl(std::ostream &out, const MerlTable &table);

// Loaded measured materials, addressed by index.
class MerlLibrary {
  public:
    MerlLibrary() = default;
    void Add(std::shared_ptr<const MerlTable> table) { tables_.push_back(std::move(table)); }
    size_t size() const { return tables_.size(); }
    bool empty() const { return tables_.empty(); }
    // Throws Errc::UnknownMaterial when id is out of range.
    const MerlTable &Get(size_t id) const;

  private:
    std::vector<std::shared_ptr<const MerlTable>> tables_;
};

// Loads every *.binary file of a directory in lexicographic order.
MerlLibrary LoadMerlDirectory(const std::string &dir);

struct Lambertian {};

struct MerlMix {
    size_t table_id = 0;
    double w = 1;
};

using MaterialSpec = std::variant<DisneyParams, MerlMix, Lambertian>;

// Every evaluator returns the BRDF already multiplied by max(n.l, 0).
Rgb EvalLambertian(const Direction &n, const Direction &l, const Rgb &albedo);
Rgb EvalDisney(const Direction &n, const Direction &l, const Direction &v, const Rgb &albedo,
               const DisneyParams &p);
Rgb EvalMerl(const MerlTable &t, const Direction &n, const Direction &l, const Direction &v);
// Direct reflectance for any material family. Lambertian ignores the library.
Rgb EvalMaterial(const Direction &n, const Direction &l, const Direction &v, const Rgb &albedo,
                 const MaterialSpec &m, const MerlLibrary &library);

// A material with its per-material constants resolved once. Hot loops in
// data generation evaluate this instead of EvalMaterial.
class PreparedMaterial {
  public:
    PreparedMaterial(const MaterialSpec &m, const MerlLibrary &library);

    Rgb Eval(const Direction &n, const Direction &l, const Direction &v, const Rgb &albedo) const;

  private:
    enum class Kind { Disney, Merl, Lambertian } kind_;
    DisneyParams disney_{};
    double spec_alpha_ = 0, clearcoat_alpha_ = 0, clearcoat_log_ = 0;
    const MerlTable *table_ = nullptr;
    double w_ = 0;
};

}  // namespace pxmap
