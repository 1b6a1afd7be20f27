// SPDX-License-Identifier: Apache-2.0

// pxmap: synthetic observation-map data generation and photometric stereo
// utilities.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "pxmap/brdf.h"
#include "pxmap/datagen.h"
#include "pxmap/error.h"
#include "pxmap/png_io.h"
#include "pxmap/pstereo.h"
#include "pxmap/random.h"

namespace fs = std::filesystem;
using namespace pxmap;

namespace {

constexpr int kUsageExit = 2;
constexpr int kDataExit = 1;

int DefaultWorkers() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string DefaultMerlDir() {
    const char *env = std::getenv("PXMAP_MERL_DIR");
    return env ? env : "";
}

std::string FlagName(const std::string &key) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    return flag;
}

Rgb ParseRgb(const std::string &text) {
    std::string s = text;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream in(s);
    double r, g, b;
    if (!(in >> r)) throw Error(Errc::ConfigInvalid, "bad colour '" + text + "'");
    if (!(in >> g >> b)) g = b = r;
    return Rgb(r, g, b);
}

MerlLibrary LoadLibraryIfAny(const std::string &dir) {
    if (dir.empty()) return {};
    return LoadMerlDirectory(dir);
}

void WriteTextFile(const std::string &path, const std::string &text) {
    std::ofstream out(path);
    out << text;
    if (!out) throw Error(Errc::IoFailure, "cannot write " + path);
}

///////////////////////////////////////////////////////////////////////////
// generate

struct GenerateArgs {
    std::string out;
    uint64_t count = 0;
    std::string preset = "dense";
    std::string config;
    std::string merl_dir = DefaultMerlDir();
    int workers = DefaultWorkers();
    bool quiet = false;
    std::map<std::string, std::string> overrides;
};

void AddGenerate(CLI::App &app, GenerateArgs &a) {
    CLI::App *cmd = app.add_subcommand("generate", "Generate a PXOM training dataset");
    cmd->add_option("--out", a.out, "Output dataset file")->required();
    cmd->add_option("--count", a.count, "Number of records to emit")
        ->required()
        ->check(CLI::Range(uint64_t(1), std::numeric_limits<uint64_t>::max()));
    cmd->add_option("--preset", a.preset, "Light configuration preset")
        ->check(CLI::IsMember({"dense", "sparse"}))
        ->multi_option_policy(CLI::MultiOptionPolicy::Throw)
        ->capture_default_str();
    cmd->add_option("--config", a.config, "key = value file applied after the preset")
        ->check(CLI::ExistingFile);
    cmd->add_option("--merl-dir", a.merl_dir,
                    "Directory of MERL .binary tables (default $PXMAP_MERL_DIR)")
        ->capture_default_str();
    cmd->add_option("--workers", a.workers, "Worker threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_flag("--quiet", a.quiet, "Do not print statistics");

    // One flag per config key; the defaults shown are those of the dense
    // preset, sparse changes the light count and elevation.
    GenConfig dense = GenConfig::Dense();
    std::map<std::string, std::string> defaults = ToKeyValues(dense);
    for (const auto &[key, help] : ConfigKeyHelp()) {
        std::string shown = defaults.count(key) ? defaults[key] : "";
        if (key == "seed") shown = "0";
        cmd->add_option_function<std::string>(
               FlagName(key), [&a, key](const std::string &v) { a.overrides[key] = v; },
               help + " [default: " + shown + "]")
            ->type_name(key == "material_mode" ? "MODE" : "VALUE");
    }
    cmd->callback([&a]() {
        GenConfig cfg = a.preset == "sparse" ? GenConfig::Sparse() : GenConfig::Dense();
        if (!a.config.empty()) {
            std::ifstream in(a.config);
            if (!in) throw Error(Errc::IoFailure, "cannot open " + a.config);
            ApplyConfigFile(cfg, in);
        }
        for (const auto &[k, v] : a.overrides) SetConfigValue(cfg, k, v);
        cfg.Validate();

        MerlLibrary library = LoadLibraryIfAny(a.merl_dir);
        std::ofstream out(a.out, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(Errc::IoFailure, "cannot create " + a.out);
        DatasetWriter writer(out, cfg.d);
        GenStats s = Generate(cfg, a.count, a.workers, writer, library);
        writer.Finish();
        out.close();
        if (!out) throw Error(Errc::IoFailure, "error writing " + a.out);
        if (!a.quiet) {
            std::cerr << std::fixed << std::setprecision(4) << "records " << s.generated
                      << "  discarded " << s.discarded << "  attempts " << s.attempts << "\n"
                      << "shadow " << s.shadow_fraction << "  empty-wall "
                      << s.empty_wall_fraction << "  ambient " << s.ambient_fraction
                      << "  discontinuity " << s.discontinuity_fraction << "  merl "
                      << s.merl_fraction << "\n"
                      << std::setprecision(1) << s.records_per_second << " records/s ("
                      << a.workers << " workers)\n";
        }
    });
}

///////////////////////////////////////////////////////////////////////////
// Stack inputs shared by solve-baseline, extract-maps and predict

struct StackArgs {
    std::string dir;
    std::string light_dirs;
    std::string light_ints;
    std::string mask;
};

void AddStackOptions(CLI::App *cmd, StackArgs &s) {
    cmd->add_option("--stack", s.dir, "Directory with the stack PNGs")->required();
    cmd->add_option("--light-dirs", s.light_dirs,
                    "Light directions file [default: <stack>/light_directions.txt]");
    cmd->add_option("--light-intensities", s.light_ints,
                    "Light intensities file [default: <stack>/light_intensities.txt]");
    cmd->add_option("--mask", s.mask,
                    "Mask PNG; nonzero = inside [default: <stack>/mask.png if present]");
}

ImageStack LoadStack(const StackArgs &s) {
    fs::path dir(s.dir);
    std::string dirs = s.light_dirs.empty() ? (dir / "light_directions.txt").string() : s.light_dirs;
    std::string ints =
        s.light_ints.empty() ? (dir / "light_intensities.txt").string() : s.light_ints;
    std::string mask = s.mask;
    if (mask.empty() && fs::exists(dir / "mask.png")) mask = (dir / "mask.png").string();
    return LoadImageStack(s.dir, LoadLightFiles(dirs, ints), mask);
}

///////////////////////////////////////////////////////////////////////////
// render-sphere

struct RenderArgs {
    std::string out;
    int resolution = 128;
    int lights = 96;
    double max_elevation = 70;
    double brightness_min = 1, brightness_max = 1;
    std::string light_dirs, light_ints;
    std::string material = "lambertian";
    std::string albedo = "0.8,0.8,0.8";
    DisneyParams disney;
    double merl_w = 1;
    std::string merl_dir = DefaultMerlDir();
    bool effects = false;
    bool quantize = false;
    uint64_t seed = 0;
};

void AddRenderSphere(CLI::App &app, RenderArgs &a) {
    CLI::App *cmd =
        app.add_subcommand("render-sphere", "Render a pixelwise sphere stack and its normals");
    cmd->add_option("--out", a.out, "Output directory")->required();
    cmd->add_option("--resolution", a.resolution, "Image size in pixels")
        ->check(CLI::Range(8, 8192))
        ->capture_default_str();
    cmd->add_option("--lights", a.lights, "Number of random lights")
        ->check(CLI::Range(1, 100000))
        ->capture_default_str();
    cmd->add_option("--max-elevation", a.max_elevation, "Random lights: max angle from +z, degrees")
        ->check(CLI::Range(0.0, 90.0))
        ->capture_default_str();
    cmd->add_option("--brightness-min", a.brightness_min, "Random lights: min brightness")
        ->capture_default_str();
    cmd->add_option("--brightness-max", a.brightness_max, "Random lights: max brightness")
        ->capture_default_str();
    cmd->add_option("--light-dirs", a.light_dirs, "Use this light directions file instead");
    cmd->add_option("--light-intensities", a.light_ints, "Intensities for --light-dirs");
    cmd->add_option("--material", a.material, "lambertian, disney, or merl:<index>")
        ->capture_default_str();
    cmd->add_option("--albedo", a.albedo, "Albedo r,g,b")->capture_default_str();
    cmd->add_option("--metallic", a.disney.metallic)->capture_default_str();
    cmd->add_option("--specular", a.disney.specular)->capture_default_str();
    cmd->add_option("--roughness", a.disney.roughness)->capture_default_str();
    cmd->add_option("--specular-tint", a.disney.specularTint)->capture_default_str();
    cmd->add_option("--sheen", a.disney.sheen)->capture_default_str();
    cmd->add_option("--sheen-tint", a.disney.sheenTint)->capture_default_str();
    cmd->add_option("--clearcoat", a.disney.clearcoat)->capture_default_str();
    cmd->add_option("--clearcoat-roughness", a.disney.clearcoatRoughness)->capture_default_str();
    cmd->add_option("--merl-w", a.merl_w, "Weight of the measured BRDF in a merl material")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--merl-dir", a.merl_dir, "MERL table directory (default $PXMAP_MERL_DIR)")
        ->capture_default_str();
    cmd->add_flag("--effects", a.effects,
                  "Sample shadows, reflections, discontinuities, ambient and noise per pixel");
    cmd->add_flag("--quantize", a.quantize, "Apply 16-bit quantization");
    cmd->add_option("--seed", a.seed, "Seed for lights and per-pixel effects")
        ->capture_default_str();
    cmd->callback([&a]() {
        if (a.light_dirs.empty() != a.light_ints.empty())
            throw CLI::ValidationError("--light-dirs and --light-intensities go together");
        if (!(a.brightness_min > 0 && a.brightness_min <= a.brightness_max))
            throw CLI::ValidationError("need 0 < --brightness-min <= --brightness-max");

        std::vector<Light> lights;
        if (!a.light_dirs.empty()) {
            lights = LoadLightFiles(a.light_dirs, a.light_ints);
        } else {
            RandomStream rng(DeriveSeed({a.seed, 0x11647u}));
            for (int j = 0; j < a.lights; ++j) {
                Light l;
                l.direction = SampleHemisphereUniform(rng, Radians(a.max_elevation));
                for (int c = 0; c < 3; ++c)
                    l.brightness[c] = rng.Uniform(a.brightness_min, a.brightness_max);
                lights.push_back(l);
            }
        }

        MerlLibrary library;
        MaterialSpec material = Lambertian{};
        if (a.material == "disney") {
            if (!a.disney.IsValid()) throw CLI::ValidationError("Disney parameters must be in [0,1]");
            material = a.disney;
        } else if (a.material.rfind("merl:", 0) == 0) {
            library = LoadLibraryIfAny(a.merl_dir);
            size_t id = 0;
            try {
                id = std::stoul(a.material.substr(5));
            } catch (const std::exception &) {
                throw CLI::ValidationError("--material merl:<index> needs a numeric index");
            }
            library.Get(id);
            material = MerlMix{id, a.merl_w};
        } else if (a.material != "lambertian") {
            throw CLI::ValidationError("unknown material '" + a.material + "'");
        }

        EffectsConfig effects = a.effects ? EffectsConfig{} : EffectsConfig::Off();
        effects.quantize = a.quantize;
        SphereRender r =
            RenderSphere(material, ParseRgb(a.albedo), lights, a.resolution, effects, a.seed, library);
        SaveImageStack(a.out, r.stack);
        WriteNormalMapFile((fs::path(a.out) / "normals.pxnm").string(), r.truth);
        std::cout << "wrote " << r.stack.count() << " images of " << a.resolution << "x"
                  << a.resolution << " to " << a.out << "\n";
    });
}

///////////////////////////////////////////////////////////////////////////
// solve-baseline

struct SolveArgs {
    StackArgs stack;
    std::string out;
    std::string truth;
    int subsets = 0;
    int subset_size = 10;
    uint64_t subset_seed = 0;
};

void AddSolveBaseline(CLI::App &app, SolveArgs &a) {
    CLI::App *cmd =
        app.add_subcommand("solve-baseline", "Least-squares Lambertian normals from a stack");
    AddStackOptions(cmd, a.stack);
    cmd->add_option("--out", a.out, "Output PXNM (with --subsets: prefix, _NN.pxnm appended)")
        ->required();
    cmd->add_option("--truth", a.truth, "Ground-truth PXNM; prints the mean angular error");
    cmd->add_option("--subsets", a.subsets, "Solve this many random light subsets instead")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--subset-size", a.subset_size, "Lights per subset")
        ->check(CLI::Range(3, 100000))
        ->capture_default_str();
    cmd->add_option("--subset-seed", a.subset_seed, "Seed of the subset sampler")
        ->capture_default_str();
    cmd->callback([&a]() {
        ImageStack stack = LoadStack(a.stack);
        std::optional<NormalMap> truth;
        if (!a.truth.empty()) truth = ReadNormalMapFile(a.truth);

        if (a.subsets == 0) {
            NormalMap n = WoodhamSolve(stack);
            WriteNormalMapFile(a.out, n);
            std::cout << "solved " << n.ValidCount() << " pixels\n";
            if (truth)
                std::cout << std::fixed << std::setprecision(3)
                          << "MAE " << Evaluate(n, *truth).mean_deg << "\n";
            return;
        }
        std::vector<double> maes;
        auto subsets = RandomLightSubsets(stack.count(), a.subset_size, a.subsets, a.subset_seed);
        for (size_t s = 0; s < subsets.size(); ++s) {
            NormalMap n = WoodhamSolve(SelectLights(stack, subsets[s]));
            std::ostringstream name;
            name << a.out << "_" << std::setw(2) << std::setfill('0') << s << ".pxnm";
            WriteNormalMapFile(name.str(), n);
            if (truth) maes.push_back(Evaluate(n, *truth).mean_deg);
        }
        std::cout << "solved " << subsets.size() << " subsets of " << a.subset_size << " lights\n";
        if (!maes.empty()) {
            double mean = 0, var = 0;
            for (double m : maes) mean += m;
            mean /= double(maes.size());
            for (double m : maes) var += (m - mean) * (m - mean);
            double sd = maes.size() > 1 ? std::sqrt(var / double(maes.size() - 1)) : 0.0;
            std::cout << std::fixed << std::setprecision(3) << "MAE " << mean << " +- " << sd
                      << "\n";
        }
    });
}

///////////////////////////////////////////////////////////////////////////
// extract-maps

struct ExtractArgs {
    StackArgs stack;
    std::string out;
    std::string pixels;
    std::string normals;
    int d = kDefaultMapSize;
};

std::vector<std::pair<int, int>> ReadPixelList(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoFailure, "cannot open " + path);
    std::vector<std::pair<int, int>> pixels;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        int r, c;
        std::string extra;
        if (!(ls >> r >> c) || (ls >> extra))
            throw Error(Errc::ParseError, path + ":" + std::to_string(lineno) + ": expected 'row col'");
        pixels.emplace_back(r, c);
    }
    return pixels;
}

void AddExtractMaps(CLI::App &app, ExtractArgs &a) {
    CLI::App *cmd = app.add_subcommand("extract-maps", "Per-pixel observation maps as PXOM");
    AddStackOptions(cmd, a.stack);
    cmd->add_option("--out", a.out, "Output PXOM file")->required();
    cmd->add_option("--pixels", a.pixels, "File of 'row col' lines [default: every mask pixel]");
    cmd->add_option("--normals", a.normals, "PXNM whose normals fill the records (else zero)");
    cmd->add_option("--d", a.d, "Map size")->check(CLI::Range(1, 1024))->capture_default_str();
    cmd->callback([&a]() {
        ImageStack stack = LoadStack(a.stack);
        std::vector<std::pair<int, int>> pixels;
        if (!a.pixels.empty()) {
            pixels = ReadPixelList(a.pixels);
            for (auto [r, c] : pixels)
                if (r < 0 || c < 0 || r >= stack.height() || c >= stack.width())
                    throw Error(Errc::OutsideMask, "pixel (" + std::to_string(r) + ", " +
                                                       std::to_string(c) + ") is off the image");
        } else {
            for (int r = 0; r < stack.height(); ++r)
                for (int c = 0; c < stack.width(); ++c)
                    if (stack.InMask(r, c)) pixels.emplace_back(r, c);
        }
        std::optional<NormalMap> normals;
        if (!a.normals.empty()) {
            normals = ReadNormalMapFile(a.normals);
            if (normals->height() != stack.height() || normals->width() != stack.width())
                throw Error(Errc::DimensionMismatch, "normal map and stack differ in size");
        }
        std::ofstream out(a.out, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(Errc::IoFailure, "cannot create " + a.out);
        DatasetWriter writer(out, a.d);
        for (auto [r, c] : pixels) {
            Vec3 n;
            if (normals && normals->Valid(r, c)) n = normals->At(r, c);
            writer.Write(TrainingRecord{ExtractMap(stack, r, c, a.d), n});
        }
        writer.Finish();
        if (!out) throw Error(Errc::IoFailure, "error writing " + a.out);
        std::cout << "wrote " << writer.written() << " maps\n";
    });
}

///////////////////////////////////////////////////////////////////////////
// evaluate

struct EvaluateArgs {
    std::string pred, truth;
    std::string csv, error_png, error_csv;
};

// Piecewise-linear blue-cyan-green-yellow-red ramp over [0, 1].
Rgb Heat(double t) {
    static const Rgb stops[] = {{0, 0, 0.5}, {0, 0, 1}, {0, 1, 1}, {1, 1, 0}, {1, 0, 0}, {0.5, 0, 0}};
    constexpr int n = int(std::size(stops)) - 1;
    t = std::clamp(t, 0.0, 1.0) * n;
    int i = std::min(int(t), n - 1);
    double f = t - i;
    return stops[i] * (1 - f) + stops[i + 1] * f;
}

void WriteErrorPng(const std::string &path, const Evaluation &ev) {
    PngImage img;
    img.width = ev.width;
    img.height = ev.height;
    img.channels = 3;
    img.bit_depth = 8;
    img.samples.assign(size_t(ev.width) * ev.height * 3, 0);
    for (size_t p = 0; p < ev.error_map.size(); ++p) {
        if (std::isnan(ev.error_map[p])) continue;
        Rgb c = Heat(ev.error_map[p] / 90.0);
        for (int k = 0; k < 3; ++k) img.samples[p * 3 + k] = uint16_t(std::lround(c[k] * 255));
    }
    WritePng(path, img);
}

void AddEvaluate(CLI::App &app, EvaluateArgs &a) {
    CLI::App *cmd = app.add_subcommand("evaluate", "Angular error between two PXNM normal maps");
    cmd->add_option("pred", a.pred, "Predicted PXNM")->required();
    cmd->add_option("truth", a.truth, "Ground-truth PXNM")->required();
    cmd->add_option("--csv", a.csv, "Write summary metrics as CSV");
    cmd->add_option("--error-png", a.error_png, "Write a 0-90 degree error heat map PNG");
    cmd->add_option("--error-csv", a.error_csv, "Write per-pixel errors (row,col,degrees)");
    cmd->callback([&a]() {
        Evaluation ev = Evaluate(ReadNormalMapFile(a.pred), ReadNormalMapFile(a.truth));
        std::cout << std::fixed << std::setprecision(3) << "MAE " << ev.mean_deg << "\n"
                  << "median " << ev.median_deg << "\n"
                  << "pixels " << ev.pixels << "\n";
        for (auto [pct, deg] : ev.percentiles)
            std::cout << "p" << int(pct) << " " << deg << "\n";

        if (!a.csv.empty()) {
            std::ostringstream s;
            s << std::setprecision(9) << "metric,value\nmae_deg," << ev.mean_deg << "\nmedian_deg,"
              << ev.median_deg << "\npixels," << ev.pixels << "\n";
            for (auto [pct, deg] : ev.percentiles) s << "p" << int(pct) << "_deg," << deg << "\n";
            WriteTextFile(a.csv, s.str());
        }
        if (!a.error_csv.empty()) {
            std::ostringstream s;
            s << std::setprecision(9) << "row,col,error_deg\n";
            for (int r = 0; r < ev.height; ++r)
                for (int c = 0; c < ev.width; ++c) {
                    double e = ev.error_map[size_t(r) * ev.width + c];
                    if (!std::isnan(e)) s << r << "," << c << "," << e << "\n";
                }
            WriteTextFile(a.error_csv, s.str());
        }
        if (!a.error_png.empty()) WriteErrorPng(a.error_png, ev);
    });
}

///////////////////////////////////////////////////////////////////////////
// merl-info

struct MerlInfoArgs {
    std::vector<std::string> paths;
};

void AddMerlInfo(CLI::App &app, MerlInfoArgs &a) {
    CLI::App *cmd = app.add_subcommand("merl-info", "Summarize MERL .binary tables");
    cmd->add_option("paths", a.paths, "Table files or directories")->required();
    cmd->callback([&a]() {
        std::vector<std::string> files;
        for (const std::string &p : a.paths) {
            if (fs::is_directory(p)) {
                std::vector<std::string> found;
                for (const auto &e : fs::directory_iterator(p))
                    if (e.path().extension() == ".binary") found.push_back(e.path().string());
                std::sort(found.begin(), found.end());
                files.insert(files.end(), found.begin(), found.end());
            } else {
                files.push_back(p);
            }
        }
        if (files.empty()) throw Error(Errc::EmptyInput, "no .binary tables found");
        std::cout << "name,invalid_bins,max_r,max_g,max_b,mean_r,mean_g,mean_b,normal_r,normal_g,"
                     "normal_b\n";
        for (const std::string &f : files) {
            MerlTable t = LoadMerlFile(f);
            const double scale[3] = {MerlTable::kRedScale, MerlTable::kGreenScale,
                                     MerlTable::kBlueScale};
            size_t invalid = 0;
            double mx[3] = {0, 0, 0}, sum[3] = {0, 0, 0};
            for (int c = 0; c < 3; ++c)
                for (size_t i = 0; i < MerlTable::kEntries; ++i) {
                    double v = t.raw()[c * MerlTable::kEntries + i];
                    if (v < 0) {
                        if (c == 0) ++invalid;
                        continue;
                    }
                    mx[c] = std::max(mx[c], v * scale[c]);
                    sum[c] += v * scale[c];
                }
            Rgb normal = t.EvalLocal(Vec3(0, 0, 1), Vec3(0, 0, 1));
            std::cout << std::setprecision(6) << t.name() << "," << invalid;
            for (double m : mx) std::cout << "," << m;
            for (double s : sum) std::cout << "," << s / double(MerlTable::kEntries);
            for (int c = 0; c < 3; ++c) std::cout << "," << normal[c];
            std::cout << "\n";
        }
    });
}

///////////////////////////////////////////////////////////////////////////
// predict

struct PredictArgs {
    StackArgs stack;
    std::string out;
    std::string command;
    std::string work_dir;
    int k = 1;
    int d = kDefaultMapSize;
    size_t batch = 4096;
};

void AddPredict(CLI::App &app, PredictArgs &a) {
    CLI::App *cmd = app.add_subcommand(
        "predict", "Normals from an external map predictor with K light rotations");
    AddStackOptions(cmd, a.stack);
    cmd->add_option("--out", a.out, "Output PXNM")->required();
    cmd->add_option("--predictor", a.command,
                    "Command reading a PXOM and writing a PXNM; {input}/{output} are substituted, "
                    "otherwise both paths are appended")
        ->required();
    cmd->add_option("--work-dir", a.work_dir, "Scratch directory [default: <out>.work]");
    cmd->add_option("--k", a.k, "Number of rotations")->check(CLI::Range(1, 360))->capture_default_str();
    cmd->add_option("--d", a.d, "Map size")->check(CLI::Range(1, 1024))->capture_default_str();
    cmd->add_option("--batch", a.batch, "Maps per predictor call")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->callback([&a]() {
        ImageStack stack = LoadStack(a.stack);
        std::string work = a.work_dir.empty() ? a.out + ".work" : a.work_dir;
        SubprocessPredictor predictor(a.command, work);
        NormalMap n = KRotationPredict(stack, a.k, predictor, a.d, a.batch);
        WriteNormalMapFile(a.out, n);
        if (a.work_dir.empty()) fs::remove_all(work);
        std::cout << "predicted " << n.ValidCount() << " pixels\n";
    });
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Synthetic observation-map data and photometric stereo tools", "pxmap"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "pxmap 1.0");

    GenerateArgs gen;
    RenderArgs render;
    SolveArgs solve;
    ExtractArgs extract;
    EvaluateArgs eval;
    MerlInfoArgs merl;
    PredictArgs predict;
    AddGenerate(app, gen);
    AddRenderSphere(app, render);
    AddSolveBaseline(app, solve);
    AddExtractMaps(app, extract);
    AddEvaluate(app, eval);
    AddMerlInfo(app, merl);
    AddPredict(app, predict);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        std::cerr << "pxmap: " << e.what() << "\n";
        return kUsageExit;
    } catch (const Error &e) {
        std::cerr << "pxmap: " << e.what() << "\n";
        return e.code() == Errc::ConfigInvalid ? kUsageExit : kDataExit;
    } catch (const std::exception &e) {
        std::cerr << "pxmap: " << e.what() << "\n";
        return kDataExit;
    }
    return 0;
}
