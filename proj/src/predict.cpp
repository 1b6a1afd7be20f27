// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "pxmap/datagen.h"
#include "pxmap/error.h"
#include "pxmap/pstereo.h"

namespace pxmap {

NormalMap KRotationPredict(const ImageStack &stack, int k, const NormalPredictor &predictor,
                           int d, size_t batch) {
    if (k < 1) throw Error(Errc::ConfigInvalid, "K must be >= 1");
    if (batch < 1) batch = 1;

    std::vector<std::pair<int, int>> pixels;
    for (int r = 0; r < stack.height(); ++r)
        for (int c = 0; c < stack.width(); ++c)
            if (stack.InMask(r, c)) pixels.emplace_back(r, c);

    std::vector<Vec3> sums(pixels.size());
    std::vector<ObservationMap> maps;
    for (int rot = 0; rot < k; ++rot) {
        double theta = 2 * Pi * rot / k;
        for (size_t begin = 0; begin < pixels.size(); begin += batch) {
            size_t end = std::min(pixels.size(), begin + batch);
            maps.clear();
            for (size_t i = begin; i < end; ++i)
                maps.push_back(
                    RotatedVariant(stack.Samples(pixels[i].first, pixels[i].second), theta, d));
            std::vector<Direction> pred = predictor(maps);
            if (pred.size() != maps.size())
                throw Error(Errc::PredictorFailure,
                            "predictor returned " + std::to_string(pred.size()) + " normals for " +
                                std::to_string(maps.size()) + " maps");
            for (size_t i = begin; i < end; ++i) sums[i] += RotateAboutZ(pred[i - begin], -theta);
        }
    }

    NormalMap out(stack.height(), stack.width());
    for (size_t i = 0; i < pixels.size(); ++i) {
        double len = Length(sums[i]);
        if (len > 0 && std::isfinite(len)) out.Set(pixels[i].first, pixels[i].second, sums[i] / len);
    }
    return out;
}

SubprocessPredictor::SubprocessPredictor(std::string command, std::string work_dir)
    : command_(std::move(command)), work_dir_(std::move(work_dir)) {}

namespace {

void ReplaceAll(std::string &s, const std::string &from, const std::string &to) {
    for (size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
        s.replace(pos, from.size(), to);
}

std::string Quote(const std::string &s) {
    std::string q = "'";
    for (char ch : s) q += ch == '\'' ? std::string("'\\''") : std::string(1, ch);
    return q + "'";
}

}  // namespace

std::vector<Direction> SubprocessPredictor::operator()(
    const std::vector<ObservationMap> &maps) const {
    namespace fs = std::filesystem;
    static std::atomic<int> serial{0};
    if (maps.empty()) return {};
    fs::create_directories(work_dir_);
    int id = serial++;
    std::string input = (fs::path(work_dir_) / ("batch_" + std::to_string(id) + ".pxom")).string();
    std::string output = (fs::path(work_dir_) / ("batch_" + std::to_string(id) + ".pxnm")).string();
    {
        std::ofstream out(input, std::ios::binary);
        if (!out) throw Error(Errc::PredictorFailure, "cannot create " + input);
        DatasetWriter writer(out, maps.front().d());
        for (const ObservationMap &m : maps) writer.Write(TrainingRecord{m, Vec3()});
        writer.Finish();
    }
    fs::remove(output);

    std::string cmd = command_;
    if (cmd.find("{input}") != std::string::npos || cmd.find("{output}") != std::string::npos) {
        ReplaceAll(cmd, "{input}", Quote(input));
        ReplaceAll(cmd, "{output}", Quote(output));
    } else {
        cmd += " " + Quote(input) + " " + Quote(output);
    }
    int status = std::system(cmd.c_str());
    if (status != 0)
        throw Error(Errc::PredictorFailure, "predictor exited with status " + std::to_string(status));

    NormalMap result;
    try {
        result = ReadNormalMapFile(output);
    } catch (const Error &e) {
        throw Error(Errc::PredictorFailure, std::string("bad predictor output: ") + e.what());
    }
    if (size_t(result.height()) * result.width() != maps.size())
        throw Error(Errc::PredictorFailure, "predictor output has " +
                                                std::to_string(result.height() * result.width()) +
                                                " normals for " + std::to_string(maps.size()) +
                                                " maps");
    std::vector<Direction> normals;
    normals.reserve(maps.size());
    for (int r = 0; r < result.height(); ++r)
        for (int c = 0; c < result.width(); ++c)
            normals.push_back(result.Valid(r, c) ? result.At(r, c) : Vec3());
    fs::remove(input);
    fs::remove(output);
    return normals;
}

}  // namespace pxmap
