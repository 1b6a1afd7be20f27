// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pxmap {

// Decoded PNG: samples are stored as read (no gamma handling), expanded to
// `channels` of 1 (gray) or 3 (rgb); alpha is dropped.
struct PngImage {
    int width = 0;
    int height = 0;
    int channels = 0;
    int bit_depth = 0;  // 8 or 16
    std::vector<uint16_t> samples;

    uint16_t At(int row, int col, int c) const {
        return samples[(size_t(row) * width + col) * channels + c];
    }
    double MaxValue() const { return bit_depth == 16 ? 65535.0 : 255.0; }
};

// Throws Errc::IoFailure if the file cannot be opened, Errc::DecodeError
// on malformed data.
PngImage ReadPng(const std::string &path);
// channels 1 or 3, bit depth 8 or 16.
void WritePng(const std::string &path, const PngImage &image);

}  // namespace pxmap
