// SPDX-License-Identifier: Apache-2.0

#include "pxmap/png_io.h"

#include <png.h>

#include <cstdio>
#include <memory>

#include "pxmap/error.h"

namespace pxmap {

namespace {

struct FileCloser {
    void operator()(std::FILE *f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void PngError(png_structp png, png_const_charp msg) {
    auto *what = static_cast<std::string *>(png_get_error_ptr(png));
    *what = msg;
    png_longjmp(png, 1);
}

void PngWarning(png_structp, png_const_charp) {}

}  // namespace

PngImage ReadPng(const std::string &path) {
    FilePtr file(std::fopen(path.c_str(), "rb"));
    if (!file) throw Error(Errc::IoFailure, "cannot open " + path);

    unsigned char sig[8];
    if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
        throw Error(Errc::DecodeError, path + ": not a PNG file");

    std::string message;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, PngError, PngWarning);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw Error(Errc::DecodeError, "libpng initialization failed");
    }

    PngImage image;
    std::vector<png_bytep> rows;
    std::vector<unsigned char> bytes;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error(Errc::DecodeError, path + ": " + message);
    }

    png_init_io(png, file.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    int color = png_get_color_type(png, info);
    int depth = png_get_bit_depth(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    image.width = int(png_get_image_width(png, info));
    image.height = int(png_get_image_height(png, info));
    image.channels = int(png_get_channels(png, info));
    image.bit_depth = png_get_bit_depth(png, info);
    if (image.bit_depth != 8 && image.bit_depth != 16) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error(Errc::DecodeError, path + ": unsupported bit depth");
    }

    size_t row_bytes = png_get_rowbytes(png, info);
    bytes.resize(row_bytes * image.height);
    rows.resize(image.height);
    for (int r = 0; r < image.height; ++r) rows[r] = bytes.data() + r * row_bytes;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    size_t n = size_t(image.width) * image.height * image.channels;
    image.samples.resize(n);
    if (image.bit_depth == 16) {
        // PNG stores 16-bit samples big-endian.
        for (size_t i = 0; i < n; ++i)
            image.samples[i] = uint16_t((bytes[2 * i] << 8) | bytes[2 * i + 1]);
    } else {
        for (size_t i = 0; i < n; ++i) image.samples[i] = bytes[i];
    }
    return image;
}

void WritePng(const std::string &path, const PngImage &image) {
    if ((image.channels != 1 && image.channels != 3) ||
        (image.bit_depth != 8 && image.bit_depth != 16) ||
        image.samples.size() != size_t(image.width) * image.height * image.channels)
        throw Error(Errc::ConfigInvalid, "WritePng: inconsistent image description");

    FilePtr file(std::fopen(path.c_str(), "wb"));
    if (!file) throw Error(Errc::IoFailure, "cannot create " + path);

    std::string message;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &message, PngError, PngWarning);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error(Errc::IoFailure, "libpng initialization failed");
    }

    int bytes_per_sample = image.bit_depth / 8;
    size_t row_bytes = size_t(image.width) * image.channels * bytes_per_sample;
    std::vector<unsigned char> bytes(row_bytes * image.height);
    for (size_t i = 0; i < image.samples.size(); ++i) {
        uint16_t v = image.samples[i];
        if (bytes_per_sample == 2) {
            bytes[2 * i] = uint8_t(v >> 8);
            bytes[2 * i + 1] = uint8_t(v & 0xff);
        } else {
            bytes[i] = uint8_t(v);
        }
    }
    std::vector<png_bytep> rows(image.height);
    for (int r = 0; r < image.height; ++r) rows[r] = bytes.data() + r * row_bytes;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error(Errc::IoFailure, path + ": " + message);
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, image.width, image.height, image.bit_depth,
                 image.channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace pxmap
