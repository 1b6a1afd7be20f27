// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <type_traits>

namespace pxmap {

// Little-endian encode/decode of trivially copyable scalars.
template <typename T>
    requires std::is_arithmetic_v<T>
void EncodeLE(T value, unsigned char *out) {
    std::memcpy(out, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(out, out + sizeof(T));
}

template <typename T>
    requires std::is_arithmetic_v<T>
T DecodeLE(const unsigned char *in) {
    std::array<unsigned char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), in, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

template <typename T>
void WriteLE(std::ostream &out, T value) {
    unsigned char buf[sizeof(T)];
    EncodeLE(value, buf);
    out.write(reinterpret_cast<const char *>(buf), sizeof(T));
}

// Returns false on a short read.
template <typename T>
bool ReadLE(std::istream &in, T *value) {
    unsigned char buf[sizeof(T)];
    if (!in.read(reinterpret_cast<char *>(buf), sizeof(T))) return false;
    *value = DecodeLE<T>(buf);
    return true;
}

// Bulk variants; on little-endian hosts these are a single read/write.
template <typename T>
void WriteArrayLE(std::ostream &out, std::span<const T> values) {
    if constexpr (std::endian::native == std::endian::little) {
        out.write(reinterpret_cast<const char *>(values.data()),
                  std::streamsize(values.size_bytes()));
    } else {
        for (T v : values) WriteLE(out, v);
    }
}

template <typename T>
bool ReadArrayLE(std::istream &in, std::span<T> values) {
    if constexpr (std::endian::native == std::endian::little) {
        return bool(in.read(reinterpret_cast<char *>(values.data()),
                            std::streamsize(values.size_bytes())));
    } else {
        for (T &v : values)
            if (!ReadLE(in, &v)) return false;
        return true;
    }
}

}  // namespace pxmap
