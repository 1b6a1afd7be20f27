// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pxmap {

enum class Errc {
    ConfigInvalid,
    DimensionMismatch,
    TruncatedFile,
    UnknownMaterial,
    EmptyInput,
    BadMagic,
    VersionUnsupported,
    IoFailure,
    LineCountMismatch,
    ParseError,
    CountMismatch,
    DecodeError,
    OutsideMask,
    RankDeficientLights,
    EmptyIntersection,
    PredictorFailure,
};

std::string_view ToString(Errc code);

// All recoverable failures in the library are reported through this type;
// the code lets callers (and the CLI) distinguish usage errors from data errors.
class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string &what)
        : std::runtime_error(std::string(ToString(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

  private:
    Errc code_;
};

}  // namespace pxmap
