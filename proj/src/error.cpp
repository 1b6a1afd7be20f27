// SPDX-License-Identifier: Apache-2.0

#include "pxmap/error.h"

namespace pxmap {

std::string_view ToString(Errc code) {
    switch (code) {
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::TruncatedFile: return "TruncatedFile";
    case Errc::UnknownMaterial: return "UnknownMaterial";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::BadMagic: return "BadMagic";
    case Errc::VersionUnsupported: return "VersionUnsupported";
    case Errc::IoFailure: return "IoFailure";
    case Errc::LineCountMismatch: return "LineCountMismatch";
    case Errc::ParseError: return "ParseError";
    case Errc::CountMismatch: return "CountMismatch";
    case Errc::DecodeError: return "DecodeError";
    case Errc::OutsideMask: return "OutsideMask";
    case Errc::RankDeficientLights: return "RankDeficientLights";
    case Errc::EmptyIntersection: return "EmptyIntersection";
    case Errc::PredictorFailure: return "PredictorFailure";
    }
    return "Unknown";
}

}  // namespace pxmap
