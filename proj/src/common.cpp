// SPDX-FileCopyrightText: © 2026 soundsmooth contributors
//
// SPDX-License-Identifier: Apache-2.0

#include "soundsmooth/common.hpp"

namespace soundsmooth {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Io: return "i/o error";
    case ErrorKind::Format: return "format error";
    case ErrorKind::Checksum: return "checksum mismatch";
    case ErrorKind::NonMonotone: return "non-monotone thresholds";
    case ErrorKind::SpecMismatch: return "grid spec mismatch";
    case ErrorKind::Dimension: return "dimension mismatch";
  }
  return "unknown error";
}

std::string_view to_string(HostPrecision p) noexcept {
  return p == HostPrecision::Binary32 ? "binary32" : "binary64";
}

HostPrecision parse_precision(std::string_view text) {
  if (text == "binary32" || text == "float" || text == "f32") return HostPrecision::Binary32;
  if (text == "binary64" || text == "double" || text == "f64") return HostPrecision::Binary64;
  throw Error(ErrorKind::InvalidArgument, "unknown precision '" + std::string(text) + "'");
}

void QuantizedImage::validate() const {
  if (levels == 0) throw Error(ErrorKind::InvalidArgument, "image: L must be >= 1");
  for (auto p : pixels) {
    if (p > levels) throw Error(ErrorKind::InvalidArgument, "image: intensity outside {0..L}");
  }
}

}  // namespace soundsmooth
