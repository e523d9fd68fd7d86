// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace perscam {

enum class ErrorCode {
  InvalidBBox,
  InvalidCrop,
  InvalidRotation,
  SingularHomography,
  BehindCamera,
  SkeletonMismatch,
  AlignmentDegenerate,
  InfeasibleScene,
  ParseError,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidBBox:         return "invalid-bbox";
    case ErrorCode::InvalidCrop:         return "invalid-crop";
    case ErrorCode::InvalidRotation:     return "invalid-rotation";
    case ErrorCode::SingularHomography:  return "singular-homography";
    case ErrorCode::BehindCamera:        return "behind-camera";
    case ErrorCode::SkeletonMismatch:    return "skeleton-mismatch";
    case ErrorCode::AlignmentDegenerate: return "alignment-degenerate";
    case ErrorCode::InfeasibleScene:     return "infeasible-scene";
    case ErrorCode::ParseError:          return "parse-error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace perscam
