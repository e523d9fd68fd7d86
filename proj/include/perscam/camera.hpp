// SPDX-License-Identifier: Apache-2.0
//
// Pinhole intrinsics, field of view, and the crop-as-intrinsics-edit algebra:
// cropping an image is equivalent to re-shooting with intrinsics A*K, where A
// is the affine matrix of the crop.
#pragma once

#include <cmath>
#include <algorithm>

#include <Eigen/Core>

#include "perscam/error.hpp"

namespace perscam {

/// Isotropic pinhole intrinsics (f_x = f_y = f), pixel units.
struct Intrinsics {
  double f = 1.0;
  double cx = 0.0;
  double cy = 0.0;

  Eigen::Matrix3d matrix() const {
    Eigen::Matrix3d k;
    k << f, 0.0, cx,
         0.0, f, cy,
         0.0, 0.0, 1.0;
    return k;
  }

  // Closed-form inverse of the upper-triangular K.
  Eigen::Matrix3d inverse() const {
    Eigen::Matrix3d ki;
    ki << 1.0 / f, 0.0, -cx / f,
          0.0, 1.0 / f, -cy / f,
          0.0, 0.0, 1.0;
    return ki;
  }

  bool valid() const { return std::isfinite(f) && f > 0.0 && std::isfinite(cx) && std::isfinite(cy); }
};

struct ImageSize {
  int w = 0;
  int h = 0;

  bool valid() const { return w >= 1 && h >= 1; }
};

/// Axis-aligned bounding box, center + extent, pixel units.
struct BBox {
  double cu = 0.0;
  double cv = 0.0;
  double w = 0.0;
  double h = 0.0;

  bool valid() const {
    return std::isfinite(cu) && std::isfinite(cv) && w > 0.0 && h > 0.0;
  }
};

/// Isotropic scale + translation: [[s,0,tu],[0,s,tv],[0,0,1]].
struct CropAffine {
  double s = 1.0;
  double tu = 0.0;
  double tv = 0.0;

  Eigen::Matrix3d matrix() const {
    Eigen::Matrix3d a;
    a << s, 0.0, tu,
         0.0, s, tv,
         0.0, 0.0, 1.0;
    return a;
  }

  Eigen::Vector2d apply(const Eigen::Vector2d& p) const {
    return {s * p.x() + tu, s * p.y() + tv};
  }

  CropAffine compose(const CropAffine& inner) const {
    // this ∘ inner
    return {s * inner.s, s * inner.tu + tu, s * inner.tv + tv};
  }
};

struct Fov {
  double x = 0.0;  // radians
  double y = 0.0;
};

inline Fov fov(const Intrinsics& k, const ImageSize& size) {
  return {2.0 * std::atan(size.w / (2.0 * k.f)),
          2.0 * std::atan(size.h / (2.0 * k.f))};
}

/// Expand a bbox to a square (max side) scaled by `padding` (>= 1).
inline BBox square_expand(const BBox& bbox, double padding = 1.0) {
  if (!bbox.valid()) throw Error(ErrorCode::InvalidBBox, "degenerate bounding box");
  const double side = std::max(bbox.w, bbox.h) * padding;
  return {bbox.cu, bbox.cv, side, side};
}

/// Affine placing `bbox` onto a crop_size raster, bbox center to crop center.
/// Expects a bbox already normalized to the crop aspect (square for square crops).
inline CropAffine crop_affine(const BBox& bbox, const ImageSize& crop_size) {
  if (!bbox.valid()) throw Error(ErrorCode::InvalidBBox, "degenerate bounding box");
  const double s = crop_size.w / bbox.w;
  return {s, crop_size.w / 2.0 - s * bbox.cu, crop_size.h / 2.0 - s * bbox.cv};
}

/// K^crop = A * K.
inline Intrinsics crop_intrinsics(const Intrinsics& k, const CropAffine& a) {
  return {a.s * k.f, a.s * k.cx + a.tu, a.s * k.cy + a.tv};
}

}  // namespace perscam
