// SPDX-License-Identifier: Apache-2.0
//
// Whole-image preprocessing: rotate the subject to the center, crop, and
// produce the cropped intrinsics plus their Perspective Encoding map. The
// rotation homography and the crop affine are fused into one warp so the
// image is resampled once.
#pragma once

#include "perscam/camera.hpp"
#include "perscam/error.hpp"
#include "perscam/pemap.hpp"
#include "perscam/persrot.hpp"
#include "perscam/raster.hpp"

namespace perscam {

struct PipelineConfig {
  ImageSize crop_size{256, 256};
  double padding = 1.0;
  std::uint8_t fill_value = 0;

  bool valid() const {
    return crop_size.valid() && crop_size.w == crop_size.h && padding >= 1.0;
  }
};

struct PipelineResult {
  Raster crop;             // centered crop, crop_size
  PEMap pe_map;            // PE map of crop_intr, crop_size
  Intrinsics crop_intr;    // K^crop = A K
  CropAffine affine;       // crop affine applied after the rotation
  RotationResult rotation;
  BBox bbox;               // padded square bbox in the original image
  BBox bbox_rotated;       // bbox after the rotation homography
};

inline PipelineResult run_pipeline(const Raster& image, const Intrinsics& k,
                                   const BBox& bbox, const PipelineConfig& cfg) {
  if (!cfg.valid()) throw Error(ErrorCode::ParseError, "invalid pipeline config");
  if (!k.valid()) throw Error(ErrorCode::ParseError, "invalid intrinsics");

  PipelineResult r;
  r.bbox = square_expand(bbox, cfg.padding);
  if (r.bbox.cu - r.bbox.w / 2.0 < 0.0 || r.bbox.cv - r.bbox.h / 2.0 < 0.0 ||
      r.bbox.cu + r.bbox.w / 2.0 > image.w || r.bbox.cv + r.bbox.h / 2.0 > image.h)
    throw Error(ErrorCode::InvalidBBox, "padded bbox exceeds image bounds");

  r.rotation = rotation_to_center(k, r.bbox);
  r.bbox_rotated = square_expand(map_bbox(r.rotation.M, r.bbox));
  r.affine = crop_affine(r.bbox_rotated, cfg.crop_size);
  r.crop_intr = crop_intrinsics(k, r.affine);

  const Eigen::Matrix3d full_warp = r.affine.matrix() * r.rotation.M;
  r.crop = warp_image(image, full_warp, cfg.crop_size, cfg.fill_value);
  r.pe_map = pe_map(r.crop_intr, cfg.crop_size);
  return r;
}

}  // namespace perscam
