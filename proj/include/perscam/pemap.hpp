// SPDX-License-Identifier: Apache-2.0
//
// Perspective Encoding map: per-pixel coordinates of the cropped image's
// pixels projected onto the z=1 plane, (x,y,1)^T = (K^crop)^-1 (u,v,1)^T.
// The raster of (x, y) values encodes the crop's view frustum.
#pragma once

#include <cstdint>
#include <vector>

#include "perscam/camera.hpp"
#include "perscam/error.hpp"

namespace perscam {

/// H x W grid of (x, y) pairs on the z=1 plane, interleaved f32, row-major.
struct PEMap {
  int w = 0;
  int h = 0;
  std::vector<float> data;  // 2 * w * h, x before y per pixel

  float x_at(int u, int v) const { return data[2 * (static_cast<size_t>(v) * w + u)]; }
  float y_at(int u, int v) const { return data[2 * (static_cast<size_t>(v) * w + u) + 1]; }
};

struct PEMapStats {
  double x_min, x_max, y_min, y_max;
};

/// Full-precision plane coordinates of one pixel; the raster stores these
/// rounded to f32.
inline Eigen::Vector2d pe_coord(const Intrinsics& k_crop, double u, double v) {
  return {(u - k_crop.cx) / k_crop.f, (v - k_crop.cy) / k_crop.f};
}

/// Values are computed in double and rounded once to f32 so files are
/// bit-exact across platforms.
inline PEMap pe_map(const Intrinsics& k_crop, const ImageSize& size) {
  PEMap map;
  map.w = size.w;
  map.h = size.h;
  map.data.resize(2 * static_cast<size_t>(size.w) * size.h);
  size_t idx = 0;
  for (int v = 0; v < size.h; ++v) {
    const double y = (v - k_crop.cy) / k_crop.f;
    for (int u = 0; u < size.w; ++u) {
      map.data[idx++] = static_cast<float>((u - k_crop.cx) / k_crop.f);
      map.data[idx++] = static_cast<float>(y);
    }
  }
  return map;
}

/// Extremal plane coordinates; with f > 0 these are the corner values.
inline PEMapStats pe_map_stats(const PEMap& map) {
  return {map.x_at(0, 0), map.x_at(map.w - 1, 0),
          map.y_at(0, 0), map.y_at(0, map.h - 1)};
}

}  // namespace perscam
