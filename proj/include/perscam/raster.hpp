// SPDX-License-Identifier: Apache-2.0
//
// 8-bit raster images and homography warping. Warping iterates output pixels
// and samples the source through the inverse map with bilinear interpolation,
// so the result has no holes and is bit-identical for any thread count.
#pragma once

#include <cfenv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "perscam/camera.hpp"
#include "perscam/error.hpp"

namespace perscam {

struct Raster {
  int w = 0;
  int h = 0;
  int channels = 1;  // 1 (gray) or 3 (RGB)
  std::vector<std::uint8_t> data;  // row-major, w * h * channels

  std::uint8_t at(int x, int y, int c = 0) const {
    return data[(static_cast<size_t>(y) * w + x) * channels + c];
  }
  std::uint8_t& at(int x, int y, int c = 0) {
    return data[(static_cast<size_t>(y) * w + x) * channels + c];
  }

  static Raster filled(int w, int h, int channels, std::uint8_t value) {
    return {w, h, channels,
            std::vector<std::uint8_t>(static_cast<size_t>(w) * h * channels, value)};
  }
};

namespace detail {

/// Thread cap from PERSCAM_THREADS (0 or unset = hardware concurrency).
inline unsigned warp_thread_count() {
  if (const char* env = std::getenv("PERSCAM_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

/// Bilinear sample in float32; out-of-bounds reads use `fill`.
inline float sample_bilinear(const Raster& src, float x, float y, int c, std::uint8_t fill) {
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const float fx = x - static_cast<float>(x0);
  const float fy = y - static_cast<float>(y0);
  auto texel = [&](int xi, int yi) -> float {
    if (xi < 0 || yi < 0 || xi >= src.w || yi >= src.h) return static_cast<float>(fill);
    return static_cast<float>(src.at(xi, yi, c));
  };
  const float top = texel(x0, y0) * (1.0f - fx) + texel(x0 + 1, y0) * fx;
  const float bot = texel(x0, y0 + 1) * (1.0f - fx) + texel(x0 + 1, y0 + 1) * fx;
  return top * (1.0f - fy) + bot * fy;
}

inline std::uint8_t quantize(float v) {
  // round half to even, clamped to [0, 255]
  const float r = std::nearbyintf(v);
  return static_cast<std::uint8_t>(r < 0.0f ? 0.0f : (r > 255.0f ? 255.0f : r));
}

}  // namespace detail

/// Warp `src` by homography M (source -> destination pixels) onto an
/// out_size raster. Deterministic; rows are processed in parallel.
inline Raster warp_image(const Raster& src, const Eigen::Matrix3d& m,
                         const ImageSize& out_size, std::uint8_t fill = 0) {
  if (std::abs(m.determinant()) <= 1e-12)
    throw Error(ErrorCode::SingularHomography, "homography is not invertible");
  const Eigen::Matrix3d minv = m.inverse();

  Raster out = Raster::filled(out_size.w, out_size.h, src.channels, fill);
  auto warp_rows = [&](int y_begin, int y_end) {
    for (int y = y_begin; y < y_end; ++y) {
      for (int x = 0; x < out_size.w; ++x) {
        const Eigen::Vector3d q = minv * Eigen::Vector3d(x, y, 1.0);
        const float sx = static_cast<float>(q.x() / q.z());
        const float sy = static_cast<float>(q.y() / q.z());
        for (int c = 0; c < src.channels; ++c)
          out.at(x, y, c) = detail::quantize(detail::sample_bilinear(src, sx, sy, c, fill));
      }
    }
  };

  const unsigned n_threads =
      std::min<unsigned>(detail::warp_thread_count(), static_cast<unsigned>(out_size.h));
  if (n_threads <= 1) {
    warp_rows(0, out_size.h);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(n_threads);
    const int rows_per = (out_size.h + static_cast<int>(n_threads) - 1) / static_cast<int>(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) {
      const int y0 = static_cast<int>(t) * rows_per;
      const int y1 = std::min(out_size.h, y0 + rows_per);
      if (y0 >= y1) break;
      workers.emplace_back(warp_rows, y0, y1);
    }
    for (auto& w : workers) w.join();
  }
  return out;
}

/// Centered sub-raster of size crop_size.
inline Raster crop_center(const Raster& src, const ImageSize& crop_size) {
  if (crop_size.w > src.w || crop_size.h > src.h)
    throw Error(ErrorCode::InvalidCrop, "crop larger than source");
  const int x0 = (src.w - crop_size.w) / 2;
  const int y0 = (src.h - crop_size.h) / 2;
  Raster out;
  out.w = crop_size.w;
  out.h = crop_size.h;
  out.channels = src.channels;
  out.data.resize(static_cast<size_t>(crop_size.w) * crop_size.h * src.channels);
  for (int y = 0; y < crop_size.h; ++y)
    for (int x = 0; x < crop_size.w; ++x)
      for (int c = 0; c < src.channels; ++c)
        out.at(x, y, c) = src.at(x0 + x, y0 + y, c);
  return out;
}

}  // namespace perscam
