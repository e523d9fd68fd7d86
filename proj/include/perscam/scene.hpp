// SPDX-License-Identifier: Apache-2.0
//
// Synthetic-scene oracle: seeded generation of stick-figure poses and
// cameras with ground-truth labels for every pipeline stage, plus the
// rotation-angle distribution statistics.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "perscam/camera.hpp"
#include "perscam/error.hpp"
#include "perscam/pemap.hpp"
#include "perscam/persrot.hpp"
#include "perscam/pose.hpp"

namespace perscam {

struct SceneConfig {
  std::uint64_t seed = 0;
  int n_samples = 1;
  double f_min = 400.0, f_max = 1500.0;          // pixels
  ImageSize image_size{1920, 1080};
  double distance_min = 2500.0, distance_max = 6000.0;  // mm, pelvis depth
  double offset_max = 1200.0;                    // mm, lateral placement
  std::string skeleton = "h36m14";
  ImageSize crop_size{256, 256};
  double padding = 1.0;

  bool valid() const {
    return n_samples >= 1 && f_min > 0 && f_max >= f_min && image_size.valid() &&
           distance_min > 0 && distance_max >= distance_min && offset_max >= 0 &&
           crop_size.valid() && padding >= 1.0;
  }
};

/// One oracle sample: the scene ground truth and every derived label of the
/// preprocessing pipeline, mutually consistent by construction.
struct Sample {
  PoseXYZ pose_xyz;          // original camera frame
  Intrinsics intrinsics;     // K of the original image
  ImageSize image_size;
  BBox bbox;                 // square-expanded bbox in the original image
  PoseUVD pose_uvd;          // labels in the original image
  RotationResult rotation;   // PR rotation and homography
  BBox bbox_rotated;         // bbox after PR, square-expanded
  Intrinsics crop_intr;      // K^crop of the centered crop
  PoseUVD pose_uvd_crop;     // labels in the centered-crop frame
  ScaleFactor s_hat;         // pelvis depth after PR / f^crop
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// mt19937_64 with portable uniform draws (std::uniform_real_distribution is
/// not bit-specified across implementations).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::mt19937_64 engine_;
};

/// Rest-pose joint positions (mm, pelvis origin, y down) for a skeleton.
inline std::vector<Eigen::Vector3d> rest_pose(const Skeleton& skel) {
  auto v = [](double x, double y, double z) { return Eigen::Vector3d(x, y, z); };
  if (skel.id == "h36m14") {
    return {v(0, 0, 0),        v(0, -520, 0),
            v(180, -520, 0),   v(440, -520, 0),  v(690, -520, 0),
            v(-180, -520, 0),  v(-440, -520, 0), v(-690, -520, 0),
            v(100, 0, 0),      v(100, 430, 30),  v(100, 860, 0),
            v(-100, 0, 0),     v(-100, 430, 30), v(-100, 860, 0)};
  }
  if (skel.id == "mpi17") {
    return {v(0, 0, 0),        v(0, -260, 20),   v(0, -450, 10),  v(0, -540, 0),
            v(0, -660, 20),
            v(180, -450, 0),   v(440, -450, 0),  v(690, -450, 0),
            v(-180, -450, 0),  v(-440, -450, 0), v(-690, -450, 0),
            v(100, 0, 0),      v(100, 430, 30),  v(100, 860, 0),
            v(-100, 0, 0),     v(-100, 430, 30), v(-100, 860, 0)};
  }
  throw Error(ErrorCode::ParseError, "no rest pose for skeleton " + skel.id);
}

/// Random articulation: yaw about the vertical axis plus per-joint jitter.
inline PoseXYZ random_local_pose(const Skeleton& skel, Rng& rng) {
  PoseXYZ pose;
  pose.skeleton = skel.id;
  const auto rest = rest_pose(skel);
  const double yaw = rng.uniform(0.0, 2.0 * M_PI);
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  pose.joints.reserve(rest.size());
  for (const auto& p : rest) {
    const Eigen::Vector3d r(cy * p.x() + sy * p.z(), p.y(), -sy * p.x() + cy * p.z());
    pose.joints.emplace_back(r.x() + rng.uniform(-60.0, 60.0),
                             r.y() + rng.uniform(-60.0, 60.0),
                             r.z() + rng.uniform(-60.0, 60.0));
  }
  // keep the pelvis at the local origin so placement controls depth exactly
  const Eigen::Vector3d pelvis = pose.joints.front();
  for (auto& p : pose.joints) p -= pelvis;
  return pose;
}

inline PoseXYZ translated(const PoseXYZ& local, const Eigen::Vector3d& t) {
  PoseXYZ out;
  out.skeleton = local.skeleton;
  out.joints.reserve(local.joints.size());
  for (const auto& p : local.joints) out.joints.emplace_back(p + t);
  return out;
}

inline BBox tight_bbox(const PoseUVD& uvd) {
  double umin = INFINITY, umax = -INFINITY, vmin = INFINITY, vmax = -INFINITY;
  for (const auto& j : uvd.joints) {
    umin = std::min(umin, j.x());
    umax = std::max(umax, j.x());
    vmin = std::min(vmin, j.y());
    vmax = std::max(vmax, j.y());
  }
  return {(umin + umax) / 2.0, (vmin + vmax) / 2.0, umax - umin, vmax - vmin};
}

inline bool inside_image(const PoseUVD& uvd, const ImageSize& size) {
  for (const auto& j : uvd.joints)
    if (j.x() < 0.0 || j.x() >= size.w || j.y() < 0.0 || j.y() >= size.h) return false;
  return true;
}

}  // namespace detail

/// Build the full label set for a pose observed by camera K. Throws
/// InfeasibleScene if a joint is behind the camera or outside the image.
inline Sample make_sample(const PoseXYZ& pose, const Intrinsics& k, const ImageSize& size,
                          const ImageSize& crop_size, double padding = 1.0) {
  Sample s;
  s.pose_xyz = pose;
  s.intrinsics = k;
  s.image_size = size;
  for (const auto& p : pose.joints)
    if (p.z() <= 0.0) throw Error(ErrorCode::InfeasibleScene, "joint behind camera");
  s.pose_uvd = project(k, pose);
  if (!detail::inside_image(s.pose_uvd, size))
    throw Error(ErrorCode::InfeasibleScene, "subject outside the view frustum");
  s.bbox = square_expand(detail::tight_bbox(s.pose_uvd), padding);
  s.rotation = rotation_to_center(k, s.bbox);
  s.bbox_rotated = square_expand(map_bbox(s.rotation.M, s.bbox));
  const CropAffine a = crop_affine(s.bbox_rotated, crop_size);
  s.crop_intr = crop_intrinsics(k, a);
  const PoseXYZ rotated = rotate_pose(s.rotation.R, pose);
  s.pose_uvd_crop = project(s.crop_intr, rotated);
  s.s_hat = ScaleFactor{rotated.pelvis().z() / s.crop_intr.f};
  return s;
}

/// Consistency self-check used at generation time and by tests.
inline double sample_roundtrip_error_mm(const Sample& s) {
  const PoseXYZ rotated = uvd_to_xyz(s.crop_intr, s.pose_uvd_crop, s.s_hat);
  const PoseXYZ recovered = unrotate_pose(s.rotation.R, rotated);
  double worst = 0.0;
  for (size_t i = 0; i < recovered.joints.size(); ++i)
    worst = std::max(worst, (recovered.joints[i] - s.pose_xyz.joints[i]).norm());
  return worst;
}

/// Deterministic per seed; each sample draws from its own counter-derived
/// stream, so parallel generation cannot change the output.
inline std::vector<Sample> generate(const SceneConfig& cfg) {
  if (!cfg.valid()) throw Error(ErrorCode::ParseError, "invalid scene config");
  const Skeleton& skel = skeleton_by_id(cfg.skeleton);
  std::vector<Sample> out;
  out.reserve(static_cast<size_t>(cfg.n_samples));
  for (int i = 0; i < cfg.n_samples; ++i) {
    detail::Rng rng(detail::splitmix64(cfg.seed + static_cast<std::uint64_t>(i)));
    const int max_retries = 200;
    bool ok = false;
    for (int attempt = 0; attempt < max_retries && !ok; ++attempt) {
      const double f = rng.uniform(cfg.f_min, cfg.f_max);
      const Intrinsics k{f, cfg.image_size.w / 2.0, cfg.image_size.h / 2.0};
      const PoseXYZ local = detail::random_local_pose(skel, rng);
      const Eigen::Vector3d t(rng.uniform(-cfg.offset_max, cfg.offset_max),
                              rng.uniform(-cfg.offset_max, cfg.offset_max),
                              rng.uniform(cfg.distance_min, cfg.distance_max));
      try {
        Sample s = make_sample(detail::translated(local, t), k, cfg.image_size,
                               cfg.crop_size, cfg.padding);
        if (sample_roundtrip_error_mm(s) > 1e-6)
          throw Error(ErrorCode::InfeasibleScene, "self-consistency check failed");
        out.push_back(std::move(s));
        ok = true;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::InfeasibleScene && e.code() != ErrorCode::BehindCamera)
          throw;
      }
    }
    if (!ok)
      throw Error(ErrorCode::InfeasibleScene,
                  "could not place subject inside the frustum after bounded retries");
  }
  return out;
}

/// Two cameras on a shared optical axis observing the same local pose, with
/// distances scaled like the focal lengths so the subject spans the same
/// pixel extent. Coordinates are snapped to a 2^-10 mm grid and distances to
/// the same grid, which makes the relative-depth vectors bitwise equal while
/// the fields of view differ.
inline std::pair<Sample, Sample> shared_depth_pair(const PoseXYZ& local_pose, double f_a, double f_b,
                                           const ImageSize& size,
                                           const ImageSize& crop_size = {256, 256},
                                           double distance_a = 4096.0) {
  auto snap = [](double v) { return std::round(v * 1024.0) / 1024.0; };
  PoseXYZ local;
  local.skeleton = local_pose.skeleton;
  const Eigen::Vector3d pelvis = local_pose.joints.front();
  for (const auto& p : local_pose.joints)
    local.joints.emplace_back(snap(p.x() - pelvis.x()), snap(p.y() - pelvis.y()),
                              snap(p.z() - pelvis.z()));
  const double z_a = snap(distance_a);
  const double z_b = snap(distance_a * f_b / f_a);
  const Intrinsics k_a{f_a, size.w / 2.0, size.h / 2.0};
  const Intrinsics k_b{f_b, size.w / 2.0, size.h / 2.0};
  return {make_sample(detail::translated(local, {0, 0, z_a}), k_a, size, crop_size),
          make_sample(detail::translated(local, {0, 0, z_b}), k_b, size, crop_size)};
}

/// One of the three subject placements of the crop-ambiguity thought
/// experiment, with naive (rotation-free) crop labels.
struct CropAmbiguityPreset {
  PoseXYZ pose;
  PoseUVD pose_uvd;       // original image frame
  BBox bbox;              // square-expanded
  CropAffine affine;      // naive bbox crop
  Intrinsics crop_intr;   // A*K of the naive crop
  PoseUVD pose_uvd_crop;  // labels in the naive crop
};

namespace detail {

inline CropAmbiguityPreset make_crop_ambiguity_preset(const PoseXYZ& pose, const Intrinsics& k,
                                   const ImageSize& size, const ImageSize& crop_size) {
  CropAmbiguityPreset p;
  p.pose = pose;
  p.pose_uvd = project(k, pose);
  if (!inside_image(p.pose_uvd, size))
    throw Error(ErrorCode::InfeasibleScene, "subject outside the view frustum");
  p.bbox = square_expand(tight_bbox(p.pose_uvd));
  p.affine = crop_affine(p.bbox, crop_size);
  p.crop_intr = crop_intrinsics(k, p.affine);
  p.pose_uvd_crop = project(p.crop_intr, pose);
  return p;
}

}  // namespace detail

/// Presets (a), (b), (c): (b) scales (a) by `depth_scale` along the camera
/// rays (same image, different relative depths); (c) translates (a)
/// laterally by `lateral_offset_mm` (same relative depths, different crop).
inline std::array<CropAmbiguityPreset, 3> crop_ambiguity_presets(const PoseXYZ& local_pose, const Intrinsics& k,
                                              const ImageSize& size,
                                              const ImageSize& crop_size = {256, 256},
                                              double distance_mm = 4000.0,
                                              double depth_scale = 1.5,
                                              double lateral_offset_mm = 1500.0) {
  PoseXYZ local;
  local.skeleton = local_pose.skeleton;
  const Eigen::Vector3d pelvis = local_pose.joints.front();
  for (const auto& p : local_pose.joints) local.joints.emplace_back(p - pelvis);

  const PoseXYZ pose_a = detail::translated(local, {0, 0, distance_mm});
  PoseXYZ pose_b;
  pose_b.skeleton = local.skeleton;
  for (const auto& p : pose_a.joints) pose_b.joints.emplace_back(depth_scale * p);
  PoseXYZ pose_c;
  pose_c.skeleton = local.skeleton;
  for (const auto& p : pose_a.joints)
    pose_c.joints.emplace_back(p + Eigen::Vector3d(lateral_offset_mm, 0.0, 0.0));

  return {detail::make_crop_ambiguity_preset(pose_a, k, size, crop_size),
          detail::make_crop_ambiguity_preset(pose_b, k, size, crop_size),
          detail::make_crop_ambiguity_preset(pose_c, k, size, crop_size)};
}

struct PhiHistogram {
  double bin_width_deg = 1.0;
  double origin_deg = 0.0;                 // left edge of bin 0
  std::vector<std::size_t> counts;
  std::size_t total = 0;

  double density(std::size_t bin) const {
    return static_cast<double>(counts[bin]) /
           (static_cast<double>(total) * bin_width_deg);
  }
};

struct KdeCurve {
  std::vector<double> angle_deg;
  std::vector<double> density;
  double bandwidth_deg = 0.0;

  double trapezoid_integral() const {
    double acc = 0.0;
    for (size_t i = 1; i < angle_deg.size(); ++i)
      acc += 0.5 * (density[i - 1] + density[i]) * (angle_deg[i] - angle_deg[i - 1]);
    return acc;
  }

  double mode_deg() const {
    size_t best = 0;
    for (size_t i = 1; i < density.size(); ++i)
      if (density[i] > density[best]) best = i;
    return angle_deg[best];
  }
};

struct PhiStatistics {
  PhiHistogram histogram;
  KdeCurve kde;
};

/// Histogram plus Gaussian-kernel KDE of the PR angles, in degrees.
/// Bandwidth defaults to Scott's rule, sigma * n^(-1/5).
inline PhiStatistics phi_statistics(const std::vector<double>& phi_deg,
                                    std::optional<double> bandwidth_deg = std::nullopt,
                                    double bin_width_deg = 1.0) {
  if (phi_deg.size() < 2)
    throw Error(ErrorCode::ParseError, "phi statistics need at least two samples");
  const size_t n = phi_deg.size();
  double lo = INFINITY, hi = -INFINITY, mean = 0.0;
  for (double v : phi_deg) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    mean += v;
  }
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : phi_deg) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);

  PhiStatistics out;
  out.histogram.bin_width_deg = bin_width_deg;
  out.histogram.origin_deg = std::floor(lo / bin_width_deg) * bin_width_deg;
  const size_t n_bins = static_cast<size_t>(
      std::floor((hi - out.histogram.origin_deg) / bin_width_deg)) + 1;
  out.histogram.counts.assign(n_bins, 0);
  out.histogram.total = n;
  for (double v : phi_deg) {
    size_t bin = static_cast<size_t>((v - out.histogram.origin_deg) / bin_width_deg);
    if (bin >= n_bins) bin = n_bins - 1;
    ++out.histogram.counts[bin];
  }

  double h = bandwidth_deg.value_or(std::sqrt(var) *
                                    std::pow(static_cast<double>(n), -0.2));
  if (!(h > 0.0)) h = 1e-6;  // degenerate all-equal input
  out.kde.bandwidth_deg = h;
  const double grid_lo = lo - 5.0 * h;
  const double grid_hi = hi + 5.0 * h;
  size_t n_grid = std::max<size_t>(512, static_cast<size_t>((grid_hi - grid_lo) / (h / 4.0)));
  n_grid = std::min<size_t>(n_grid, 1 << 15);
  out.kde.angle_deg.resize(n_grid);
  out.kde.density.resize(n_grid);
  const double step = (grid_hi - grid_lo) / static_cast<double>(n_grid - 1);
  const double norm = 1.0 / (static_cast<double>(n) * h * std::sqrt(2.0 * M_PI));
  for (size_t i = 0; i < n_grid; ++i) {
    const double x = grid_lo + step * static_cast<double>(i);
    double acc = 0.0;
    for (double v : phi_deg) {
      const double t = (x - v) / h;
      acc += std::exp(-0.5 * t * t);
    }
    out.kde.angle_deg[i] = x;
    out.kde.density[i] = norm * acc;
  }
  return out;
}

inline std::vector<double> phi_degrees(const std::vector<Sample>& samples) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.rotation.phi * 180.0 / M_PI);
  return out;
}

}  // namespace perscam
