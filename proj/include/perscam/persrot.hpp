// SPDX-License-Identifier: Apache-2.0
//
// Perspective Rotation: the camera-center rotation that brings the subject's
// bbox center onto the optical axis, its axis/angle form, and the image-space
// homography M = K R K^-1 that realizes it on pixels.
#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "perscam/camera.hpp"
#include "perscam/error.hpp"
#include "perscam/pose.hpp"

namespace perscam {

struct RotationResult {
  Eigen::Matrix3d R;     // scene rotation about the optical center
  Eigen::Vector3d axis;  // unit rotation axis n
  double phi = 0.0;      // radians, in [0, pi)
  Eigen::Matrix3d M;     // pixel homography K R K^-1, M(2,2) == 1
};

/// Rodrigues: R = cos(phi) I + sin(phi) [n]_x + (1 - cos(phi)) n n^T.
inline Eigen::Matrix3d rodrigues(const Eigen::Vector3d& axis, double phi) {
  const Eigen::Vector3d n = axis.normalized();
  Eigen::Matrix3d nx;
  nx << 0.0, -n.z(), n.y(),
        n.z(), 0.0, -n.x(),
        -n.y(), n.x(), 0.0;
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return c * Eigen::Matrix3d::Identity() + s * nx + (1.0 - c) * (n * n.transpose());
}

/// (x_c, y_c, 1)^T = K^-1 (c_u, c_v, 1)^T — the bbox center on the z=1 plane.
inline Eigen::Vector3d unproject_center(const Intrinsics& k, const BBox& bbox) {
  return {(bbox.cu - k.cx) / k.f, (bbox.cv - k.cy) / k.f, 1.0};
}

/// M = K R K^-1, normalized to M(2,2) = 1.
inline Eigen::Matrix3d warp_homography(const Intrinsics& k, const Eigen::Matrix3d& r) {
  require_rotation(r);
  Eigen::Matrix3d m = k.matrix() * r * k.inverse();
  if (m(2, 2) != 0.0) m /= m(2, 2);
  return m;
}

/// Rotation taking (x_c, y_c, 1) onto (0, 0, d), d = ||(x_c, y_c, 1)||.
/// phi = arccos(1/d); n = (x_c,y_c,1) x z, normalized. On-axis centers give
/// the identity with n = (1,0,0) by convention.
inline RotationResult rotation_to_center(const Intrinsics& k, const BBox& bbox) {
  const Eigen::Vector3d ray = unproject_center(k, bbox);
  RotationResult out;
  if (ray.head<2>().norm() < 1e-12) {
    out.R = Eigen::Matrix3d::Identity();
    out.axis = Eigen::Vector3d(1.0, 0.0, 0.0);
    out.phi = 0.0;
    out.M = Eigen::Matrix3d::Identity();
    return out;
  }
  const double d = ray.norm();
  out.axis = ray.cross(Eigen::Vector3d::UnitZ()).normalized();
  out.phi = std::acos(std::clamp(1.0 / d, -1.0, 1.0));
  out.R = rodrigues(out.axis, out.phi);
  out.M = warp_homography(k, out.R);
  return out;
}

/// P' = R P, applied per joint.
inline PoseXYZ rotate_pose(const Eigen::Matrix3d& r, const PoseXYZ& pose) {
  require_rotation(r);
  PoseXYZ out;
  out.skeleton = pose.skeleton;
  out.joints.reserve(pose.joints.size());
  for (const auto& p : pose.joints) out.joints.emplace_back(r * p);
  return out;
}

inline Eigen::Vector2d hom_normalize(const Eigen::Vector3d& p) {
  return p.head<2>() / p.z();
}

inline Eigen::Vector2d apply_homography(const Eigen::Matrix3d& m, const Eigen::Vector2d& p) {
  return hom_normalize(m * Eigen::Vector3d(p.x(), p.y(), 1.0));
}

/// Axis-aligned bounds of the four bbox corners mapped through M.
inline BBox map_bbox(const Eigen::Matrix3d& m, const BBox& bbox) {
  const double hw = bbox.w / 2.0, hh = bbox.h / 2.0;
  const Eigen::Vector2d corners[4] = {
      {bbox.cu - hw, bbox.cv - hh}, {bbox.cu + hw, bbox.cv - hh},
      {bbox.cu - hw, bbox.cv + hh}, {bbox.cu + hw, bbox.cv + hh}};
  double umin = INFINITY, umax = -INFINITY, vmin = INFINITY, vmax = -INFINITY;
  for (const auto& c : corners) {
    const Eigen::Vector2d q = apply_homography(m, c);
    umin = std::min(umin, q.x());
    umax = std::max(umax, q.x());
    vmin = std::min(vmin, q.y());
    vmax = std::max(vmax, q.y());
  }
  return {(umin + umax) / 2.0, (vmin + vmax) / 2.0, umax - umin, vmax - vmin};
}

}  // namespace perscam
