// SPDX-License-Identifier: Apache-2.0
//
// Pose representations and the UVD <-> XYZ conversions. 3D coordinates are
// millimeters in the camera frame, 2D coordinates are pixels. Joint 0 is the
// pelvis (root); relative depth d_i = z_i - z_pelvis.
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "perscam/camera.hpp"
#include "perscam/error.hpp"

namespace perscam {

struct SkeletonJoint {
  std::string name;
  int parent;  // -1 for the root
};

/// Named joint list with parent indices; pelvis is always joint 0.
struct Skeleton {
  std::string id;
  std::vector<SkeletonJoint> joints;

  int size() const { return static_cast<int>(joints.size()); }
};

inline const Skeleton& skeleton_h36m14() {
  static const Skeleton s{
      "h36m14",
      {{"pelvis", -1},
       {"neck", 0},
       {"left_shoulder", 1},
       {"left_elbow", 2},
       {"left_wrist", 3},
       {"right_shoulder", 1},
       {"right_elbow", 5},
       {"right_wrist", 6},
       {"left_hip", 0},
       {"left_knee", 8},
       {"left_ankle", 9},
       {"right_hip", 0},
       {"right_knee", 11},
       {"right_ankle", 12}}};
  return s;
}

inline const Skeleton& skeleton_mpi17() {
  static const Skeleton s{
      "mpi17",
      {{"pelvis", -1},
       {"spine", 0},
       {"thorax", 1},
       {"neck", 2},
       {"head", 3},
       {"left_shoulder", 2},
       {"left_elbow", 5},
       {"left_wrist", 6},
       {"right_shoulder", 2},
       {"right_elbow", 8},
       {"right_wrist", 9},
       {"left_hip", 0},
       {"left_knee", 11},
       {"left_ankle", 12},
       {"right_hip", 0},
       {"right_knee", 14},
       {"right_ankle", 15}}};
  return s;
}

inline const Skeleton& skeleton_by_id(const std::string& id) {
  if (id == "h36m14") return skeleton_h36m14();
  if (id == "mpi17") return skeleton_mpi17();
  throw Error(ErrorCode::ParseError, "unknown skeleton id: " + id);
}

/// 3D joints, camera frame, millimeters.
struct PoseXYZ {
  std::string skeleton;
  std::vector<Eigen::Vector3d> joints;

  const Eigen::Vector3d& pelvis() const { return joints.front(); }
};

/// Per-joint (u, v) crop pixels + relative depth d (mm); pelvis d == 0.
struct PoseUVD {
  std::string skeleton;
  std::vector<Eigen::Vector3d> joints;  // (u, v, d)
};

/// Pelvis absolute depth divided by the cropped focal length, mm/pixel.
struct ScaleFactor {
  double s_hat = 0.0;

  bool valid() const { return std::isfinite(s_hat) && s_hat > 0.0; }
};

inline void require_same_skeleton(const std::string& a, const std::string& b) {
  if (a != b)
    throw Error(ErrorCode::SkeletonMismatch, "skeleton mismatch: " + a + " vs " + b);
}

/// u = f*x/z + cx, v = f*y/z + cy, d = z - z_pelvis.
inline PoseUVD project(const Intrinsics& k, const PoseXYZ& pose) {
  PoseUVD out;
  out.skeleton = pose.skeleton;
  out.joints.reserve(pose.joints.size());
  const double z0 = pose.pelvis().z();
  for (const auto& p : pose.joints) {
    if (p.z() <= 0.0)
      throw Error(ErrorCode::BehindCamera, "joint at or behind the camera plane");
    out.joints.emplace_back(k.f * p.x() / p.z() + k.cx,
                            k.f * p.y() / p.z() + k.cy,
                            p.z() - z0);
  }
  return out;
}

/// P_i = d_i^abs * K^-1 (u_i, v_i, 1)^T with d_i^abs = d_i + s_hat * f.
inline PoseXYZ uvd_to_xyz(const Intrinsics& k_crop, const PoseUVD& uvd,
                          const ScaleFactor& s_hat) {
  PoseXYZ out;
  out.skeleton = uvd.skeleton;
  out.joints.reserve(uvd.joints.size());
  for (const auto& j : uvd.joints) {
    const double d_abs = j.z() + s_hat.s_hat * k_crop.f;
    if (!(d_abs > 0.0))
      throw Error(ErrorCode::BehindCamera, "nonpositive absolute depth");
    out.joints.emplace_back(d_abs * (j.x() - k_crop.cx) / k_crop.f,
                            d_abs * (j.y() - k_crop.cy) / k_crop.f,
                            d_abs);
  }
  return out;
}

inline void require_rotation(const Eigen::Matrix3d& r, double tol = 1e-6) {
  if ((r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > tol ||
      std::abs(r.determinant() - 1.0) > tol)
    throw Error(ErrorCode::InvalidRotation, "matrix is not a rotation");
}

/// P = R^T P' — undoes a previously applied scene rotation.
inline PoseXYZ unrotate_pose(const Eigen::Matrix3d& r, const PoseXYZ& rotated) {
  require_rotation(r);
  PoseXYZ out;
  out.skeleton = rotated.skeleton;
  out.joints.reserve(rotated.joints.size());
  for (const auto& p : rotated.joints) out.joints.emplace_back(r.transpose() * p);
  return out;
}

}  // namespace perscam
