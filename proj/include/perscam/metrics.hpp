// SPDX-License-Identifier: Apache-2.0
//
// Pose evaluation metrics: MPJPE (root-aligned), PA-MPJPE (optimal similarity
// alignment), PCK/AUC, and mean absolute relative-depth error. All distances
// in millimeters.
#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "perscam/error.hpp"
#include "perscam/pose.hpp"

namespace perscam {

struct EvalReport {
  double mpjpe_mm = 0.0;
  double pa_mpjpe_mm = 0.0;
  double pck_percent = 0.0;
  double auc = 0.0;
  double depth_error_mm = 0.0;
};

namespace detail {

inline Eigen::Matrix3Xd root_aligned(const PoseXYZ& pose) {
  Eigen::Matrix3Xd m(3, pose.joints.size());
  for (size_t i = 0; i < pose.joints.size(); ++i)
    m.col(static_cast<Eigen::Index>(i)) = pose.joints[i] - pose.pelvis();
  return m;
}

inline std::vector<double> joint_errors(const Eigen::Matrix3Xd& a, const Eigen::Matrix3Xd& b) {
  std::vector<double> errs(static_cast<size_t>(a.cols()));
  for (Eigen::Index i = 0; i < a.cols(); ++i) errs[static_cast<size_t>(i)] = (a.col(i) - b.col(i)).norm();
  return errs;
}

}  // namespace detail

/// Mean per-joint Euclidean error after pelvis alignment.
inline double mpjpe(const PoseXYZ& pred, const PoseXYZ& gt) {
  require_same_skeleton(pred.skeleton, gt.skeleton);
  const auto p = detail::root_aligned(pred);
  const auto g = detail::root_aligned(gt);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p.cols(); ++i) sum += (p.col(i) - g.col(i)).norm();
  return sum / static_cast<double>(p.cols());
}

/// MPJPE after the optimal similarity alignment (rotation + translation +
/// uniform scale) of pred onto gt — the orthogonal Procrustes solution.
inline double pa_mpjpe(const PoseXYZ& pred, const PoseXYZ& gt) {
  require_same_skeleton(pred.skeleton, gt.skeleton);
  const Eigen::Index n = static_cast<Eigen::Index>(gt.joints.size());
  Eigen::Matrix3Xd p(3, n), g(3, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    p.col(i) = pred.joints[static_cast<size_t>(i)];
    g.col(i) = gt.joints[static_cast<size_t>(i)];
  }
  const Eigen::Vector3d mu_p = p.rowwise().mean();
  const Eigen::Vector3d mu_g = g.rowwise().mean();
  const Eigen::Matrix3Xd pc = p.colwise() - mu_p;
  const Eigen::Matrix3Xd gc = g.colwise() - mu_g;

  const double var_p = pc.squaredNorm();
  if (var_p < 1e-12)
    throw Error(ErrorCode::AlignmentDegenerate, "prediction has no spatial extent");
  const Eigen::Matrix3d cov = gc * pc.transpose();
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues()(1) < 1e-9 * svd.singularValues()(0))
    throw Error(ErrorCode::AlignmentDegenerate, "collinear joints, alignment underdetermined");
  Eigen::Matrix3d s = Eigen::Matrix3d::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) s(2, 2) = -1.0;
  const Eigen::Matrix3d r = svd.matrixU() * s * svd.matrixV().transpose();
  const double scale = (svd.singularValues().asDiagonal() * s).trace() / var_p;

  const Eigen::Matrix3Xd aligned = (scale * (r * pc)).colwise() + mu_g;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) sum += (aligned.col(i) - g.col(i)).norm();
  return sum / static_cast<double>(n);
}

struct PckAuc {
  double pck = 0.0;  // percent, at `threshold`
  double auc = 0.0;  // mean PCK over thresholds 0..threshold in `step` increments
};

/// Root-aligned PCK at `threshold_mm` plus AUC over the 0..threshold sweep.
inline PckAuc pck_auc(const PoseXYZ& pred, const PoseXYZ& gt,
                      double threshold_mm = 150.0, double step_mm = 5.0) {
  require_same_skeleton(pred.skeleton, gt.skeleton);
  const auto errs = detail::joint_errors(detail::root_aligned(pred), detail::root_aligned(gt));
  auto pck_at = [&](double t) {
    size_t ok = 0;
    for (double e : errs) ok += (e <= t) ? 1 : 0;
    return 100.0 * static_cast<double>(ok) / static_cast<double>(errs.size());
  };
  PckAuc out;
  out.pck = pck_at(threshold_mm);
  int n_steps = 0;
  double acc = 0.0;
  for (double t = 0.0; t <= threshold_mm + 1e-9; t += step_mm) {
    acc += pck_at(t);
    ++n_steps;
  }
  out.auc = acc / (100.0 * n_steps);
  return out;
}

/// Mean |d_pred - d_gt| over non-root joints.
inline double depth_error(const PoseUVD& pred, const PoseUVD& gt) {
  require_same_skeleton(pred.skeleton, gt.skeleton);
  if (pred.joints.size() != gt.joints.size())
    throw Error(ErrorCode::SkeletonMismatch, "joint count mismatch");
  double sum = 0.0;
  for (size_t i = 1; i < gt.joints.size(); ++i)
    sum += std::abs(pred.joints[i].z() - gt.joints[i].z());
  return sum / static_cast<double>(gt.joints.size() - 1);
}

inline EvalReport evaluate(const PoseXYZ& pred, const PoseXYZ& gt) {
  EvalReport rep;
  rep.mpjpe_mm = mpjpe(pred, gt);
  rep.pa_mpjpe_mm = pa_mpjpe(pred, gt);
  const PckAuc pa = pck_auc(pred, gt);
  rep.pck_percent = pa.pck;
  rep.auc = pa.auc;
  return rep;
}

}  // namespace perscam
