// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "perscam/metrics.hpp"
#include "perscam/persrot.hpp"

using namespace perscam;

namespace {

PoseXYZ random_pose(std::uint64_t seed, int n = 14) {
  PoseXYZ pose;
  pose.skeleton = "h36m14";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-600.0, 600.0);
  for (int i = 0; i < n; ++i)
    pose.joints.emplace_back(coord(rng), coord(rng), coord(rng) + 4000.0);
  return pose;
}

PoseXYZ similarity_transformed(const PoseXYZ& pose, double scale, const Eigen::Matrix3d& r,
                               const Eigen::Vector3d& t) {
  PoseXYZ out;
  out.skeleton = pose.skeleton;
  for (const auto& p : pose.joints) out.joints.emplace_back(scale * (r * p) + t);
  return out;
}

// Coarse independent Procrustes: dense search over rotations (Euler grid)
// with the optimal scale/translation in closed form per candidate. A strict
// upper bound on the optimal PA-MPJPE.
double grid_search_pa_mpjpe(const PoseXYZ& pred, const PoseXYZ& gt, double step_deg) {
  const size_t n = gt.joints.size();
  Eigen::Vector3d mu_p = Eigen::Vector3d::Zero(), mu_g = Eigen::Vector3d::Zero();
  for (size_t i = 0; i < n; ++i) {
    mu_p += pred.joints[i];
    mu_g += gt.joints[i];
  }
  mu_p /= static_cast<double>(n);
  mu_g /= static_cast<double>(n);

  double best = INFINITY;
  const double step = step_deg * M_PI / 180.0;
  for (double a = 0.0; a < 2.0 * M_PI; a += step)
    for (double b = 0.0; b < M_PI; b += step)
      for (double c = 0.0; c < 2.0 * M_PI; c += step) {
        const Eigen::Matrix3d r =
            (Eigen::AngleAxisd(a, Eigen::Vector3d::UnitZ()) *
             Eigen::AngleAxisd(b, Eigen::Vector3d::UnitY()) *
             Eigen::AngleAxisd(c, Eigen::Vector3d::UnitZ()))
                .toRotationMatrix();
        double num = 0.0, den = 0.0;
        for (size_t i = 0; i < n; ++i) {
          const Eigen::Vector3d pc = r * (pred.joints[i] - mu_p);
          num += pc.dot(gt.joints[i] - mu_g);
          den += pc.squaredNorm();
        }
        const double scale = std::max(num / den, 0.0);
        double err = 0.0;
        for (size_t i = 0; i < n; ++i)
          err += (scale * (r * (pred.joints[i] - mu_p)) - (gt.joints[i] - mu_g)).norm();
        best = std::min(best, err / static_cast<double>(n));
      }
  return best;
}

}  // namespace

TEST_CASE("mpjpe: zero for identical poses, translation-invariant") {
  const PoseXYZ gt = random_pose(1);
  CHECK(mpjpe(gt, gt) == 0.0);

  PoseXYZ offset;
  offset.skeleton = gt.skeleton;
  for (const auto& p : gt.joints) offset.joints.emplace_back(p + Eigen::Vector3d(50, -20, 300));
  CHECK(mpjpe(offset, gt) < 1e-9);
}

TEST_CASE("mpjpe: single 30 mm displacement over 14 joints") {
  const PoseXYZ gt = random_pose(2);
  PoseXYZ pred = gt;
  pred.joints[5] += Eigen::Vector3d(0.0, 30.0, 0.0);
  CHECK(mpjpe(pred, gt) == doctest::Approx(30.0 / 14.0).epsilon(1e-12));
}

TEST_CASE("mpjpe: skeleton mismatch is rejected") {
  PoseXYZ a = random_pose(3);
  PoseXYZ b = a;
  b.skeleton = "mpi17";
  CHECK_THROWS_AS(mpjpe(a, b), Error);
}

TEST_CASE("pa_mpjpe: zero under any similarity transform of gt") {
  const PoseXYZ gt = random_pose(4);
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Matrix3d r =
        rodrigues(Eigen::Vector3d(u(rng), u(rng), u(rng)).normalized(), 2.0 * u(rng));
    const PoseXYZ pred = similarity_transformed(
        gt, 0.3 + 2.0 * std::abs(u(rng)), r,
        {1000.0 * u(rng), 1000.0 * u(rng), 1000.0 * u(rng)});
    CHECK(pa_mpjpe(pred, gt) < 1e-9);
  }
}

TEST_CASE("pa_mpjpe: never exceeds mpjpe") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> noise(-80.0, 80.0);
  for (int i = 0; i < 200; ++i) {
    const PoseXYZ gt = random_pose(100 + i);
    PoseXYZ pred = gt;
    for (auto& p : pred.joints) p += Eigen::Vector3d(noise(rng), noise(rng), noise(rng));
    CHECK(pa_mpjpe(pred, gt) <= mpjpe(pred, gt) + 1e-9);
  }
}

TEST_CASE("pa_mpjpe: agrees with the dense rotation-search oracle") {
  const PoseXYZ gt = random_pose(12);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> noise(-40.0, 40.0);
  PoseXYZ pred = gt;
  for (auto& p : pred.joints) p += Eigen::Vector3d(noise(rng), noise(rng), noise(rng));

  const double exact = pa_mpjpe(pred, gt);
  const double searched = grid_search_pa_mpjpe(pred, gt, 12.0);
  CHECK(exact <= searched + 1e-9);    // closed form is optimal
  CHECK(searched - exact < 20.0);     // coarse grid gets close
}

TEST_CASE("pa_mpjpe: collinear ground truth is degenerate") {
  PoseXYZ gt, pred;
  gt.skeleton = pred.skeleton = "h36m14";
  for (int i = 0; i < 14; ++i) {
    gt.joints.emplace_back(0.0, 0.0, 100.0 * i + 1000.0);
    pred.joints.emplace_back(10.0 * i, 5.0 * i, 100.0 * i + 1000.0);
  }
  CHECK_THROWS_AS(pa_mpjpe(pred, gt), Error);
}

TEST_CASE("pck_auc: exact prediction") {
  const PoseXYZ gt = random_pose(14);
  const PckAuc r = pck_auc(gt, gt);
  CHECK(r.pck == 100.0);
  CHECK(r.auc == doctest::Approx(1.0));
}

TEST_CASE("pck_auc: all joints just past the threshold") {
  PoseXYZ gt, pred;
  gt.skeleton = pred.skeleton = "h36m14";
  gt.joints.emplace_back(0.0, 0.0, 1000.0);
  pred.joints.emplace_back(0.0, 0.0, 1000.0);
  for (int i = 1; i < 14; ++i) {
    gt.joints.emplace_back(100.0 * i, 50.0, 2000.0);
    pred.joints.emplace_back(100.0 * i + 150.001, 50.0, 2000.0);
  }
  const PckAuc r = pck_auc(pred, gt);
  // the root is always correct after alignment; all others are out
  CHECK(r.pck == doctest::Approx(100.0 / 14.0).epsilon(1e-12));
}

TEST_CASE("pck_auc: half in, half out") {
  PoseXYZ gt, pred;
  gt.skeleton = pred.skeleton = "h36m14";
  gt.joints.emplace_back(0.0, 0.0, 1000.0);
  pred.joints.emplace_back(0.0, 0.0, 1000.0);
  // 13 non-root joints: 6 at 10 mm error, 7 at 200 mm; root is exact -> 7/14 within 150
  for (int i = 1; i < 14; ++i) {
    gt.joints.emplace_back(100.0 * i, 0.0, 2000.0);
    const double err = (i <= 6) ? 10.0 : 200.0;
    pred.joints.emplace_back(100.0 * i, err, 2000.0);
  }
  const PckAuc r = pck_auc(pred, gt);
  CHECK(r.pck == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("pck_auc: AUC does not decrease when an error shrinks") {
  const PoseXYZ gt = random_pose(15);
  PoseXYZ pred = gt;
  for (auto& p : pred.joints) p += Eigen::Vector3d(60.0, 0.0, 0.0);
  pred.joints[0] = gt.joints[0];  // keep roots aligned
  const double before = pck_auc(pred, gt).auc;
  pred.joints[3] = gt.joints[3] + Eigen::Vector3d(5.0, 0.0, 0.0);
  const double after = pck_auc(pred, gt).auc;
  CHECK(after >= before);
}

TEST_CASE("depth_error: zero, constant, and mixed cases") {
  PoseUVD gt;
  gt.skeleton = "h36m14";
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> u(-300.0, 300.0);
  gt.joints.emplace_back(128.0, 128.0, 0.0);
  for (int i = 1; i < 14; ++i) gt.joints.emplace_back(u(rng), u(rng), u(rng));

  CHECK(depth_error(gt, gt) == 0.0);

  PoseUVD shifted = gt;
  for (size_t i = 1; i < shifted.joints.size(); ++i) shifted.joints[i].z() += 10.0;
  CHECK(depth_error(shifted, gt) == doctest::Approx(10.0).epsilon(1e-12));

  PoseUVD mixed = gt;
  double expected = 0.0;
  std::uniform_real_distribution<double> delta(-50.0, 50.0);
  for (size_t i = 1; i < mixed.joints.size(); ++i) {
    const double d = delta(rng);
    mixed.joints[i].z() += d;
    expected += std::abs(d);
  }
  expected /= 13.0;
  CHECK(depth_error(mixed, gt) == doctest::Approx(expected).epsilon(1e-12));

  PoseUVD wrong = gt;
  wrong.skeleton = "mpi17";
  CHECK_THROWS_AS(depth_error(wrong, gt), Error);
}
