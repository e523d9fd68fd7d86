// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "perscam/scene.hpp"
#include "perscam/serialize.hpp"

using namespace perscam;

namespace {

SceneConfig small_config(std::uint64_t seed, int n) {
  SceneConfig cfg;
  cfg.seed = seed;
  cfg.n_samples = n;
  return cfg;
}

PoseXYZ local_rest(const std::string& id) {
  PoseXYZ pose;
  pose.skeleton = id;
  pose.joints = detail::rest_pose(skeleton_by_id(id));
  return pose;
}

// rest pose turned about the vertical axis so it has real depth structure
PoseXYZ posed_subject(const std::string& id, double yaw = 0.7) {
  PoseXYZ pose = local_rest(id);
  const Eigen::Matrix3d r = rodrigues({0.0, 1.0, 0.0}, yaw);
  for (auto& j : pose.joints) j = r * j;
  return pose;
}

}  // namespace

TEST_CASE("generate: deterministic for a fixed seed") {
  const auto a = generate(small_config(123, 20));
  const auto b = generate(small_config(123, 20));
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i)
    CHECK(to_json(a[i]).dump() == to_json(b[i]).dump());

  const auto c = generate(small_config(124, 20));
  CHECK(to_json(a[0]).dump() != to_json(c[0]).dump());
}

TEST_CASE("make_sample: subject symmetric about the optical axis has phi exactly zero") {
  const Intrinsics k{1000.0, 960.0, 540.0};
  PoseXYZ pose;
  pose.skeleton = "h36m14";
  // pelvis plus one extra joint on the axis, then six point-symmetric pairs;
  // f == z makes every projection exact, so the bbox center is exactly the
  // principal point
  pose.joints.emplace_back(0.0, 0.0, 1000.0);
  pose.joints.emplace_back(0.0, 0.0, 1250.0);
  const double pairs[6][2] = {{100, 100}, {200, -50}, {300, 150},
                              {150, -200}, {50, 250}, {250, 25}};
  for (const auto& p : pairs) {
    pose.joints.emplace_back(p[0], p[1], 1000.0);
    pose.joints.emplace_back(-p[0], -p[1], 1000.0);
  }
  REQUIRE(pose.joints.size() == 14);

  const Sample s = make_sample(pose, k, {1920, 1080}, {256, 256});
  CHECK(s.rotation.phi == 0.0);
  CHECK((s.rotation.M - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("generate: every sample passes the consistency suite") {
  const auto samples = generate(small_config(7, 200));
  REQUIRE(samples.size() == 200);
  for (const auto& s : samples) {
    CHECK(sample_roundtrip_error_mm(s) <= 1e-6);

    // PR centering
    const Eigen::Vector2d mapped = apply_homography(s.rotation.M, {s.bbox.cu, s.bbox.cv});
    CHECK(std::abs(mapped.x() - s.image_size.w / 2.0) < 1e-6);
    CHECK(std::abs(mapped.y() - s.image_size.h / 2.0) < 1e-6);

    // homography / projection consistency per joint
    const PoseXYZ rotated = rotate_pose(s.rotation.R, s.pose_xyz);
    const PoseUVD uvd_rot = project(s.intrinsics, rotated);
    for (size_t j = 0; j < s.pose_uvd.joints.size(); ++j) {
      const Eigen::Vector2d via_m =
          apply_homography(s.rotation.M, s.pose_uvd.joints[j].head<2>());
      CHECK((via_m - uvd_rot.joints[j].head<2>()).cwiseAbs().maxCoeff() < 1e-7);
    }

    // bbox is the square-expanded tight bound: all joints inside
    for (const auto& j : s.pose_uvd.joints) {
      CHECK(j.x() >= s.bbox.cu - s.bbox.w / 2.0 - 1e-9);
      CHECK(j.x() <= s.bbox.cu + s.bbox.w / 2.0 + 1e-9);
      CHECK(j.y() >= s.bbox.cv - s.bbox.h / 2.0 - 1e-9);
      CHECK(j.y() <= s.bbox.cv + s.bbox.h / 2.0 + 1e-9);
    }

    CHECK(s.s_hat.valid());
    CHECK(s.pose_uvd.joints[0].z() == 0.0);
    CHECK(s.pose_uvd_crop.joints[0].z() == 0.0);
  }
}

TEST_CASE("generate: invalid config is rejected") {
  SceneConfig cfg = small_config(1, 0);
  CHECK_THROWS_AS(generate(cfg), Error);
}

TEST_CASE("shared_depth_pair: degenerate pair with equal cameras is identical") {
  const auto [a, b] = shared_depth_pair(local_rest("h36m14"), 800.0, 800.0, {1920, 1080});
  CHECK(to_json(a).dump() == to_json(b).dump());
}

TEST_CASE("shared_depth_pair: equal relative depths, different FOV, different 2D labels") {
  const auto [a, b] = shared_depth_pair(posed_subject("h36m14"), 500.0, 1000.0, {1920, 1080});

  // bitwise-equal depth vectors
  for (size_t i = 0; i < a.pose_uvd.joints.size(); ++i)
    CHECK(a.pose_uvd.joints[i].z() == b.pose_uvd.joints[i].z());

  const Fov fov_a = fov(a.intrinsics, a.image_size);
  const Fov fov_b = fov(b.intrinsics, b.image_size);
  CHECK(fov_a.x != fov_b.x);

  double max_px_diff = 0.0;
  for (size_t i = 0; i < a.pose_uvd.joints.size(); ++i)
    max_px_diff = std::max(
        max_px_diff,
        (a.pose_uvd.joints[i].head<2>() - b.pose_uvd.joints[i].head<2>()).cwiseAbs().maxCoeff());
  CHECK(max_px_diff >= 1.0);
}

TEST_CASE("crop_ambiguity_presets: (a)/(b) share the crop, (a)/(c) share the depths") {
  const Intrinsics k{1100.0, 960.0, 540.0};
  const auto presets = crop_ambiguity_presets(local_rest("h36m14"), k, {1920, 1080});
  const auto& a = presets[0];
  const auto& b = presets[1];
  const auto& c = presets[2];

  // (a) vs (b): near-identical cropped labels, different relative depths
  double max_uv = 0.0, max_d = 0.0;
  for (size_t i = 0; i < a.pose_uvd_crop.joints.size(); ++i) {
    max_uv = std::max(max_uv, (a.pose_uvd_crop.joints[i].head<2>() -
                               b.pose_uvd_crop.joints[i].head<2>()).cwiseAbs().maxCoeff());
    max_d = std::max(max_d, std::abs(a.pose_uvd.joints[i].z() - b.pose_uvd.joints[i].z()));
  }
  CHECK(max_uv <= 0.5);
  CHECK(max_d > 10.0);

  // (a) vs (c): identical relative depths, visibly different cropped labels
  double max_d_ac = 0.0, max_uv_ac = 0.0;
  for (size_t i = 0; i < a.pose_uvd.joints.size(); ++i) {
    max_d_ac = std::max(max_d_ac, std::abs(a.pose_uvd.joints[i].z() - c.pose_uvd.joints[i].z()));
    max_uv_ac = std::max(max_uv_ac, (a.pose_uvd_crop.joints[i].head<2>() -
                                     c.pose_uvd_crop.joints[i].head<2>()).cwiseAbs().maxCoeff());
  }
  CHECK(max_d_ac == 0.0);
  CHECK(max_uv_ac > 0.5);
}

TEST_CASE("phi_statistics: concentrated angles put the KDE mode on target") {
  std::vector<double> phis;
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> jitter(-0.5, 0.5);
  for (int i = 0; i < 500; ++i) phis.push_back(5.0 + jitter(rng));

  const PhiStatistics stats = phi_statistics(phis);
  CHECK(std::abs(stats.kde.mode_deg() - 5.0) < 1.0);
  CHECK(stats.kde.trapezoid_integral() == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("phi_statistics: all-centered samples collapse to one bin at zero") {
  const std::vector<double> phis(50, 0.0);
  const PhiStatistics stats = phi_statistics(phis);
  REQUIRE(stats.histogram.counts.size() == 1);
  CHECK(stats.histogram.counts[0] == 50);
  CHECK(stats.histogram.origin_deg == 0.0);
}

TEST_CASE("phi_statistics: histogram density sums to one") {
  std::vector<double> phis;
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(0.0, 30.0);
  for (int i = 0; i < 400; ++i) phis.push_back(u(rng));
  const PhiStatistics stats = phi_statistics(phis);
  double total = 0.0;
  for (size_t i = 0; i < stats.histogram.counts.size(); ++i)
    total += stats.histogram.density(i) * stats.histogram.bin_width_deg;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("phi_statistics: rejects fewer than two samples") {
  CHECK_THROWS_AS(phi_statistics({}), Error);
  CHECK_THROWS_AS(phi_statistics({1.0}), Error);
}

TEST_CASE("phi_degrees extracts rotation angles") {
  const auto samples = generate(small_config(5, 10));
  const auto phis = phi_degrees(samples);
  REQUIRE(phis.size() == samples.size());
  for (size_t i = 0; i < phis.size(); ++i)
    CHECK(phis[i] == doctest::Approx(samples[i].rotation.phi * 180.0 / M_PI));
}
