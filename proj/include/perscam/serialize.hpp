// SPDX-License-Identifier: Apache-2.0
//
// File formats: JSON schemas for geometry types, the PEMAP binary raster,
// JSON-lines sample manifests, and CSV emission for the phi statistics.
#pragma once

#include <bit>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "perscam/camera.hpp"
#include "perscam/error.hpp"
#include "perscam/metrics.hpp"
#include "perscam/pemap.hpp"
#include "perscam/persrot.hpp"
#include "perscam/pose.hpp"
#include "perscam/scene.hpp"

namespace perscam {

using json = nlohmann::json;

// ---- intrinsics / bbox -----------------------------------------------------

inline json to_json(const Intrinsics& k) {
  return {{"f", k.f}, {"cx", k.cx}, {"cy", k.cy}};
}

inline Intrinsics intrinsics_from_json(const json& j) {
  Intrinsics k{j.at("f").get<double>(), j.at("cx").get<double>(), j.at("cy").get<double>()};
  if (!k.valid()) throw Error(ErrorCode::ParseError, "invalid intrinsics (need f > 0)");
  return k;
}

inline json to_json(const BBox& b) {
  return {{"cu", b.cu}, {"cv", b.cv}, {"w", b.w}, {"h", b.h}};
}

inline BBox bbox_from_json(const json& j) {
  BBox b{j.at("cu").get<double>(), j.at("cv").get<double>(),
         j.at("w").get<double>(), j.at("h").get<double>()};
  if (!b.valid()) throw Error(ErrorCode::InvalidBBox, "invalid bbox (need w, h > 0)");
  return b;
}

inline json to_json(const CropAffine& a) {
  return {{"s", a.s}, {"tu", a.tu}, {"tv", a.tv}};
}

// ---- rotation ---------------------------------------------------------------

inline json matrix3_to_json(const Eigen::Matrix3d& m) {
  json rows = json::array();
  for (int r = 0; r < 3; ++r) rows.push_back({m(r, 0), m(r, 1), m(r, 2)});
  return rows;
}

inline Eigen::Matrix3d matrix3_from_json(const json& j) {
  Eigen::Matrix3d m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = j.at(r).at(c).get<double>();
  return m;
}

inline json to_json(const RotationResult& rr) {
  return {{"R", matrix3_to_json(rr.R)},
          {"n", {rr.axis.x(), rr.axis.y(), rr.axis.z()}},
          {"phi", rr.phi},
          {"M", matrix3_to_json(rr.M)}};
}

inline RotationResult rotation_from_json(const json& j) {
  RotationResult rr;
  rr.R = matrix3_from_json(j.at("R"));
  const auto& n = j.at("n");
  rr.axis = Eigen::Vector3d(n.at(0).get<double>(), n.at(1).get<double>(), n.at(2).get<double>());
  rr.phi = j.at("phi").get<double>();
  rr.M = matrix3_from_json(j.at("M"));
  return rr;
}

// ---- poses ------------------------------------------------------------------

inline json to_json(const PoseXYZ& p) {
  json joints = json::array();
  for (const auto& v : p.joints) joints.push_back({v.x(), v.y(), v.z()});
  return {{"skeleton", p.skeleton}, {"joints_xyz_mm", joints}};
}

inline PoseXYZ pose_xyz_from_json(const json& j) {
  PoseXYZ p;
  p.skeleton = j.at("skeleton").get<std::string>();
  const Skeleton& skel = skeleton_by_id(p.skeleton);
  for (const auto& v : j.at("joints_xyz_mm"))
    p.joints.emplace_back(v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<double>());
  if (static_cast<int>(p.joints.size()) != skel.size())
    throw Error(ErrorCode::SkeletonMismatch, "joint count does not match skeleton " + p.skeleton);
  return p;
}

inline json to_json(const PoseUVD& p, std::optional<double> s_hat = std::nullopt) {
  json joints = json::array();
  for (const auto& v : p.joints) joints.push_back({v.x(), v.y(), v.z()});
  json out = {{"skeleton", p.skeleton}, {"joints_uvd", joints}};
  if (s_hat) out["s_hat"] = *s_hat;
  return out;
}

inline PoseUVD pose_uvd_from_json(const json& j) {
  PoseUVD p;
  p.skeleton = j.at("skeleton").get<std::string>();
  for (const auto& v : j.at("joints_uvd"))
    p.joints.emplace_back(v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<double>());
  return p;
}

// ---- samples / manifests ------------------------------------------------------

inline json to_json(const Sample& s) {
  return {{"pose_xyz", to_json(s.pose_xyz)},
          {"intrinsics", to_json(s.intrinsics)},
          {"image_size", {{"w", s.image_size.w}, {"h", s.image_size.h}}},
          {"bbox", to_json(s.bbox)},
          {"pose_uvd", to_json(s.pose_uvd)},
          {"rotation", to_json(s.rotation)},
          {"bbox_rotated", to_json(s.bbox_rotated)},
          {"crop_intrinsics", to_json(s.crop_intr)},
          {"pose_uvd_crop", to_json(s.pose_uvd_crop, s.s_hat.s_hat)}};
}

inline Sample sample_from_json(const json& j) {
  Sample s;
  s.pose_xyz = pose_xyz_from_json(j.at("pose_xyz"));
  s.intrinsics = intrinsics_from_json(j.at("intrinsics"));
  s.image_size = {j.at("image_size").at("w").get<int>(), j.at("image_size").at("h").get<int>()};
  s.bbox = bbox_from_json(j.at("bbox"));
  s.pose_uvd = pose_uvd_from_json(j.at("pose_uvd"));
  s.rotation = rotation_from_json(j.at("rotation"));
  s.bbox_rotated = bbox_from_json(j.at("bbox_rotated"));
  s.crop_intr = intrinsics_from_json(j.at("crop_intrinsics"));
  s.pose_uvd_crop = pose_uvd_from_json(j.at("pose_uvd_crop"));
  s.s_hat = ScaleFactor{j.at("pose_uvd_crop").at("s_hat").get<double>()};
  return s;
}

inline void write_manifest(const std::string& path, const std::vector<Sample>& samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot open " + path + " for writing");
  for (const auto& s : samples) out << to_json(s).dump() << '\n';
}

inline std::vector<Sample> read_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::vector<Sample> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(sample_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError,
                  path + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.code(), path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

// ---- PEMAP binary -----------------------------------------------------------
//
// "PEMAP\0", u32 LE width, u32 LE height, then h*w*2 LE f32 row-major,
// x before y per pixel.

namespace detail {

inline void put_u32_le(std::string& buf, std::uint32_t v) {
  buf.push_back(static_cast<char>(v & 0xff));
  buf.push_back(static_cast<char>((v >> 8) & 0xff));
  buf.push_back(static_cast<char>((v >> 16) & 0xff));
  buf.push_back(static_cast<char>((v >> 24) & 0xff));
}

inline std::uint32_t get_u32_le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace detail

inline std::string pemap_to_bytes(const PEMap& map) {
  std::string buf;
  buf.reserve(14 + map.data.size() * 4);
  buf.append("PEMAP", 5);
  buf.push_back('\0');
  detail::put_u32_le(buf, static_cast<std::uint32_t>(map.w));
  detail::put_u32_le(buf, static_cast<std::uint32_t>(map.h));
  for (float v : map.data) detail::put_u32_le(buf, std::bit_cast<std::uint32_t>(v));
  return buf;
}

inline PEMap pemap_from_bytes(const std::string& buf) {
  if (buf.size() < 14 || buf.compare(0, 6, "PEMAP\0", 6) != 0)
    throw Error(ErrorCode::ParseError, "not a PEMAP file");
  const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
  PEMap map;
  map.w = static_cast<int>(detail::get_u32_le(p + 6));
  map.h = static_cast<int>(detail::get_u32_le(p + 10));
  const size_t n = 2 * static_cast<size_t>(map.w) * map.h;
  if (buf.size() != 14 + 4 * n)
    throw Error(ErrorCode::ParseError, "PEMAP payload size mismatch");
  map.data.resize(n);
  for (size_t i = 0; i < n; ++i)
    map.data[i] = std::bit_cast<float>(detail::get_u32_le(p + 14 + 4 * i));
  return map;
}

inline void write_pemap(const std::string& path, const PEMap& map) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot open " + path + " for writing");
  const std::string bytes = pemap_to_bytes(map);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

inline PEMap read_pemap(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return pemap_from_bytes(ss.str());
}

// ---- evaluation report --------------------------------------------------------

inline json to_json(const EvalReport& r) {
  return {{"mpjpe_mm", r.mpjpe_mm},
          {"pa_mpjpe_mm", r.pa_mpjpe_mm},
          {"pck_percent", r.pck_percent},
          {"auc", r.auc},
          {"depth_error_mm", r.depth_error_mm}};
}

inline std::string report_table(const EvalReport& r) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(3);
  out << "metric            value\n"
      << "----------------  ----------\n"
      << "MPJPE (mm)        " << std::setw(10) << r.mpjpe_mm << '\n'
      << "PA-MPJPE (mm)     " << std::setw(10) << r.pa_mpjpe_mm << '\n'
      << "PCK (%)           " << std::setw(10) << r.pck_percent << '\n'
      << "AUC               " << std::setw(10) << r.auc << '\n'
      << "depth error (mm)  " << std::setw(10) << r.depth_error_mm << '\n';
  return out.str();
}

// ---- phi statistics CSV --------------------------------------------------------

inline std::string histogram_csv(const PhiHistogram& h) {
  std::ostringstream out;
  out << "angle_deg,density\n";
  for (size_t i = 0; i < h.counts.size(); ++i) {
    const double center = h.origin_deg + (static_cast<double>(i) + 0.5) * h.bin_width_deg;
    out << center << ',' << h.density(i) << '\n';
  }
  return out.str();
}

inline std::string kde_csv(const KdeCurve& kde) {
  std::ostringstream out;
  out << "angle_deg,density\n";
  for (size_t i = 0; i < kde.angle_deg.size(); ++i)
    out << kde.angle_deg[i] << ',' << kde.density[i] << '\n';
  return out.str();
}

}  // namespace perscam
