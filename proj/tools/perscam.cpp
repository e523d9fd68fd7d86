// SPDX-License-Identifier: Apache-2.0
//
// perscam CLI: subject-centering preprocessing for monocular 3D pose work.
//
//   perscam pipeline  --image I.png --intrinsics K.json --bbox b.json --out DIR
//   perscam scene     --seed N --n COUNT --out manifest.jsonl
//   perscam eval      --pred pred.jsonl --gt gt.jsonl [--out report.json]
//   perscam stats     --manifest m.jsonl --out PREFIX [--bandwidth B]
//
// Errors are reported as one JSON object on stderr and a nonzero exit code.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "perscam/perscam.hpp"

namespace fs = std::filesystem;
using perscam::json;

namespace {

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw perscam::Error(perscam::ErrorCode::ParseError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw perscam::Error(perscam::ErrorCode::ParseError, path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw perscam::Error(perscam::ErrorCode::ParseError, "cannot open " + path + " for writing");
  out << content;
}

int cmd_pipeline(const std::string& image_path, const std::string& intr_path,
                 const std::string& bbox_path, const std::string& out_dir,
                 int crop_size, double padding, int fill) {
  const perscam::Raster image = perscam::read_png(image_path);
  const perscam::Intrinsics k = perscam::intrinsics_from_json(load_json_file(intr_path));
  const perscam::BBox bbox = perscam::bbox_from_json(load_json_file(bbox_path));

  perscam::PipelineConfig cfg;
  cfg.crop_size = {crop_size, crop_size};
  cfg.padding = padding;
  cfg.fill_value = static_cast<std::uint8_t>(fill);

  const perscam::PipelineResult result = perscam::run_pipeline(image, k, bbox, cfg);

  fs::create_directories(out_dir);
  perscam::write_png((fs::path(out_dir) / "crop.png").string(), result.crop);
  perscam::write_pemap((fs::path(out_dir) / "pe.pemap").string(), result.pe_map);

  json meta = {{"intrinsics", perscam::to_json(k)},
               {"crop_intrinsics", perscam::to_json(result.crop_intr)},
               {"crop_affine", perscam::to_json(result.affine)},
               {"rotation", perscam::to_json(result.rotation)},
               {"bbox", perscam::to_json(result.bbox)},
               {"bbox_rotated", perscam::to_json(result.bbox_rotated)},
               {"crop_size", {{"w", cfg.crop_size.w}, {"h", cfg.crop_size.h}}}};
  write_text((fs::path(out_dir) / "meta.json").string(), meta.dump(2) + "\n");
  return 0;
}

int cmd_scene(perscam::SceneConfig cfg, const std::string& out_path) {
  const std::vector<perscam::Sample> samples = perscam::generate(cfg);
  perscam::write_manifest(out_path, samples);
  return 0;
}

int cmd_eval(const std::string& pred_path, const std::string& gt_path,
             const std::optional<std::string>& out_path, const std::string& format) {
  const auto pred = perscam::read_manifest(pred_path);
  const auto gt = perscam::read_manifest(gt_path);
  if (pred.size() != gt.size())
    throw perscam::Error(perscam::ErrorCode::ParseError,
                         "prediction and ground-truth manifests differ in length");
  if (pred.empty())
    throw perscam::Error(perscam::ErrorCode::ParseError, "empty manifests");

  perscam::EvalReport mean;
  for (size_t i = 0; i < pred.size(); ++i) {
    perscam::EvalReport r = perscam::evaluate(pred[i].pose_xyz, gt[i].pose_xyz);
    r.depth_error_mm = perscam::depth_error(pred[i].pose_uvd, gt[i].pose_uvd);
    mean.mpjpe_mm += r.mpjpe_mm;
    mean.pa_mpjpe_mm += r.pa_mpjpe_mm;
    mean.pck_percent += r.pck_percent;
    mean.auc += r.auc;
    mean.depth_error_mm += r.depth_error_mm;
  }
  const double n = static_cast<double>(pred.size());
  mean.mpjpe_mm /= n;
  mean.pa_mpjpe_mm /= n;
  mean.pck_percent /= n;
  mean.auc /= n;
  mean.depth_error_mm /= n;

  if (format == "json")
    std::cout << perscam::to_json(mean).dump(2) << "\n";
  else
    std::cout << perscam::report_table(mean);
  if (out_path) write_text(*out_path, perscam::to_json(mean).dump(2) + "\n");
  return 0;
}

int cmd_stats(const std::string& manifest_path, const std::string& out_prefix,
              std::optional<double> bandwidth) {
  const auto samples = perscam::read_manifest(manifest_path);
  const auto stats = perscam::phi_statistics(perscam::phi_degrees(samples), bandwidth);
  write_text(out_prefix + ".hist.csv", perscam::histogram_csv(stats.histogram));
  write_text(out_prefix + ".kde.csv", perscam::kde_csv(stats.kde));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Camera-geometry preprocessing for monocular 3D human pose"};
  app.require_subcommand(1);

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "center, crop, and encode one image");
  std::string image_path, intr_path, bbox_path, out_dir;
  int crop_size = 256, fill = 0;
  double padding = 1.0;
  pipeline->add_option("--image", image_path, "input PNG")->required();
  pipeline->add_option("--intrinsics", intr_path, "intrinsics JSON {f,cx,cy}")->required();
  pipeline->add_option("--bbox", bbox_path, "bbox JSON {cu,cv,w,h}")->required();
  pipeline->add_option("--out", out_dir, "output directory")->required();
  pipeline->add_option("--crop-size", crop_size, "crop resolution (square)");
  pipeline->add_option("--padding", padding, "bbox padding factor (>= 1)");
  pipeline->add_option("--fill", fill, "out-of-bounds fill value")->check(CLI::Range(0, 255));

  // scene
  auto* scene = app.add_subcommand("scene", "generate a synthetic ground-truth manifest");
  perscam::SceneConfig scfg;
  std::string scene_out;
  scene->add_option("--seed", scfg.seed, "RNG seed");
  scene->add_option("--n", scfg.n_samples, "number of samples");
  scene->add_option("--f-min", scfg.f_min, "min focal length, px");
  scene->add_option("--f-max", scfg.f_max, "max focal length, px");
  scene->add_option("--width", scfg.image_size.w, "image width");
  scene->add_option("--height", scfg.image_size.h, "image height");
  scene->add_option("--dist-min", scfg.distance_min, "min subject distance, mm");
  scene->add_option("--dist-max", scfg.distance_max, "max subject distance, mm");
  scene->add_option("--offset-max", scfg.offset_max, "max lateral offset, mm");
  scene->add_option("--skeleton", scfg.skeleton, "h36m14 or mpi17");
  scene->add_option("--crop-size", scfg.crop_size.w, "crop resolution (square)");
  scene->add_option("--padding", scfg.padding, "bbox padding factor");
  scene->add_option("--out", scene_out, "output manifest (JSON lines)")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "compare prediction and ground-truth manifests");
  std::string pred_path, gt_path, format = "table";
  std::string eval_out;
  eval->add_option("--pred", pred_path, "prediction manifest")->required();
  eval->add_option("--gt", gt_path, "ground-truth manifest")->required();
  eval->add_option("--out", eval_out, "write report JSON here");
  eval->add_option("--format", format, "stdout format")->check(CLI::IsMember({"json", "table"}));

  // stats
  auto* stats = app.add_subcommand("stats", "rotation-angle histogram and KDE");
  std::string manifest_path, stats_out;
  double bandwidth = 0.0;
  stats->add_option("--manifest", manifest_path, "sample manifest")->required();
  stats->add_option("--out", stats_out, "output prefix (.hist.csv / .kde.csv)")->required();
  stats->add_option("--bandwidth", bandwidth, "KDE bandwidth, degrees (default: Scott's rule)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (pipeline->parsed())
      return cmd_pipeline(image_path, intr_path, bbox_path, out_dir, crop_size, padding, fill);
    if (scene->parsed()) {
      scfg.crop_size.h = scfg.crop_size.w;
      return cmd_scene(scfg, scene_out);
    }
    if (eval->parsed())
      return cmd_eval(pred_path, gt_path,
                      eval_out.empty() ? std::nullopt : std::make_optional(eval_out), format);
    if (stats->parsed())
      return cmd_stats(manifest_path, stats_out,
                       stats->count("--bandwidth") ? std::make_optional(bandwidth) : std::nullopt);
  } catch (const perscam::Error& e) {
    std::cerr << json{{"error", {{"code", perscam::to_string(e.code())},
                                 {"message", e.what()}}}}.dump()
              << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", {{"code", "internal"}, {"message", e.what()}}}}.dump() << "\n";
    return 1;
  }
  return 0;
}
