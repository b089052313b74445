#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wrapnet/net.hpp"

namespace wrapnet {

enum class ExportMode { WithCreases, CutsOnly };

std::string_view to_string(ExportMode mode);
/// Accepts with-creases, cuts-only.
std::optional<ExportMode> parse_export_mode(std::string_view name);

struct ExportOptions {
  ExportMode mode = ExportMode::WithCreases;
  /// Document units (mm) per mesh length unit.
  double scale = 100.0;
  /// Blank border around the drawing, in document units. Also the gap
  /// between patches when several nets share one document.
  double margin = 5.0;
  double cut_stroke = 0.2;
  double crease_stroke = 0.1;
  std::string mountain_dash = "3,1,0.5,1";
  std::string valley_dash = "2,1";
  /// CutsOnly documents carry a warning when a fold is steeper than this.
  double crease_threshold = 0.1745;
  /// Export nets with overlapping faces anyway.
  bool force = false;

  /// Throws InvalidConfig.
  void validate() const;
};

struct ExportSummary {
  int cut_paths = 0;
  int creases = 0;
  int mountain = 0;
  int valley = 0;
  int flat = 0;
  /// In mesh units.
  double cut_length = 0.0;
  double crease_length = 0.0;
  /// Document size in document units.
  double width = 0.0;
  double height = 0.0;
  double max_fold_angle = 0.0;
  /// CutsOnly with a fold above the threshold.
  bool crease_warning = false;
  /// At least one exported net has overlapping faces.
  bool invalid_net = false;

  std::string to_record() const;
};

/// Document for one or more nets laid out left to right in the given order.
/// The y axis is flipped so the drawing appears as seen from outside the
/// surface. Cut outlines are closed paths; in WithCreases mode every fold is a
/// dashed line classed as mountain (convex), valley (reflex) or flat.
/// Throws InvalidNet for a net with overlaps unless opts.force is set.
std::string render_svg(const std::vector<const Net*>& nets, const ExportOptions& opts,
                       ExportSummary* summary = nullptr);
std::string render_svg(const Net& net, const ExportOptions& opts, ExportSummary* summary = nullptr);

/// render_svg written to `path`. Throws IOError.
ExportSummary export_svg(const Net& net, const ExportOptions& opts, const std::filesystem::path& path);
ExportSummary export_svg(const std::vector<const Net*>& nets, const ExportOptions& opts,
                         const std::filesystem::path& path);

struct CreaseReport {
  double max_fold_angle = 0.0;
  double mean_fold_angle = 0.0;
  double threshold = 0.0;
  bool pass = true;
};

/// Passes when no fold is steeper than `threshold` radians.
CreaseReport crease_erasure_check(const Net& net, double threshold = 0.1745);

}  // namespace wrapnet
