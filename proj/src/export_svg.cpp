#include "wrapnet/export_svg.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "wrapnet/errors.hpp"

namespace wrapnet {

std::string_view to_string(ExportMode mode) { return mode == ExportMode::WithCreases ? "with-creases" : "cuts-only"; }

std::optional<ExportMode> parse_export_mode(std::string_view name) {
  if (name == "with-creases") return ExportMode::WithCreases;
  if (name == "cuts-only") return ExportMode::CutsOnly;
  return std::nullopt;
}

void ExportOptions::validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidConfig(fmt::format("scale must be > 0 (got {})", scale));
  if (!(margin >= 0.0)) throw InvalidConfig(fmt::format("margin must be >= 0 (got {})", margin));
  if (!(cut_stroke > 0.0) || !(crease_stroke > 0.0)) throw InvalidConfig("stroke widths must be > 0");
  if (!(crease_threshold > 0.0 && crease_threshold < kPi))
    throw InvalidConfig(fmt::format("crease threshold must lie in (0, pi) (got {})", crease_threshold));
}

std::string ExportSummary::to_record() const {
  return fmt::format(
      "cut_paths={} creases={} mountain={} valley={} flat={} cut_length={:.9f} crease_length={:.9f} width={:.6f} "
      "height={:.6f} max_fold_angle={:.9f} crease_warning={} invalid_net={}",
      cut_paths, creases, mountain, valley, flat, cut_length, crease_length, width, height, max_fold_angle,
      crease_warning ? 1 : 0, invalid_net ? 1 : 0);
}

namespace {

std::string num(double v) {
  std::string s = fmt::format("{:.6f}", v);
  if (s == "-0.000000") s.erase(0, 1);
  return s;
}

struct Placement {
  double dx = 0.0;  // document x of the net's min x
  double top = 0.0; // net max y
  double scale = 1.0;
  double margin = 0.0;
  double x0 = 0.0;

  double x(const Vec2& p) const { return (p.x() - x0) * scale + dx; }
  double y(const Vec2& p) const { return (top - p.y()) * scale + margin; }
};

// Endpoints of the fold edge shared by the child and parent faces.
std::pair<Vec2, Vec2> fold_segment(const Net& net, const FoldRecord& fold) {
  const NetFace& c = net.faces[fold.child];
  const NetFace& p = net.faces[fold.parent];
  std::array<Vec2, 2> ends{};
  int n = 0;
  for (int k = 0; k < 3 && n < 2; ++k)
    if (std::find(p.vertices.begin(), p.vertices.end(), c.vertices[k]) != p.vertices.end()) ends[n++] = c.corners[k];
  if (n != 2) throw InvalidNet(fmt::format("fold on edge {} does not join faces {} and {}", fold.edge, fold.child, fold.parent));
  return {ends[0], ends[1]};
}

}  // namespace

std::string render_svg(const std::vector<const Net*>& nets, const ExportOptions& opts, ExportSummary* summary) {
  opts.validate();
  ExportSummary sum;
  for (const Net* net : nets) {
    if (net->diagnostics.overlaps > 0) {
      if (!opts.force)
        throw InvalidNet(fmt::format("net has {} overlapping face pairs (use force to export anyway)",
                                     net->diagnostics.overlaps));
      sum.invalid_net = true;
    }
  }

  // Side by side, tops aligned.
  std::vector<Placement> places;
  double cursor = opts.margin;
  double tallest = 0.0;
  for (const Net* net : nets) {
    const auto [lo, hi] = net->bounds();
    Placement pl;
    pl.dx = cursor;
    pl.x0 = lo.x();
    pl.top = hi.y();
    pl.scale = opts.scale;
    pl.margin = opts.margin;
    places.push_back(pl);
    cursor += (hi.x() - lo.x()) * opts.scale + opts.margin;
    tallest = std::max(tallest, (hi.y() - lo.y()) * opts.scale);
  }
  sum.width = nets.empty() ? 2.0 * opts.margin : cursor;
  sum.height = tallest + 2.0 * opts.margin;

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}mm\" height=\"{1}mm\" viewBox=\"0 0 {0} "
      "{1}\">\n",
      num(sum.width), num(sum.height));

  for (std::size_t i = 0; i < nets.size(); ++i) {
    const Net& net = *nets[i];
    const Placement& pl = places[i];
    out += fmt::format("<g id=\"patch{}\">\n", i);
    for (const auto& loop : net.boundary) {
      if (loop.empty()) continue;
      out += "<path class=\"cut\" fill=\"none\" stroke=\"#ff0000\" stroke-width=\"" + num(opts.cut_stroke) + "\" d=\"";
      for (std::size_t k = 0; k < loop.size(); ++k) {
        out += fmt::format("{}{} {} ", k == 0 ? "M" : "L", num(pl.x(loop[k])), num(pl.y(loop[k])));
        if (k > 0) sum.cut_length += (loop[k] - loop[k - 1]).norm();
      }
      out += "Z\"/>\n";
      ++sum.cut_paths;
    }
    for (const auto& fold : net.folds) {
      sum.max_fold_angle = std::max(sum.max_fold_angle, fold.angle);
      if (opts.mode == ExportMode::CutsOnly) continue;
      const auto [a, b] = fold_segment(net, fold);
      const char* kind = fold.convexity > 0 ? "mountain" : fold.convexity < 0 ? "valley" : "flat";
      (fold.convexity > 0 ? sum.mountain : fold.convexity < 0 ? sum.valley : sum.flat)++;
      const std::string dash = fold.convexity > 0   ? " stroke-dasharray=\"" + opts.mountain_dash + "\""
                               : fold.convexity < 0 ? " stroke-dasharray=\"" + opts.valley_dash + "\""
                                                    : std::string();
      out += fmt::format(
          "<line class=\"crease {}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#0000ff\" stroke-width=\"{}\"{}/>\n",
          kind, num(pl.x(a)), num(pl.y(a)), num(pl.x(b)), num(pl.y(b)), num(opts.crease_stroke), dash);
      sum.crease_length += (b - a).norm();
      ++sum.creases;
    }
    out += "</g>\n";
  }
  out += "</svg>\n";

  sum.crease_warning = opts.mode == ExportMode::CutsOnly && sum.max_fold_angle > opts.crease_threshold;
  if (summary) *summary = sum;
  return out;
}

std::string render_svg(const Net& net, const ExportOptions& opts, ExportSummary* summary) {
  return render_svg(std::vector<const Net*>{&net}, opts, summary);
}

ExportSummary export_svg(const std::vector<const Net*>& nets, const ExportOptions& opts,
                         const std::filesystem::path& path) {
  ExportSummary sum;
  const std::string doc = render_svg(nets, opts, &sum);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("cannot write " + path.string());
  out << doc;
  if (!out) throw IOError("write failed: " + path.string());
  return sum;
}

ExportSummary export_svg(const Net& net, const ExportOptions& opts, const std::filesystem::path& path) {
  return export_svg(std::vector<const Net*>{&net}, opts, path);
}

CreaseReport crease_erasure_check(const Net& net, double threshold) {
  CreaseReport r;
  r.threshold = threshold;
  for (const auto& f : net.folds) {
    r.max_fold_angle = std::max(r.max_fold_angle, f.angle);
    r.mean_fold_angle += f.angle;
  }
  if (!net.folds.empty()) r.mean_fold_angle /= static_cast<double>(net.folds.size());
  r.pass = r.max_fold_angle <= threshold;
  return r;
}

}  // namespace wrapnet
