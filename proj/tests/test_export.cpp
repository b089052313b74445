#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "nets.hpp"
#include "oracles.hpp"
#include "wrapnet/evolve.hpp"
#include "wrapnet/export_svg.hpp"
#include "wrapnet/shapes.hpp"

using namespace wrapnet;

namespace {

int count_of(const std::string& s, const std::string& needle) {
  int n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

std::vector<std::vector<Vec2>> path_points(const std::string& svg) {
  std::vector<std::vector<Vec2>> paths;
  const std::regex path_re("<path class=\"cut\"[^>]* d=\"([^\"]*)\"");
  const std::regex pt_re("[ML](-?[0-9.]+) (-?[0-9.]+)");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), path_re); it != std::sregex_iterator(); ++it) {
    const std::string d = (*it)[1];
    std::vector<Vec2> pts;
    for (auto p = std::sregex_iterator(d.begin(), d.end(), pt_re); p != std::sregex_iterator(); ++p)
      pts.emplace_back(std::stod((*p)[1]), std::stod((*p)[2]));
    paths.push_back(pts);
  }
  return paths;
}

double polyline_length(const std::vector<Vec2>& pts) {
  double len = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) len += (pts[i] - pts[i - 1]).norm();
  return len;
}

}  // namespace

TEST(Export, CubeCrossWithCreases) {
  const Net net = cube_cross_net(unit_cube());
  ExportOptions o;
  ExportSummary s;
  const std::string svg = render_svg(net, o, &s);
  EXPECT_EQ(s.cut_paths, 1);
  EXPECT_EQ(s.creases, 11);
  EXPECT_EQ(count_of(svg, "<path class=\"cut\""), 1);
  EXPECT_EQ(count_of(svg, "class=\"crease"), 11);
  EXPECT_EQ(s.mountain, 5);
  EXPECT_EQ(s.flat, 6);
  EXPECT_EQ(s.valley, 0);
}

TEST(Export, CubeCrossCutsOnly) {
  const Net net = cube_cross_net(unit_cube());
  ExportOptions o;
  o.mode = ExportMode::CutsOnly;
  ExportSummary s;
  const std::string svg = render_svg(net, o, &s);
  EXPECT_EQ(s.cut_paths, 1);
  EXPECT_EQ(s.creases, 0);
  EXPECT_EQ(count_of(svg, "crease"), 0);
  EXPECT_TRUE(s.crease_warning);
}

TEST(Export, ReflexFoldsAreValleys) {
  const TriMesh m = dented_icosahedron();
  const Net net = unfold(m, WeightMethod::Random, std::nullopt, 3);
  ExportOptions o;
  o.force = true;
  ExportSummary s;
  render_svg(net, o, &s);
  int reflex = 0;
  for (const auto& f : net.folds) reflex += f.convexity < 0 ? 1 : 0;
  EXPECT_EQ(s.valley, reflex);
  EXPECT_EQ(s.mountain + s.valley + s.flat, static_cast<int>(net.folds.size()));
}

TEST(Export, CutLengthIsTwiceCutEdges) {
  Rng rng(31);
  for (int trial = 0; trial < 12; ++trial) {
    TriMesh m = oracle::random_mesh(rng, 200);
    if (!m.is_closed()) continue;
    const Net net = unfold(m, WeightMethod::Random, std::nullopt, rng.next());
    ExportOptions o;
    o.force = true;
    o.scale = 1.0;
    ExportSummary s;
    const std::string svg = render_svg(net, o, &s);
    const double expect = 2.0 * oracle::cut_edge_length(net, m);
    EXPECT_LE(std::abs(s.cut_length - expect) / expect, 1e-6);
    double from_doc = 0.0;
    for (const auto& p : path_points(svg)) from_doc += polyline_length(p);
    EXPECT_LE(std::abs(from_doc - expect) / expect, 1e-5);
  }
}

TEST(Export, CoordinatesAreAffineImages) {
  const TriMesh m = generate_sphere({80});
  const Net net = unfold(m, WeightMethod::SteepestEdge, Vec3(0, 0, 1), 0, true);
  ExportOptions o;
  o.scale = 20.0;
  o.margin = 3.0;
  const std::string svg = render_svg(net, o);
  const auto paths = path_points(svg);
  ASSERT_EQ(paths.size(), net.boundary.size());
  const auto [lo, hi] = net.bounds();
  for (std::size_t i = 0; i < paths.size(); ++i) {
    ASSERT_EQ(paths[i].size(), net.boundary[i].size());
    EXPECT_EQ(paths[i].front(), paths[i].back());
    for (std::size_t k = 0; k < paths[i].size(); ++k) {
      const Vec2& p = net.boundary[i][k];
      EXPECT_NEAR(paths[i][k].x(), (p.x() - lo.x()) * o.scale + o.margin, 5e-7);
      EXPECT_NEAR(paths[i][k].y(), (hi.y() - p.y()) * o.scale + o.margin, 5e-7);
    }
  }
  // Document size = bounding box x scale + margins.
  std::smatch mt;
  ASSERT_TRUE(std::regex_search(svg, mt, std::regex("viewBox=\"0 0 ([0-9.]+) ([0-9.]+)\"")));
  EXPECT_NEAR(std::stod(mt[1]), (hi.x() - lo.x()) * o.scale + 2 * o.margin, 1e-6);
  EXPECT_NEAR(std::stod(mt[2]), (hi.y() - lo.y()) * o.scale + 2 * o.margin, 1e-6);
}

TEST(Export, ByteIdenticalRepeats) {
  const TriMesh m = generate_sphere({100});
  const Net net = unfold(m, WeightMethod::FlatTree, Vec3(0, 0.6, 0.8), 0);
  ExportOptions o;
  o.force = true;
  EXPECT_EQ(render_svg(net, o), render_svg(net, o));
  const auto path = std::filesystem::temp_directory_path() / "wrapnet_export_test.svg";
  export_svg(net, o, path);
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), render_svg(net, o));
  std::filesystem::remove(path);
}

TEST(Export, InvalidNetNeedsForce) {
  const TriMesh m = dumbbell();
  Net net;
  for (std::uint64_t seed = 1; seed < 200 && net.diagnostics.overlaps == 0; ++seed)
    net = unfold(m, WeightMethod::Random, std::nullopt, seed);
  ASSERT_GT(net.diagnostics.overlaps, 0);
  EXPECT_THROW(render_svg(net, ExportOptions{}), InvalidNet);
  ExportOptions o;
  o.force = true;
  ExportSummary s;
  render_svg(net, o, &s);
  EXPECT_TRUE(s.invalid_net);
}

TEST(Export, OptionValidation) {
  const Net net = cube_cross_net(unit_cube());
  ExportOptions o;
  o.scale = 0.0;
  EXPECT_THROW(render_svg(net, o), InvalidConfig);
  o = ExportOptions{};
  o.crease_threshold = kPi;
  EXPECT_THROW(render_svg(net, o), InvalidConfig);
  EXPECT_THROW(export_svg(net, ExportOptions{}, "/nonexistent/dir/x.svg"), IOError);
}

TEST(Export, SeveralPatchesSideBySide) {
  const Net a = cube_cross_net(unit_cube());
  const Net b = unfold(icosahedron(), WeightMethod::SteepestEdge, Vec3(0, 0, 1), 0, true);
  ExportOptions o;
  o.force = true;
  ExportSummary s;
  const std::string svg = render_svg({&a, &b}, o, &s);
  EXPECT_EQ(count_of(svg, "<g id=\"patch"), 2);
  EXPECT_EQ(s.cut_paths, static_cast<int>(a.boundary.size() + b.boundary.size()));
  EXPECT_LT(svg.find("id=\"patch0\""), svg.find("id=\"patch1\""));
}

TEST(CreaseCheck, Examples) {
  const Net flat = unfold(flat_grid(4), WeightMethod::Random, std::nullopt, 1);
  const auto r = crease_erasure_check(flat, 1e-6);
  EXPECT_EQ(r.max_fold_angle, 0.0);
  EXPECT_TRUE(r.pass);

  const Net cube = cube_cross_net(unit_cube());
  const auto c = crease_erasure_check(cube, 1.0);
  EXPECT_FALSE(c.pass);
  EXPECT_NEAR(c.max_fold_angle, kPi / 2, 1e-12);
}

TEST(CreaseCheck, FinerSphereBendsLess) {
  const Net a = unfold(generate_sphere({80}), WeightMethod::FlatTree, Vec3(0, 0, 1), 0, true);
  const Net b = unfold(generate_sphere({500}), WeightMethod::FlatTree, Vec3(0, 0, 1), 0, true);
  EXPECT_LT(crease_erasure_check(b).max_fold_angle, crease_erasure_check(a).max_fold_angle);
}
