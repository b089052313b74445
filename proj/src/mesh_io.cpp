#include "wrapnet/mesh_io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace wrapnet {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

double parse_double(std::string_view s, std::size_t line_no) {
  double value = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(fmt::format("line {}: expected a number, got '{}'", line_no, s));
  return value;
}

long parse_long(std::string_view s, std::size_t line_no) {
  long value = 0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(fmt::format("line {}: expected an integer, got '{}'", line_no, s));
  return value;
}

void normalize(std::vector<Vec3>& vertices) {
  if (vertices.empty()) return;
  Vec3 lo = vertices.front(), hi = vertices.front();
  for (const auto& p : vertices) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double extent = (hi - lo).maxCoeff();
  if (!(extent > 0.0)) return;
  const Vec3 center = 0.5 * (lo + hi);
  for (auto& p : vertices) p = (p - center) / extent;
}

TriMesh finish(std::vector<Vec3> vertices, std::vector<Triangle> faces, const LoadOptions& options) {
  if (options.normalize_to_unit_box) normalize(vertices);
  return TriMesh::build(std::move(vertices), std::move(faces));
}

}  // namespace

MeshFormat format_from_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".obj") return MeshFormat::Obj;
  if (ext == ".off") return MeshFormat::Off;
  throw ParseError("cannot infer mesh format from '" + path.string() + "' (expected .obj or .off)");
}

TriMesh read_obj(std::istream& in, const LoadOptions& options) {
  std::vector<Vec3> vertices;
  std::vector<Triangle> faces;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens[0] == "v") {
      if (tokens.size() < 4) throw ParseError(fmt::format("line {}: vertex needs three coordinates", line_no));
      vertices.emplace_back(parse_double(tokens[1], line_no), parse_double(tokens[2], line_no),
                            parse_double(tokens[3], line_no));
    } else if (tokens[0] == "f") {
      if (tokens.size() != 4)
        throw NonTriangleFace(fmt::format("line {}: face has {} vertices, only triangles are accepted", line_no,
                                          tokens.size() - 1));
      Triangle t{};
      for (int k = 0; k < 3; ++k) {
        std::string_view tok = tokens[k + 1];
        tok = tok.substr(0, tok.find('/'));
        long idx = parse_long(tok, line_no);
        if (idx < 0) idx += static_cast<long>(vertices.size()) + 1;
        if (idx < 1 || idx > static_cast<long>(vertices.size()))
          throw ParseError(fmt::format("line {}: vertex index {} out of range", line_no, tok));
        t[k] = static_cast<VertexId>(idx - 1);
      }
      faces.push_back(t);
    }
    // vn, vt, o, g, s, usemtl, mtllib, l: ignored
  }
  if (in.bad()) throw IOError("read error while parsing OBJ");
  return finish(std::move(vertices), std::move(faces), options);
}

TriMesh read_off(std::istream& in, const LoadOptions& options) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    lines.push_back(std::move(line));
  }
  std::vector<std::string_view> tokens;
  std::vector<std::size_t> token_line;
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (auto t : split_ws(lines[i])) {
      tokens.push_back(t);
      token_line.push_back(i + 1);
    }

  std::size_t pos = 0;
  auto next = [&](const char* what) -> std::string_view {
    if (pos >= tokens.size()) throw ParseError(fmt::format("OFF: unexpected end of file reading {}", what));
    return tokens[pos++];
  };
  auto line_of = [&]() { return pos == 0 ? std::size_t{1} : token_line[pos - 1]; };

  const auto header = next("header");
  if (header != "OFF") throw ParseError(fmt::format("OFF: expected 'OFF' header, got '{}'", header));
  const long nv = parse_long(next("vertex count"), line_of());
  const long nf = parse_long(next("face count"), line_of());
  parse_long(next("edge count"), line_of());
  if (nv < 0 || nf < 0) throw ParseError("OFF: negative element count");

  std::vector<Vec3> vertices;
  vertices.reserve(static_cast<std::size_t>(nv));
  for (long i = 0; i < nv; ++i) {
    const double x = parse_double(next("vertex"), line_of());
    const double y = parse_double(next("vertex"), line_of());
    const double z = parse_double(next("vertex"), line_of());
    vertices.emplace_back(x, y, z);
  }
  std::vector<Triangle> faces;
  faces.reserve(static_cast<std::size_t>(nf));
  for (long i = 0; i < nf; ++i) {
    const long n = parse_long(next("face size"), line_of());
    const std::size_t face_line = line_of();
    if (n != 3)
      throw NonTriangleFace(fmt::format("line {}: face has {} vertices, only triangles are accepted", face_line, n));
    Triangle t{};
    for (int k = 0; k < 3; ++k) {
      const long idx = parse_long(next("face index"), line_of());
      if (idx < 0 || idx >= nv) throw ParseError(fmt::format("line {}: vertex index {} out of range", face_line, idx));
      t[k] = static_cast<VertexId>(idx);
    }
    faces.push_back(t);
    // Optional per-face colour values run to the end of the line.
    while (pos < tokens.size() && token_line[pos] == face_line) ++pos;
  }
  return finish(std::move(vertices), std::move(faces), options);
}

TriMesh load_mesh(const std::filesystem::path& path, MeshFormat format, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot open mesh file '" + path.string() + "'");
  return format == MeshFormat::Obj ? read_obj(in, options) : read_off(in, options);
}

TriMesh load_mesh(const std::filesystem::path& path) { return load_mesh(path, format_from_path(path)); }

void write_obj(const TriMesh& mesh, std::ostream& out) {
  fmt::memory_buffer buf;
  for (const auto& p : mesh.vertices()) fmt::format_to(std::back_inserter(buf), "v {} {} {}\n", p.x(), p.y(), p.z());
  for (const auto& t : mesh.faces()) fmt::format_to(std::back_inserter(buf), "f {} {} {}\n", t[0] + 1, t[1] + 1, t[2] + 1);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void write_obj(const TriMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("cannot write '" + path.string() + "'");
  write_obj(mesh, out);
  if (!out) throw IOError("write failed for '" + path.string() + "'");
}

}  // namespace wrapnet
