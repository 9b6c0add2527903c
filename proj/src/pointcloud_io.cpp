#include "magdim/pointcloud_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

#include "magdim/binary.hpp"

namespace magdim {

namespace {

constexpr std::string_view kCloudMagic = "MAGPC1";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_field(std::string_view field, std::size_t line_no) {
  try {
    return parse_double(field);
  } catch (const Error& e) {
    throw Error(ErrorKind::DegenerateInput, "line " + std::to_string(line_no) + ": " + e.what());
  }
}

}  // namespace

double parse_double(std::string_view field) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty())
    throw Error(ErrorKind::DegenerateInput, "cannot parse '" + std::string(field) + "' as a number");
  return v;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

PointCloud read_cloud_csv(std::istream& in) {
  std::vector<double> coords;
  Eigen::Index dim = -1;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    Eigen::Index count = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = view.find(',', start);
      coords.push_back(parse_field(view.substr(start, comma - start), line_no));
      ++count;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (dim < 0) dim = count;
    if (count != dim)
      throw Error(ErrorKind::DegenerateInput, "line " + std::to_string(line_no) + ": expected " +
                                                  std::to_string(dim) + " coordinates, got " + std::to_string(count));
  }
  if (dim < 0) throw Error(ErrorKind::DegenerateInput, "point-cloud CSV contains no points");
  const Eigen::Index n = static_cast<Eigen::Index>(coords.size()) / dim;
  return PointCloud(Eigen::Map<const PointCloud::Matrix>(coords.data(), n, dim));
}

void write_cloud_csv(std::ostream& out, const PointCloud& cloud, const std::string& header_comment) {
  if (!header_comment.empty()) out << "# " << header_comment << '\n';
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    for (Eigen::Index j = 0; j < cloud.dim(); ++j) {
      if (j) out << ',';
      out << format_double(cloud.points()(i, j));
    }
    out << '\n';
  }
}

PointCloud read_cloud_binary(std::istream& in) {
  char magic[6];
  if (!in.read(magic, 6) || std::string_view(magic, 6) != kCloudMagic)
    throw Error(ErrorKind::DegenerateInput, "missing MAGPC1 magic");
  std::uint32_t n = 0, d = 0;
  if (!detail::read_le(in, n) || !detail::read_le(in, d))
    throw Error(ErrorKind::DegenerateInput, "truncated point-cloud header");
  PointCloud::Matrix points(n, d);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < d; ++j)
      if (!detail::read_f64(in, points(i, j)))
        throw Error(ErrorKind::DegenerateInput, "truncated point-cloud payload");
  return PointCloud(std::move(points));
}

void write_cloud_binary(std::ostream& out, const PointCloud& cloud) {
  out.write(kCloudMagic.data(), kCloudMagic.size());
  detail::write_le(out, static_cast<std::uint32_t>(cloud.size()));
  detail::write_le(out, static_cast<std::uint32_t>(cloud.dim()));
  for (Eigen::Index i = 0; i < cloud.size(); ++i)
    for (Eigen::Index j = 0; j < cloud.dim(); ++j) detail::write_f64(out, cloud.points()(i, j));
}

PointCloud load_cloud(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  char magic[6] = {};
  in.read(magic, 6);
  const bool binary = in.gcount() == 6 && std::string_view(magic, 6) == kCloudMagic;
  in.clear();
  in.seekg(0);
  return binary ? read_cloud_binary(in) : read_cloud_csv(in);
}

void save_cloud(const std::filesystem::path& path, const PointCloud& cloud, const std::string& header_comment) {
  const auto ext = path.extension();
  const bool binary = ext == ".bin" || ext == ".magpc";
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  if (binary)
    write_cloud_binary(out, cloud);
  else
    write_cloud_csv(out, cloud, header_comment);
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace magdim
