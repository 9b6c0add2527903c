#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "magdim/metric.hpp"

namespace magdim {

// Text form: optional '#' comment lines, then one point per line with d
// comma-separated decimals. Binary form: "MAGPC1", u32 n, u32 d (little
// endian), then n*d little-endian f64 coordinates in row-major order.

PointCloud read_cloud_csv(std::istream& in);
void write_cloud_csv(std::ostream& out, const PointCloud& cloud, const std::string& header_comment = {});

PointCloud read_cloud_binary(std::istream& in);
void write_cloud_binary(std::ostream& out, const PointCloud& cloud);

/// Picks the format from the leading magic bytes.
PointCloud load_cloud(const std::filesystem::path& path);
/// Binary when the extension is ".bin" or ".magpc", CSV otherwise.
void save_cloud(const std::filesystem::path& path, const PointCloud& cloud, const std::string& header_comment = {});

/// Strict decimal parse of a whole field (surrounding blanks allowed);
/// throws DegenerateInput on anything else.
double parse_double(std::string_view field);

/// "%.17g", the shortest printf form that round-trips every double.
std::string format_double(double v);

}  // namespace magdim
