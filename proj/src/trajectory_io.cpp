#include "magdim/trajectory_io.hpp"

#include <fstream>
#include <string_view>

#include "magdim/binary.hpp"

namespace magdim {

namespace {
constexpr std::string_view kTrajectoryMagic = "MAGTRJ1";
}

void write_trajectory(std::ostream& out, const TrajectoryLog& log) {
  out.write(kTrajectoryMagic.data(), kTrajectoryMagic.size());
  detail::write_le(out, static_cast<std::uint32_t>(log.d));
  for (const auto& rec : log.records) {
    detail::write_le(out, rec.iteration);
    detail::write_f64(out, rec.train_loss);
    detail::write_f64(out, rec.test_accuracy);
    for (Eigen::Index k = 0; k < log.d; ++k) detail::write_f64(out, rec.weights(k));
  }
}

TrajectoryLog read_trajectory(std::istream& in) {
  char magic[7];
  if (!in.read(magic, 7) || std::string_view(magic, 7) != kTrajectoryMagic)
    throw Error(ErrorKind::DegenerateInput, "missing MAGTRJ1 magic");
  std::uint32_t d = 0;
  if (!detail::read_le(in, d)) throw Error(ErrorKind::DegenerateInput, "truncated trajectory header");
  TrajectoryLog log;
  log.d = d;
  while (in.peek() != std::char_traits<char>::eof()) {
    TrajectoryRecord rec;
    bool ok = detail::read_le(in, rec.iteration) && detail::read_f64(in, rec.train_loss) &&
              detail::read_f64(in, rec.test_accuracy);
    rec.weights.resize(d);
    for (std::uint32_t k = 0; ok && k < d; ++k) ok = detail::read_f64(in, rec.weights(k));
    if (!ok)
      throw Error(ErrorKind::DegenerateInput, "truncated record " + std::to_string(log.records.size()));
    if (!log.records.empty() && rec.iteration <= log.records.back().iteration)
      throw Error(ErrorKind::DegenerateInput, "trajectory iterations must be strictly increasing");
    if (!rec.weights.allFinite())
      throw Error(ErrorKind::DegenerateInput, "non-finite weight at iteration " + std::to_string(rec.iteration));
    log.records.push_back(std::move(rec));
  }
  return log;
}

void save_trajectory(const std::filesystem::path& path, const TrajectoryLog& log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  write_trajectory(out, log);
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

TrajectoryLog load_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return read_trajectory(in);
}

}  // namespace magdim
