#pragma once

#include <filesystem>
#include <iosfwd>

#include "magdim/trainer.hpp"

namespace magdim {

// "MAGTRJ1", u32 d, then per record: u64 iteration, f64 train_loss,
// f64 test_accuracy (NaN when absent), d x f64 weights. Little endian.

void write_trajectory(std::ostream& out, const TrajectoryLog& log);
TrajectoryLog read_trajectory(std::istream& in);

void save_trajectory(const std::filesystem::path& path, const TrajectoryLog& log);
TrajectoryLog load_trajectory(const std::filesystem::path& path);

}  // namespace magdim
