#pragma once

#include "qns/sme.hpp"

#include <string>

namespace qns {

// Binary trajectory format, little-endian:
//   8 bytes magic "QNSTRAJ1", u32 dim, f64 dt, u64 steps, u64 seed,
//   f64 beta, u64 model_hash, then steps * f64 detector samples.
// A JSON sidecar <path>.json carries the diagnostics. Round trips bit-exactly.
void write_trajectory(const std::string& path, const TrajectoryRecord& rec);
TrajectoryRecord read_trajectory(const std::string& path);

} // namespace qns
