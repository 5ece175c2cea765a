#pragma once

#include <filesystem>

#include "vnlw/solver.hpp"

namespace vnlw {

/// Directory layout:
///   trajectory.txt     key = value manifest (params, seed, digests, times)
///   v_NNNNNN.bin       StatePair snapshot of (v, d_t v)
///   z_NNNNNN.bin       RealField snapshots of z and z-tilde (z_tilde_NNNNNN.bin)
/// Times are written with 17 significant digits so a reload is exact.
void save_trajectory(const std::filesystem::path& directory, const Trajectory& traj);

Trajectory load_trajectory(const std::filesystem::path& directory);

}  // namespace vnlw
