#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>

#include "vnlw/field.hpp"

namespace vnlw {

/// Flat binary field snapshot.
///
/// 64-byte header: magic "VNLW", u32 version, u64 n_points, f64 side_length,
/// u32 payload kind, u32 field count, zero padding. Payload is row-major
/// little-endian float64 (complex values interleaved re, im).
enum class SnapshotKind : std::uint32_t {
    RealField = 1,
    StatePair = 2,
    SpectralField = 3,
};

inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::size_t kSnapshotHeaderBytes = 64;

class SnapshotError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SnapshotHeader {
    std::uint32_t version = kSnapshotVersion;
    std::uint64_t n_points = 0;
    double side_length = 0.0;
    SnapshotKind kind = SnapshotKind::RealField;
    std::uint32_t field_count = 1;
};

void write_snapshot(const std::filesystem::path& path, const RealField& field);
void write_snapshot(const std::filesystem::path& path, const StatePair& pair);
void write_snapshot(const std::filesystem::path& path, const SpectralField& spectrum);

SnapshotHeader read_snapshot_header(const std::filesystem::path& path);
RealField read_real_field(const std::filesystem::path& path);
StatePair read_state_pair(const std::filesystem::path& path);
SpectralField read_spectral_field(const std::filesystem::path& path);

}  // namespace vnlw
