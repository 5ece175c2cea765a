#include "vnlw/snapshot.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

namespace vnlw {

namespace {

constexpr std::array<char, 4> kMagic = {'V', 'N', 'L', 'W'};

template <typename T>
void put_le(std::vector<unsigned char>& out, std::size_t offset, T value)
{
    static_assert(std::is_trivially_copyable_v<T>);
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    std::memcpy(out.data() + offset, bytes, sizeof(T));
}

template <typename T>
T get_le(const unsigned char* in)
{
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, in, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
}

std::vector<unsigned char> encode_header(const Grid& grid, SnapshotKind kind, std::uint32_t field_count)
{
    std::vector<unsigned char> header(kSnapshotHeaderBytes, 0);
    std::memcpy(header.data(), kMagic.data(), kMagic.size());
    put_le<std::uint32_t>(header, 4, kSnapshotVersion);
    put_le<std::uint64_t>(header, 8, grid.n());
    put_le<double>(header, 16, grid.side_length());
    put_le<std::uint32_t>(header, 24, static_cast<std::uint32_t>(kind));
    put_le<std::uint32_t>(header, 28, field_count);
    return header;
}

void append_doubles(std::vector<unsigned char>& out, std::span<const double> values)
{
    const std::size_t start = out.size();
    out.resize(start + values.size() * sizeof(double));
    for (std::size_t k = 0; k < values.size(); ++k) put_le<double>(out, start + k * sizeof(double), values[k]);
}

void write_bytes(const std::filesystem::path& path, const std::vector<unsigned char>& bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw SnapshotError("cannot open snapshot for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw SnapshotError("short write to snapshot: " + path.string());
}

std::vector<unsigned char> read_bytes(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SnapshotError("cannot open snapshot: " + path.string());
    return std::vector<unsigned char>(std::istreambuf_iterator<char>(in), {});
}

SnapshotHeader decode_header(const std::vector<unsigned char>& bytes, const std::filesystem::path& path)
{
    if (bytes.size() < kSnapshotHeaderBytes || std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
        throw SnapshotError("not a VNLW snapshot: " + path.string());
    }
    SnapshotHeader h;
    h.version = get_le<std::uint32_t>(bytes.data() + 4);
    h.n_points = get_le<std::uint64_t>(bytes.data() + 8);
    h.side_length = get_le<double>(bytes.data() + 16);
    h.kind = static_cast<SnapshotKind>(get_le<std::uint32_t>(bytes.data() + 24));
    h.field_count = get_le<std::uint32_t>(bytes.data() + 28);
    if (h.version != kSnapshotVersion) {
        throw SnapshotError("unsupported snapshot version " + std::to_string(h.version));
    }
    return h;
}

struct Decoded {
    SnapshotHeader header;
    Grid grid;
    std::vector<double> values;
};

Decoded decode(const std::filesystem::path& path, SnapshotKind expected)
{
    const auto bytes = read_bytes(path);
    const SnapshotHeader h = decode_header(bytes, path);
    if (h.kind != expected) throw SnapshotError("unexpected payload kind in " + path.string());
    Grid grid(h.n_points, h.side_length);
    const std::size_t per_field = expected == SnapshotKind::SpectralField ? 2 * grid.size() : grid.size();
    const std::size_t count = per_field * h.field_count;
    if (bytes.size() != kSnapshotHeaderBytes + count * sizeof(double)) {
        throw SnapshotError("truncated or oversized snapshot: " + path.string());
    }
    std::vector<double> values(count);
    for (std::size_t k = 0; k < count; ++k) {
        values[k] = get_le<double>(bytes.data() + kSnapshotHeaderBytes + k * sizeof(double));
    }
    return {h, grid, std::move(values)};
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const RealField& field)
{
    auto bytes = encode_header(field.grid(), SnapshotKind::RealField, 1);
    append_doubles(bytes, field.samples());
    write_bytes(path, bytes);
}

void write_snapshot(const std::filesystem::path& path, const StatePair& pair)
{
    auto bytes = encode_header(pair.grid(), SnapshotKind::StatePair, 2);
    append_doubles(bytes, pair.position.samples());
    append_doubles(bytes, pair.velocity.samples());
    write_bytes(path, bytes);
}

void write_snapshot(const std::filesystem::path& path, const SpectralField& spectrum)
{
    auto bytes = encode_header(spectrum.grid(), SnapshotKind::SpectralField, 1);
    const auto coeffs = spectrum.coefficients();
    std::vector<double> flat;
    flat.reserve(2 * coeffs.size());
    for (const Complex& c : coeffs) {
        flat.push_back(c.real());
        flat.push_back(c.imag());
    }
    append_doubles(bytes, flat);
    write_bytes(path, bytes);
}

SnapshotHeader read_snapshot_header(const std::filesystem::path& path)
{
    return decode_header(read_bytes(path), path);
}

RealField read_real_field(const std::filesystem::path& path)
{
    auto d = decode(path, SnapshotKind::RealField);
    return RealField(d.grid, std::move(d.values));
}

StatePair read_state_pair(const std::filesystem::path& path)
{
    auto d = decode(path, SnapshotKind::StatePair);
    const auto half = static_cast<std::ptrdiff_t>(d.grid.size());
    std::vector<double> pos(d.values.begin(), d.values.begin() + half);
    std::vector<double> vel(d.values.begin() + half, d.values.end());
    return StatePair(RealField(d.grid, std::move(pos)), RealField(d.grid, std::move(vel)));
}

SpectralField read_spectral_field(const std::filesystem::path& path)
{
    auto d = decode(path, SnapshotKind::SpectralField);
    std::vector<Complex> coeffs(d.grid.size());
    for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] = Complex(d.values[2 * k], d.values[2 * k + 1]);
    return SpectralField(d.grid, std::move(coeffs));
}

}  // namespace vnlw
