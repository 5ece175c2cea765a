#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>

namespace vnlw {

/// Physical frequency vector xi = (xi_1, xi_2) in radians per unit length.
struct Frequency {
    double x = 0.0;
    double y = 0.0;

    double norm() const { return std::hypot(x, y); }
    /// <xi> = sqrt(1 + |xi|^2)
    double bracket() const { return std::sqrt(1.0 + x * x + y * y); }
};

/// Periodic square [0, L)^2 sampled on n x n nodes.
///
/// Lattice index i in [0, n) maps to the signed mode number in [-n/2, n/2),
/// so the frequency lattice is (2 pi / L) * {-n/2, ..., n/2 - 1}^2.
class Grid {
public:
    Grid(std::size_t n_points, double side_length);

    std::size_t n() const { return n_; }
    double side_length() const { return side_length_; }
    std::size_t size() const { return n_ * n_; }
    double spacing() const { return side_length_ / static_cast<double>(n_); }
    double cell_area() const { return spacing() * spacing(); }
    double wavenumber_unit() const { return 2.0 * std::numbers::pi / side_length_; }
    /// Largest resolved wavenumber along an axis, pi n / L.
    double nyquist() const { return std::numbers::pi * static_cast<double>(n_) / side_length_; }
    /// Largest |xi| on the lattice (the corner mode).
    double max_wavenumber() const { return std::sqrt(2.0) * nyquist(); }

    long mode(std::size_t i) const
    {
        const auto half = static_cast<long>(n_ / 2);
        const auto k = static_cast<long>(i);
        return k < half ? k : k - static_cast<long>(n_);
    }
    double wavenumber(std::size_t i) const { return wavenumber_unit() * static_cast<double>(mode(i)); }
    Frequency frequency(std::size_t i, std::size_t j) const { return {wavenumber(i), wavenumber(j)}; }
    /// Lattice index of -xi along one axis (the Nyquist index maps to itself).
    std::size_t mirror(std::size_t i) const { return (n_ - i) % n_; }
    double coordinate(std::size_t i) const { return spacing() * static_cast<double>(i); }

    std::size_t index(std::size_t i, std::size_t j) const { return i * n_ + j; }

    /// Same lattice with a different number of nodes per axis.
    Grid resized(std::size_t n_points) const { return Grid(n_points, side_length_); }

    bool operator==(const Grid& other) const
    {
        return n_ == other.n_ && side_length_ == other.side_length_;
    }

    /// Fine grid for dealiased products; any even size is allowed here.
    static Grid padded(std::size_t n_points, double side_length);

private:
    struct Unchecked {};
    Grid(Unchecked, std::size_t n_points, double side_length)
        : n_(n_points), side_length_(side_length) {}

    std::size_t n_;
    double side_length_;
};

}  // namespace vnlw
