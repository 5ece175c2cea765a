#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "vnlw/grid.hpp"

namespace vnlw {

using Complex = std::complex<double>;

/// Thrown when a field or symbol carries NaN or infinity.
class NonFiniteError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when two operands live on different grids.
class GridMismatchError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

void require_same_grid(const Grid& a, const Grid& b, const char* context);

/// Real samples on the grid, row-major with the first (x) index slowest.
class RealField {
public:
    explicit RealField(const Grid& grid);
    RealField(const Grid& grid, std::vector<double> samples);

    template <typename F>
    static RealField from_function(const Grid& grid, F&& f)
    {
        std::vector<double> values(grid.size());
        for (std::size_t i = 0; i < grid.n(); ++i) {
            for (std::size_t j = 0; j < grid.n(); ++j) {
                values[grid.index(i, j)] = f(grid.coordinate(i), grid.coordinate(j));
            }
        }
        return RealField(grid, std::move(values));
    }

    const Grid& grid() const { return grid_; }
    std::span<const double> samples() const { return samples_; }
    std::span<double> mutable_samples() { return samples_; }
    double operator()(std::size_t i, std::size_t j) const { return samples_[grid_.index(i, j)]; }

    double max_abs() const;
    bool all_finite() const;
    bool is_zero() const;

    RealField& operator+=(const RealField& other);
    RealField& operator-=(const RealField& other);
    RealField& operator*=(double scale);

private:
    Grid grid_;
    std::vector<double> samples_;
};

RealField operator+(RealField a, const RealField& b);
RealField operator-(RealField a, const RealField& b);
RealField operator*(double scale, RealField a);

/// Unitary discrete Fourier coefficients, laid out like RealField.
class SpectralField {
public:
    explicit SpectralField(const Grid& grid);
    SpectralField(const Grid& grid, std::vector<Complex> coefficients);

    const Grid& grid() const { return grid_; }
    std::span<const Complex> coefficients() const { return coefficients_; }
    std::span<Complex> mutable_coefficients() { return coefficients_; }
    const Complex& operator()(std::size_t i, std::size_t j) const
    {
        return coefficients_[grid_.index(i, j)];
    }
    Complex& at(std::size_t i, std::size_t j) { return coefficients_[grid_.index(i, j)]; }

    /// max |F(xi) - conj(F(-xi))| over the lattice.
    double hermitian_defect() const;

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(Complex scale);

private:
    Grid grid_;
    std::vector<Complex> coefficients_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);

/// Phase-space point (v, d_t v).
struct StatePair {
    RealField position;
    RealField velocity;

    StatePair(RealField position_, RealField velocity_);
    static StatePair zero(const Grid& grid);

    const Grid& grid() const { return position.grid(); }
    bool is_zero() const { return position.is_zero() && velocity.is_zero(); }
};

StatePair operator-(const StatePair& a, const StatePair& b);

}  // namespace vnlw
