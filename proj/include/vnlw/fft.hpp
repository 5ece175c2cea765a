#pragma once

#include <span>

#include "vnlw/field.hpp"

namespace vnlw {

/// Unitary 2D DFT: F(xi) = n^-1 sum_x f(x) e^{-i xi.x}.
SpectralField forward_transform(const RealField& f);

/// Inverse of forward_transform; the imaginary part is discarded.
RealField inverse_transform(const SpectralField& spectrum);

/// Largest |Im| of the complex inverse transform, the reality residue.
double imaginary_residue(const SpectralField& spectrum);

struct CheckedInverse {
    RealField field;
    double imaginary_residue;
};

/// inverse_transform and imaginary_residue from a single transform.
CheckedInverse inverse_transform_checked(const SpectralField& spectrum);

namespace detail {

/// Unnormalised in-place 2D FFT of an n x n row-major buffer.
/// sign = -1 forward, +1 backward. Thread-safe; plans are cached per (n, sign).
void fft2_inplace(std::span<Complex> data, std::size_t n, int sign);

}  // namespace detail

}  // namespace vnlw
