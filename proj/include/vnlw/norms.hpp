#pragma once

#include <limits>
#include <span>

#include "vnlw/field.hpp"

namespace vnlw {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// H^s norm: (cell area * sum <xi>^{2s} |F|^2)^{1/2}; exact lattice sum.
double sobolev_norm(const RealField& f, double s);
double sobolev_norm(const SpectralField& f, double s);
/// Homogeneous Hdot^s norm with weight |xi|^s; the zero mode is excluded.
double homogeneous_norm(const RealField& f, double s);
double homogeneous_norm(const SpectralField& f, double s);
/// Norm on H^s x H^{s-1}.
double pair_norm(const StatePair& data, double s);
/// Composite-trapezoid L^q_t norm of per-time spatial norms; q = kInfinity takes the max.
double time_norm(std::span<const double> times, std::span<const double> spatial_norms, double q);

/// Midpoint-rule L^r norm, r in [1, inf]; r = kInfinity gives the max.
double lebesgue_norm(const RealField& f, double r);

}  // namespace vnlw
