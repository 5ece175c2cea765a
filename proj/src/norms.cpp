#include "vnlw/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vnlw/fft.hpp"

namespace vnlw {

namespace {

template <typename Weight>
double weighted_l2(const SpectralField& f, Weight&& weight)
{
    const Grid& g = f.grid();
    double sum = 0.0;
    for (std::size_t i = 0; i < g.n(); ++i) {
        for (std::size_t j = 0; j < g.n(); ++j) {
            sum += weight(g.frequency(i, j)) * std::norm(f(i, j));
        }
    }
    return std::sqrt(g.cell_area() * sum);
}

}  // namespace

double sobolev_norm(const SpectralField& f, double s)
{
    if (s == 0.0) return weighted_l2(f, [](const Frequency&) { return 1.0; });
    return weighted_l2(f, [s](const Frequency& xi) { return std::pow(1.0 + xi.x * xi.x + xi.y * xi.y, s); });
}

double sobolev_norm(const RealField& f, double s) { return sobolev_norm(forward_transform(f), s); }

double homogeneous_norm(const SpectralField& f, double s)
{
    return weighted_l2(f, [s](const Frequency& xi) {
        const double k2 = xi.x * xi.x + xi.y * xi.y;
        return k2 == 0.0 ? 0.0 : std::pow(k2, s);
    });
}

double homogeneous_norm(const RealField& f, double s) { return homogeneous_norm(forward_transform(f), s); }

double pair_norm(const StatePair& data, double s)
{
    const double a = sobolev_norm(data.position, s);
    const double b = sobolev_norm(data.velocity, s - 1.0);
    return std::sqrt(a * a + b * b);
}

double time_norm(std::span<const double> times, std::span<const double> spatial_norms, double q)
{
    if (times.size() != spatial_norms.size()) throw std::invalid_argument("time_norm: size mismatch");
    if (times.empty()) throw std::invalid_argument("time_norm: no samples");
    if (!(q >= 1.0)) throw std::invalid_argument("time_norm: q must be >= 1");
    double peak = 0.0;
    for (double v : spatial_norms) peak = std::max(peak, std::abs(v));
    if (std::isinf(q) || peak == 0.0) return peak;
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < times.size(); ++k) {
        const double a = std::pow(std::abs(spatial_norms[k]) / peak, q);
        const double b = std::pow(std::abs(spatial_norms[k + 1]) / peak, q);
        sum += 0.5 * (times[k + 1] - times[k]) * (a + b);
    }
    return peak * std::pow(sum, 1.0 / q);
}

double lebesgue_norm(const RealField& f, double r)
{
    if (!(r >= 1.0)) throw std::invalid_argument("lebesgue_norm: r must be >= 1");
    if (std::isinf(r)) return f.max_abs();
    const auto samples = f.samples();
    double sum = 0.0;
    if (r == 2.0) {
        for (double v : samples) sum += v * v;
        return std::sqrt(sum * f.grid().cell_area());
    }
    // Scale by the max so large r does not overflow.
    const double peak = f.max_abs();
    if (peak == 0.0) return 0.0;
    for (double v : samples) sum += std::pow(std::abs(v) / peak, r);
    return peak * std::pow(sum * f.grid().cell_area(), 1.0 / r);
}

}  // namespace vnlw
