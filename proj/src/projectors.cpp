#include "vnlw/projectors.hpp"

#include <cmath>
#include <stdexcept>

#include "vnlw/fft.hpp"
#include "vnlw/propagators.hpp"

namespace vnlw {

namespace {

bool is_dyadic(double m)
{
    if (!(m > 0.0) || !std::isfinite(m)) return false;
    int exponent = 0;
    const double mantissa = std::frexp(m, &exponent);
    return mantissa == 0.5 && exponent >= 0;  // m = 2^(exponent-1) >= 1/2
}

}  // namespace

double cutoff_profile(double r)
{
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    const double s = r - 1.0;
    return 1.0 - s * s * (3.0 - 2.0 * s);
}

double low_pass_symbol(double k, double cutoff) { return cutoff_profile(k / cutoff); }

double lp_symbol(double k, double dyadic)
{
    if (dyadic < 1.0) return 0.0;
    if (dyadic == 1.0) return cutoff_profile(k);
    return cutoff_profile(k / dyadic) - cutoff_profile(2.0 * k / dyadic);
}

SpectralField project_leq(const SpectralField& f, double cutoff)
{
    if (!(cutoff > 0.0)) throw std::invalid_argument("project_leq: cutoff must be > 0");
    return apply_radial(f, [cutoff](double k) { return low_pass_symbol(k, cutoff); });
}

RealField project_leq(const RealField& f, double cutoff)
{
    return inverse_transform(project_leq(forward_transform(f), cutoff));
}

RealField project_gt(const RealField& f, double cutoff)
{
    if (!(cutoff > 0.0)) throw std::invalid_argument("project_gt: cutoff must be > 0");
    return inverse_transform(
        apply_radial(forward_transform(f), [cutoff](double k) { return 1.0 - low_pass_symbol(k, cutoff); }));
}

RealField lp_project(const RealField& f, double dyadic)
{
    if (!is_dyadic(dyadic)) throw std::invalid_argument("lp_project: M must be a power of two >= 1/2");
    if (dyadic < 1.0) return RealField(f.grid());
    return inverse_transform(
        apply_radial(forward_transform(f), [dyadic](double k) { return lp_symbol(k, dyadic); }));
}

}  // namespace vnlw
