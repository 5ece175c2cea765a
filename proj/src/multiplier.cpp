#include "vnlw/multiplier.hpp"

#include <cmath>
#include <sstream>

#include "vnlw/fft.hpp"

namespace vnlw {

MultiplierSymbol MultiplierSymbol::radial(std::function<double(double)> fn, std::string name)
{
    return MultiplierSymbol([fn = std::move(fn)](const Frequency& xi) { return Complex(fn(xi.norm()), 0.0); },
                            std::move(name));
}

SpectralField apply_multiplier(const SpectralField& spectrum, const MultiplierSymbol& symbol)
{
    const Grid& g = spectrum.grid();
    SpectralField out(g);
    for (std::size_t i = 0; i < g.n(); ++i) {
        for (std::size_t j = 0; j < g.n(); ++j) {
            const Frequency xi = g.frequency(i, j);
            const Complex m = symbol(xi);
            if (!std::isfinite(m.real()) || !std::isfinite(m.imag())) {
                std::ostringstream msg;
                msg << "apply_multiplier: symbol '" << symbol.name() << "' is not finite at xi = ("
                    << xi.x << ", " << xi.y << ")";
                throw NonFiniteError(msg.str());
            }
            out.at(i, j) = m * spectrum(i, j);
        }
    }
    return out;
}

RealField apply_multiplier(const RealField& f, const MultiplierSymbol& symbol)
{
    return inverse_transform(apply_multiplier(forward_transform(f), symbol));
}

RealField frac_laplacian(const RealField& f, double alpha)
{
    if (!(alpha >= 0.0)) throw std::invalid_argument("frac_laplacian: alpha must be >= 0");
    if (alpha == 0.0) return f;
    return apply_multiplier(
        f, MultiplierSymbol::radial([alpha](double k) { return k == 0.0 ? 0.0 : std::pow(k, alpha); },
                                    "|xi|^alpha"));
}

RealField bessel_potential(const RealField& f, double s)
{
    return apply_multiplier(
        f, MultiplierSymbol::radial([s](double k) { return std::pow(1.0 + k * k, 0.5 * s); }, "<xi>^s"));
}

}  // namespace vnlw
