#pragma once

#include <functional>
#include <string>

#include "vnlw/field.hpp"

namespace vnlw {

/// Scalar function of the frequency vector, evaluated on the lattice.
class MultiplierSymbol {
public:
    using Function = std::function<Complex(const Frequency&)>;

    explicit MultiplierSymbol(Function fn, std::string name = "symbol")
        : fn_(std::move(fn)), name_(std::move(name)) {}

    /// Symbol depending only on |xi|.
    static MultiplierSymbol radial(std::function<double(double)> fn, std::string name = "radial");

    Complex operator()(const Frequency& xi) const { return fn_(xi); }
    const std::string& name() const { return name_; }

private:
    Function fn_;
    std::string name_;
};

/// Coefficientwise product. Throws NonFiniteError naming the first offending frequency.
SpectralField apply_multiplier(const SpectralField& spectrum, const MultiplierSymbol& symbol);
RealField apply_multiplier(const RealField& f, const MultiplierSymbol& symbol);

/// D^alpha = |nabla|^alpha; the zero mode is annihilated for alpha > 0.
RealField frac_laplacian(const RealField& f, double alpha);

/// <nabla>^s with symbol (1 + |xi|^2)^{s/2}.
RealField bessel_potential(const RealField& f, double s);

}  // namespace vnlw
