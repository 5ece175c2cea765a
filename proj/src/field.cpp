#include "vnlw/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vnlw {

void require_same_grid(const Grid& a, const Grid& b, const char* context)
{
    if (!(a == b)) {
        throw GridMismatchError(std::string(context) + ": operands live on different grids");
    }
}

RealField::RealField(const Grid& grid) : grid_(grid), samples_(grid.size(), 0.0) {}

RealField::RealField(const Grid& grid, std::vector<double> samples)
    : grid_(grid), samples_(std::move(samples))
{
    if (samples_.size() != grid_.size()) {
        throw std::invalid_argument("RealField: sample count " + std::to_string(samples_.size()) +
                                    " does not match grid size " + std::to_string(grid_.size()));
    }
    if (!all_finite()) {
        throw NonFiniteError("RealField: non-finite sample");
    }
}

double RealField::max_abs() const
{
    double m = 0.0;
    for (double s : samples_) m = std::max(m, std::abs(s));
    return m;
}

bool RealField::all_finite() const
{
    return std::all_of(samples_.begin(), samples_.end(), [](double s) { return std::isfinite(s); });
}

bool RealField::is_zero() const
{
    return std::all_of(samples_.begin(), samples_.end(), [](double s) { return s == 0.0; });
}

RealField& RealField::operator+=(const RealField& other)
{
    require_same_grid(grid_, other.grid_, "RealField +=");
    for (std::size_t k = 0; k < samples_.size(); ++k) samples_[k] += other.samples_[k];
    return *this;
}

RealField& RealField::operator-=(const RealField& other)
{
    require_same_grid(grid_, other.grid_, "RealField -=");
    for (std::size_t k = 0; k < samples_.size(); ++k) samples_[k] -= other.samples_[k];
    return *this;
}

RealField& RealField::operator*=(double scale)
{
    for (double& s : samples_) s *= scale;
    return *this;
}

RealField operator+(RealField a, const RealField& b) { return a += b; }
RealField operator-(RealField a, const RealField& b) { return a -= b; }
RealField operator*(double scale, RealField a) { return a *= scale; }

SpectralField::SpectralField(const Grid& grid) : grid_(grid), coefficients_(grid.size()) {}

SpectralField::SpectralField(const Grid& grid, std::vector<Complex> coefficients)
    : grid_(grid), coefficients_(std::move(coefficients))
{
    if (coefficients_.size() != grid_.size()) {
        throw std::invalid_argument("SpectralField: coefficient count does not match grid size");
    }
}

double SpectralField::hermitian_defect() const
{
    const std::size_t n = grid_.n();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const Complex a = (*this)(i, j);
            const Complex b = std::conj((*this)(grid_.mirror(i), grid_.mirror(j)));
            worst = std::max(worst, std::abs(a - b));
        }
    }
    return worst;
}

SpectralField& SpectralField::operator+=(const SpectralField& other)
{
    require_same_grid(grid_, other.grid_, "SpectralField +=");
    for (std::size_t k = 0; k < coefficients_.size(); ++k) coefficients_[k] += other.coefficients_[k];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other)
{
    require_same_grid(grid_, other.grid_, "SpectralField -=");
    for (std::size_t k = 0; k < coefficients_.size(); ++k) coefficients_[k] -= other.coefficients_[k];
    return *this;
}

SpectralField& SpectralField::operator*=(Complex scale)
{
    for (Complex& c : coefficients_) c *= scale;
    return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }

StatePair::StatePair(RealField position_, RealField velocity_)
    : position(std::move(position_)), velocity(std::move(velocity_))
{
    require_same_grid(position.grid(), velocity.grid(), "StatePair");
}

StatePair StatePair::zero(const Grid& grid) { return StatePair(RealField(grid), RealField(grid)); }

StatePair operator-(const StatePair& a, const StatePair& b)
{
    return StatePair(a.position - b.position, a.velocity - b.velocity);
}

}  // namespace vnlw
