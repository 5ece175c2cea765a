#include "vnlw/seeding.hpp"

#include <cmath>
#include <numbers>

namespace vnlw {

double CounterStream::uniform()
{
    // 53 random bits, shifted off zero.
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterStream::normal()
{
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace vnlw
