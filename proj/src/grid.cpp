#include "vnlw/grid.hpp"

#include <stdexcept>
#include <string>

namespace vnlw {

Grid::Grid(std::size_t n_points, double side_length)
    : n_(n_points), side_length_(side_length)
{
    if (n_points < 8 || (n_points & (n_points - 1)) != 0) {
        throw std::invalid_argument("grid.n_points must be a power of two >= 8, got " +
                                    std::to_string(n_points));
    }
    if (!(side_length > 0.0) || !std::isfinite(side_length)) {
        throw std::invalid_argument("grid.side_length must be positive and finite");
    }
}

Grid Grid::padded(std::size_t n_points, double side_length)
{
    if (n_points < 2 || n_points % 2 != 0) {
        throw std::invalid_argument("padded grid size must be even, got " + std::to_string(n_points));
    }
    if (!(side_length > 0.0) || !std::isfinite(side_length)) {
        throw std::invalid_argument("side_length must be positive and finite");
    }
    return Grid(Unchecked{}, n_points, side_length);
}

}  // namespace vnlw
