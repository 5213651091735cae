#include "field/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "core/errors.hpp"

namespace rotogp {

Grid::Grid(int dim, int n, double L) : dim_(dim), n_(n), L_(L) {
    if (dim != 2 && dim != 3) throw InvalidArgument("grid dimension must be 2 or 3");
    if (n <= 0 || n % 2 != 0) throw InvalidArgument("grid points per axis must be even and positive");
    if (!(L > 0.0) || !std::isfinite(L)) throw InvalidArgument("grid extent must be positive");
    size_ = 1;
    for (int d = 0; d < dim; ++d) size_ *= static_cast<std::size_t>(n);
}

double Grid::cell_volume() const { return std::pow(spacing(), dim_); }

double Grid::wavenumber(int i) const {
    const int k = i < n_ / 2 ? i : i - n_;
    return 2.0 * std::numbers::pi * k / L_;
}

std::array<int, 3> Grid::unravel(std::size_t idx) const {
    std::array<int, 3> ijk{0, 0, 0};
    for (int d = dim_ - 1; d >= 0; --d) {
        ijk[d] = static_cast<int>(idx % n_);
        idx /= n_;
    }
    return ijk;
}

std::size_t Grid::ravel(const std::array<int, 3>& ijk) const {
    std::size_t idx = 0;
    for (int d = 0; d < dim_; ++d) idx = idx * n_ + ijk[d];
    return idx;
}

std::array<double, 3> Grid::position(std::size_t idx) const {
    auto ijk = unravel(idx);
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int d = 0; d < dim_; ++d) x[d] = coord(ijk[d]);
    return x;
}

std::array<double, 3> Grid::wavevector(std::size_t idx) const {
    auto ijk = unravel(idx);
    std::array<double, 3> k{0.0, 0.0, 0.0};
    for (int d = 0; d < dim_; ++d) k[d] = wavenumber(ijk[d]);
    return k;
}

bool Grid::operator==(const Grid& other) const {
    return dim_ == other.dim_ && n_ == other.n_ && L_ == other.L_;
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
    if (a != b) throw GridMismatch(std::string(where) + ": fields live on different grids");
}

}  // namespace rotogp
