#pragma once

#include <array>
#include <cstddef>

namespace rotogp {

// Cell-centred periodic grid on [-L/2, L/2)^dim: x_i = -L/2 + (i + 1/2) h.
// The origin falls on a cell corner, i.e. the centre of a plaquette.
class Grid {
public:
    Grid() = default;
    Grid(int dim, int n, double L);

    int dim() const { return dim_; }
    int n() const { return n_; }
    double extent() const { return L_; }
    double spacing() const { return L_ / n_; }
    double cell_volume() const;
    std::size_t size() const { return size_; }

    double coord(int i) const { return -0.5 * L_ + (i + 0.5) * spacing(); }
    double wavenumber(int i) const;

    // Row-major multi-index; axis 0 varies slowest. Unused axes are 0.
    std::array<int, 3> unravel(std::size_t idx) const;
    std::size_t ravel(const std::array<int, 3>& ijk) const;
    std::array<double, 3> position(std::size_t idx) const;
    std::array<double, 3> wavevector(std::size_t idx) const;

    bool operator==(const Grid& other) const;
    bool operator!=(const Grid& other) const { return !(*this == other); }

private:
    int dim_ = 0;
    int n_ = 0;
    double L_ = 0.0;
    std::size_t size_ = 0;
};

void require_same_grid(const Grid& a, const Grid& b, const char* where);

}  // namespace rotogp
