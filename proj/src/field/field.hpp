#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "field/grid.hpp"

namespace rotogp {

using cplx = std::complex<double>;

class ComplexField {
public:
    ComplexField() = default;
    explicit ComplexField(const Grid& grid);
    ComplexField(const Grid& grid, std::vector<cplx> values);

    static ComplexField sample(const Grid& grid,
                               const std::function<cplx(double, double, double)>& f);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    cplx* data() { return values_.data(); }
    const cplx* data() const { return values_.data(); }
    std::vector<cplx>& values() { return values_; }
    const std::vector<cplx>& values() const { return values_; }
    cplx& operator[](std::size_t i) { return values_[i]; }
    const cplx& operator[](std::size_t i) const { return values_[i]; }

private:
    Grid grid_;
    std::vector<cplx> values_;
};

// Midpoint-rule inner product <f|g> = h^dim sum conj(f) g.
cplx inner(const ComplexField& f, const ComplexField& g);
double norm(const ComplexField& f);
// (integral |f|^p)^(1/p).
double norm_p(const ComplexField& f, double p);
// integral |f|^4, i.e. ||f||_4^4.
double quartic_integral(const ComplexField& f);
// ||grad f||_2^2 with spectral derivatives.
double gradient_norm_sq(const ComplexField& f);
// Scales f to unit L2 norm; returns the previous norm.
double normalize(ComplexField& f);
// max |f| on the outermost grid layer divided by max |f|.
double boundary_ratio(const ComplexField& f);
double max_abs(const ComplexField& f);

}  // namespace rotogp
