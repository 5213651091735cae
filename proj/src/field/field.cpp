#include "field/field.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "field/spectral.hpp"

namespace rotogp {

ComplexField::ComplexField(const Grid& grid) : grid_(grid), values_(grid.size(), cplx(0.0, 0.0)) {}

ComplexField::ComplexField(const Grid& grid, std::vector<cplx> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw GridMismatch("field value count does not match grid size");
}

ComplexField ComplexField::sample(const Grid& grid,
                                  const std::function<cplx(double, double, double)>& f) {
    ComplexField out(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        auto x = grid.position(i);
        out[i] = f(x[0], x[1], x[2]);
    }
    return out;
}

cplx inner(const ComplexField& f, const ComplexField& g) {
    require_same_grid(f.grid(), g.grid(), "inner");
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) acc += std::conj(f[i]) * g[i];
    return acc * f.grid().cell_volume();
}

double norm(const ComplexField& f) {
    double acc = 0.0;
    for (const auto& v : f.values()) acc += std::norm(v);
    return std::sqrt(acc * f.grid().cell_volume());
}

double norm_p(const ComplexField& f, double p) {
    if (!(p > 0.0)) throw InvalidArgument("norm_p: p must be positive");
    double acc = 0.0;
    for (const auto& v : f.values()) acc += std::pow(std::abs(v), p);
    return std::pow(acc * f.grid().cell_volume(), 1.0 / p);
}

double quartic_integral(const ComplexField& f) {
    double acc = 0.0;
    for (const auto& v : f.values()) {
        const double m = std::norm(v);
        acc += m * m;
    }
    return acc * f.grid().cell_volume();
}

double gradient_norm_sq(const ComplexField& f) {
    double acc = 0.0;
    for (int axis = 0; axis < f.grid().dim(); ++axis) {
        const double n = norm(derivative(f, axis));
        acc += n * n;
    }
    return acc;
}

double normalize(ComplexField& f) {
    const double n = norm(f);
    if (!(n > 0.0) || !std::isfinite(n)) throw NumericalError("normalize: zero or non-finite norm");
    for (auto& v : f.values()) v /= n;
    return n;
}

double max_abs(const ComplexField& f) {
    double m = 0.0;
    for (const auto& v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

double boundary_ratio(const ComplexField& f) {
    const Grid& g = f.grid();
    const double peak = max_abs(f);
    if (peak == 0.0) return 0.0;
    double edge = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto ijk = g.unravel(i);
        bool on_edge = false;
        for (int d = 0; d < g.dim(); ++d) on_edge = on_edge || ijk[d] == 0 || ijk[d] == g.n() - 1;
        if (on_edge) edge = std::max(edge, std::abs(f[i]));
    }
    return edge / peak;
}

}  // namespace rotogp
