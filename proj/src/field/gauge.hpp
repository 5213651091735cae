#pragma once

#include <array>
#include <vector>

#include "field/field.hpp"

namespace rotogp {

// A(x) = (1/2) Omega x x sampled on the grid.
class GaugeField {
public:
    GaugeField(const Grid& grid, const std::array<double, 3>& omega);

    const Grid& grid() const { return grid_; }
    const std::array<double, 3>& omega() const { return omega_; }
    const std::vector<double>& component(int axis) const { return a_[axis]; }
    const std::vector<double>& squared() const { return a2_; }
    bool active(int axis) const { return active_[axis]; }
    bool vanishes() const { return !active_[0] && !active_[1] && !active_[2]; }

private:
    Grid grid_;
    std::array<double, 3> omega_;
    std::array<std::vector<double>, 3> a_;
    std::array<bool, 3> active_{false, false, false};
    std::vector<double> a2_;
};

// Magnetic kinetic operator (-i grad + A)^2 in the symmetric form
// -Lap - i(A.D + D.A) + |A|^2, which equals -Lap - 2iA.grad + |A|^2 because
// div A = 0, and is exactly Hermitian and positive on the grid.
class KineticOperator {
public:
    explicit KineticOperator(const GaugeField& A);

    const Grid& grid() const { return A_.grid(); }
    const GaugeField& gauge() const { return A_; }

    // out = laplace_coeff*(-Lap) in + [rotation] (-i)(A.D + D.A) in + [a2] |A|^2 in.
    void apply(const cplx* in, cplx* out, double laplace_coeff = 1.0, bool rotation = true,
               bool a2 = true) const;
    ComplexField apply(const ComplexField& f) const;

    const std::vector<double>& k_squared() const { return k2_; }

private:
    GaugeField A_;
    std::vector<double> k2_;
    std::array<std::vector<double>, 3> kd_;
};

ComplexField apply_gauge_kinetic(const ComplexField& phi, const GaugeField& A);
// Re <phi|(-i grad + A)^2|phi>.
double gauge_kinetic_energy(const ComplexField& phi, const GaugeField& A);

}  // namespace rotogp
