#pragma once

#include <array>
#include <vector>

#include "field/field.hpp"
#include "field/gauge.hpp"

namespace rotogp {

struct GpProblem {
    Grid grid;
    std::vector<double> V;  // trap, given as-is (V >= 0)
    std::array<double, 3> omega{0.0, 0.0, 0.0};
    double a = 0.0;

    // V = |x|^2.
    static GpProblem harmonic(const Grid& grid, const std::array<double, 3>& omega, double a);
    void validate() const;
    // True when V depends on (x, y) only through x^2 + y^2 on the grid.
    bool axisymmetric(double rel_tol = 1e-12) const;
};

// Precomputed operator pieces for repeated evaluation on one problem.
class GpFunctional {
public:
    explicit GpFunctional(const GpProblem& p);

    const GpProblem& problem() const { return p_; }
    const KineticOperator& kinetic() const { return kin_; }

    // <phi|(-i grad + A)^2 + V|phi> given K phi.
    double linear_energy(const ComplexField& phi, const ComplexField& kphi) const;
    double energy(const ComplexField& phi) const;
    ComplexField gradient(const ComplexField& phi) const;
    double chemical_potential(const ComplexField& phi) const;
    // ||grad - mu phi||_2.
    double residual(const ComplexField& phi) const;

private:
    GpProblem p_;
    KineticOperator kin_;
};

double gp_energy(const GpProblem& p, const ComplexField& phi);
ComplexField gp_gradient(const GpProblem& p, const ComplexField& phi);
double chemical_potential(const GpProblem& p, const ComplexField& phi);
double gp_residual(const GpProblem& p, const ComplexField& phi);

}  // namespace rotogp
