#include "gp/problem.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "core/errors.hpp"

namespace rotogp {

namespace {

constexpr double kNormTol = 1e-8;

void require_normalized(const ComplexField& phi, const char* where) {
    const double n = norm(phi);
    if (std::abs(n - 1.0) > kNormTol)
        throw InvalidArgument(std::string(where) + ": field is not normalized (norm " +
                              std::to_string(n) + ")");
}

}  // namespace

GpProblem GpProblem::harmonic(const Grid& grid, const std::array<double, 3>& omega, double a) {
    GpProblem p{grid, std::vector<double>(grid.size()), omega, a};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        auto x = grid.position(i);
        p.V[i] = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    }
    return p;
}

void GpProblem::validate() const {
    if (V.size() != grid.size()) throw GridMismatch("trap potential does not match grid");
    if (!(a >= 0.0) || !std::isfinite(a)) throw InvalidArgument("coupling a must be >= 0");
    for (double v : V)
        if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("trap potential must be finite and >= 0");
    for (double w : omega)
        if (!std::isfinite(w)) throw InvalidArgument("angular velocity must be finite");
    if (grid.dim() == 2 && (omega[0] != 0.0 || omega[1] != 0.0))
        throw InvalidArgument("2D problems admit only rotation about the z axis");
}

bool GpProblem::axisymmetric(double rel_tol) const {
    // On the cell-centred grid x = h(i - n/2 + 1/2), so 4 r^2 / h^2 is an
    // integer; group points by that integer and per z-layer.
    const double h = grid.spacing();
    std::map<std::pair<long long, int>, double> seen;
    double scale = 0.0;
    for (double v : V) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        auto ijk = grid.unravel(i);
        auto x = grid.position(i);
        const long long key = std::llround(4.0 * (x[0] * x[0] + x[1] * x[1]) / (h * h));
        auto [it, inserted] = seen.emplace(std::make_pair(key, ijk[2]), V[i]);
        if (!inserted && std::abs(it->second - V[i]) > rel_tol * std::max(1.0, scale)) return false;
    }
    return true;
}

GpFunctional::GpFunctional(const GpProblem& p) : p_(p), kin_(GaugeField(p.grid, p.omega)) {
    p_.validate();
}

double GpFunctional::linear_energy(const ComplexField& phi, const ComplexField& kphi) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i)
        acc += (std::conj(phi[i]) * kphi[i]).real() + p_.V[i] * std::norm(phi[i]);
    return acc * p_.grid.cell_volume();
}

double GpFunctional::energy(const ComplexField& phi) const {
    require_same_grid(phi.grid(), p_.grid, "gp_energy");
    require_normalized(phi, "gp_energy");
    return linear_energy(phi, kin_.apply(phi)) +
           4.0 * std::numbers::pi * p_.a * quartic_integral(phi);
}

ComplexField GpFunctional::gradient(const ComplexField& phi) const {
    require_same_grid(phi.grid(), p_.grid, "gp_gradient");
    ComplexField g = kin_.apply(phi);
    const double c = 8.0 * std::numbers::pi * p_.a;
    for (std::size_t i = 0; i < phi.size(); ++i)
        g[i] += (p_.V[i] + c * std::norm(phi[i])) * phi[i];
    return g;
}

double GpFunctional::chemical_potential(const ComplexField& phi) const {
    require_normalized(phi, "chemical_potential");
    return inner(phi, gradient(phi)).real();
}

double GpFunctional::residual(const ComplexField& phi) const {
    ComplexField g = gradient(phi);
    const double mu = inner(phi, g).real() / inner(phi, phi).real();
    for (std::size_t i = 0; i < phi.size(); ++i) g[i] -= mu * phi[i];
    return norm(g);
}

double gp_energy(const GpProblem& p, const ComplexField& phi) { return GpFunctional(p).energy(phi); }
ComplexField gp_gradient(const GpProblem& p, const ComplexField& phi) {
    return GpFunctional(p).gradient(phi);
}
double chemical_potential(const GpProblem& p, const ComplexField& phi) {
    return GpFunctional(p).chemical_potential(phi);
}
double gp_residual(const GpProblem& p, const ComplexField& phi) { return GpFunctional(p).residual(phi); }

}  // namespace rotogp
