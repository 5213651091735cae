#include "field/gauge.hpp"

#include "core/errors.hpp"
#include "field/spectral.hpp"

namespace rotogp {

GaugeField::GaugeField(const Grid& grid, const std::array<double, 3>& omega)
    : grid_(grid), omega_(omega) {
    if (grid.dim() == 2 && (omega[0] != 0.0 || omega[1] != 0.0))
        throw InvalidArgument("2D problems admit only rotation about the z axis");
    for (auto& c : a_) c.assign(grid.size(), 0.0);
    a2_.assign(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        auto x = grid.position(i);
        const double ax = 0.5 * (omega[1] * x[2] - omega[2] * x[1]);
        const double ay = 0.5 * (omega[2] * x[0] - omega[0] * x[2]);
        const double az = 0.5 * (omega[0] * x[1] - omega[1] * x[0]);
        a_[0][i] = ax;
        a_[1][i] = ay;
        a_[2][i] = az;
        a2_[i] = ax * ax + ay * ay + az * az;
    }
    active_[0] = omega[1] != 0.0 || omega[2] != 0.0;
    active_[1] = omega[2] != 0.0 || omega[0] != 0.0;
    active_[2] = grid.dim() == 3 && (omega[0] != 0.0 || omega[1] != 0.0);
}

KineticOperator::KineticOperator(const GaugeField& A) : A_(A), k2_(rotogp::k_squared(A.grid())) {
    for (int d = 0; d < A.grid().dim(); ++d) kd_[d] = derivative_symbol(A.grid(), d);
}

void KineticOperator::apply(const cplx* in, cplx* out, double laplace_coeff, bool rotation,
                            bool a2) const {
    const Grid& g = grid();
    const std::size_t n = g.size();
    std::vector<cplx> hat(n), work(n), tmp(n), div_hat(n, cplx(0.0, 0.0));
    fft(g, in, hat.data(), Direction::forward);
    for (std::size_t i = 0; i < n; ++i) work[i] = laplace_coeff * k2_[i] * hat[i];
    fft(g, work.data(), out, Direction::inverse);
    if (rotation && !A_.vanishes()) {
        const cplx mi(0.0, -1.0);
        for (int d = 0; d < g.dim(); ++d) {
            if (!A_.active(d)) continue;
            const auto& a = A_.component(d);
            const auto& k = kd_[d];
            // A_d D_d in
            for (std::size_t i = 0; i < n; ++i) work[i] = cplx(0.0, k[i]) * hat[i];
            fft(g, work.data(), tmp.data(), Direction::inverse);
            for (std::size_t i = 0; i < n; ++i) out[i] += mi * a[i] * tmp[i];
            // D_d (A_d in), accumulated in Fourier space
            for (std::size_t i = 0; i < n; ++i) work[i] = a[i] * in[i];
            fft(g, work.data(), tmp.data(), Direction::forward);
            for (std::size_t i = 0; i < n; ++i) div_hat[i] += cplx(0.0, k[i]) * tmp[i];
        }
        fft(g, div_hat.data(), tmp.data(), Direction::inverse);
        for (std::size_t i = 0; i < n; ++i) out[i] += mi * tmp[i];
    }
    if (a2 && !A_.vanishes()) {
        const auto& s = A_.squared();
        for (std::size_t i = 0; i < n; ++i) out[i] += s[i] * in[i];
    }
}

ComplexField KineticOperator::apply(const ComplexField& f) const {
    require_same_grid(f.grid(), grid(), "apply_gauge_kinetic");
    ComplexField out(f.grid());
    apply(f.data(), out.data());
    return out;
}

ComplexField apply_gauge_kinetic(const ComplexField& phi, const GaugeField& A) {
    require_same_grid(phi.grid(), A.grid(), "apply_gauge_kinetic");
    return KineticOperator(A).apply(phi);
}

double gauge_kinetic_energy(const ComplexField& phi, const GaugeField& A) {
    return inner(phi, apply_gauge_kinetic(phi, A)).real();
}

}  // namespace rotogp
