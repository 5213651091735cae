#include "fock/error_constants.hpp"

#include <cmath>
#include <numbers>

#include "core/errors.hpp"
#include "field/spectral.hpp"

namespace rotogp {

ErrorConstants error_constants(const ErrorInputs& in) {
    if (in.J < 1) throw InvalidArgument("J must be >= 1");
    if (in.e.size() < static_cast<std::size_t>(in.J)) throw InvalidArgument("spectrum has fewer than J entries");
    if (!(in.W1 > 0 && in.Winf > 0 && in.delta > 0 && in.eta > 0 && in.M > 0 && in.E > 0 && in.C >= 0))
        throw InvalidArgument("error constants need positive inputs");
    for (int i = 0; i < in.J; ++i)
        if (!(in.e[i] > 0.0)) throw InvalidArgument("one-particle energies must be positive");
    const double pi = std::numbers::pi, pi2 = pi * pi;
    const double eJ = in.e[in.J - 1];
    double sum_e = 0, sum_sqrt = 0, sum_34 = 0;
    for (int i = 0; i < in.J; ++i) {
        sum_e += in.e[i];
        sum_sqrt += std::sqrt(in.e[i]);
        sum_34 += std::pow(in.e[i], 0.75);
    }
    const double c1 = 2.0 * std::sqrt(2.0 / 3.0) / std::cbrt(2.0 * pi2);
    const double c2 = 4.0 / (3.0 * std::pow(pi, 2.0 / 3.0));
    const double c3 = 4.0 / pi2 * std::sqrt(2.0 / 27.0);
    const double c4 = std::pow(4.0 / 3.0, 1.5) / (2.0 * pi2);
    const double c5 = 4.0 * std::pow(4.0 / 3.0, 1.25) / std::pow(2.0 * pi2, 5.0 / 6.0);
    const double W1 = in.W1, Wi = in.Winf, M = in.M, E = in.E, eta = in.eta;
    const double t_mix = std::pow(Wi, 1.0 / 6.0) * std::cbrt(W1);
    const double t_sqrt = std::pow(eta, -0.25) * std::sqrt(W1) * std::pow(eJ, -0.25) * std::sqrt(M * E);
    const double t_56 = std::pow(W1, 5.0 / 6.0) * std::pow(Wi, 1.0 / 6.0) * std::pow(eta, -0.75) * sum_34;
    ErrorConstants out;
    out.D1 = 1.0 - in.delta - std::pow(eJ, -0.25) * W1 * M * E - c1 * t_mix - c2 * t_sqrt;
    out.D2 = 2.0 * c1 * t_mix + c2 * t_sqrt + c3 / std::sqrt(eta) * W1 * std::sqrt(M * E) +
             c4 / std::sqrt(eta) * W1 * sum_sqrt + c5 * t_56;
    out.D3 = sum_e + 2.0 * in.C * in.J / M * (M * E / eJ + 0.5) + c4 * std::pow(eta, -1.5) * W1 * M * E * sum_sqrt +
             c5 * t_56 * (M * E / eJ + 0.5) + Wi / in.delta;
    return out;
}

ErrorInputs gp_scaling_inputs(double a, double N, double delta, double eta, double E, double C,
                              std::vector<double> e, int J) {
    if (!(a > 0.0 && N > 0.0)) throw InvalidArgument("need a > 0 and N > 0");
    const double R = 1.0 / std::sqrt(N);
    ErrorInputs in;
    in.W1 = 4.0 * std::numbers::pi * a / N;
    in.Winf = 6.0 * a / (R * R * R * N);
    in.delta = delta;
    in.eta = eta;
    in.J = J;
    in.M = N;
    in.E = E;
    in.C = C;
    in.e = std::move(e);
    return in;
}

double hat_potential_transform(double R, double k) {
    const double r0 = std::cbrt(0.5) * R;
    const double amp = 6.0 / (R * R * R) * 4.0 * std::numbers::pi;
    if (k * R < 0.05) {
        // int r^2 sinc(kr) dr to O(k^8); the closed form cancels badly here.
        auto m = [&](int p) { return (std::pow(R, p) - std::pow(r0, p)) / p; };
        const double k2 = k * k;
        return amp * (m(3) - k2 * (m(5) / 6.0 - k2 * (m(7) / 120.0 - k2 * (m(9) / 5040.0 - k2 * m(11) / 362880.0))));
    }
    // int r^2 sin(kr)/(kr) dr = (sin(kr) - kr cos(kr)) / k^3.
    auto F = [&](double r) { return (std::sin(k * r) - k * r * std::cos(k * r)) / (k * k * k); };
    return amp * (F(R) - F(r0));
}

SmoothingEstimate smoothing_estimate_check(const ComplexField& phi, double R) {
    const Grid& g = phi.grid();
    if (g.dim() != 3) throw InvalidArgument("smoothing estimate needs a 3D field");
    if (!(R > 0.0)) throw InvalidArgument("R must be positive");
    if (boundary_ratio(phi) > 1e-6) throw InvalidArgument("field not decayed at the box boundary");
    const std::size_t n = g.size();
    std::vector<cplx> rho(n), hat(n);
    for (std::size_t i = 0; i < n; ++i) rho[i] = std::norm(phi[i]);
    fft(g, rho.data(), hat.data(), Direction::forward);
    // int int rho rho U = h^3 sum_k |rho_hat_unitary(k)|^2 U_hat(k).
    double conv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto k = g.wavevector(i);
        conv += std::norm(hat[i]) * hat_potential_transform(R, std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]));
    }
    conv *= g.cell_volume();
    if (!std::isfinite(conv)) throw NumericalError("convolution quadrature failed");
    SmoothingEstimate out;
    out.R = R;
    out.convolution = conv;
    out.lhs = std::abs(conv - 4.0 * std::numbers::pi * quartic_integral(phi));
    out.rhs = 8.0 * std::numbers::pi * R * std::pow(norm_p(phi, 6.0), 3) * std::sqrt(gradient_norm_sq(phi));
    out.holds = out.lhs <= out.rhs;
    return out;
}

}  // namespace rotogp
