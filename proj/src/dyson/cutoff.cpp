#include "dyson/cutoff.hpp"

#include <cmath>
#include <numbers>

#include "core/errors.hpp"
#include "core/quadrature.hpp"

namespace rotogp {

namespace {

double psi(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

}  // namespace

double CutoffFunction::ell(double p) {
    const double t = std::abs(p) - 1.0;
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = psi(t), b = psi(1.0 - t);
    return a / (a + b);
}

CutoffFunction::CutoffFunction(double s) : s_(s) {
    if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("cutoff scale s must be positive");
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const QuadratureRule rule = composite_gauss_legendre({0.0, 1.0 / s, 2.0 / s}, 96);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double p = rule.nodes[i];
        p_.push_back(p);
        w_.push_back(rule.weights[i] * (1.0 - chi(p)) * p * p / (2.0 * pi2));
    }
}

double CutoffFunction::h(double r) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < p_.size(); ++i) {
        const double x = p_[i] * r;
        sum += w_[i] * (std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x);
    }
    return sum;
}

double CutoffFunction::h_prime(double r) const {
    // d/dr sinc(p r) = p (x cos x - sin x) / x^2.
    double sum = 0.0;
    for (std::size_t i = 0; i < p_.size(); ++i) {
        const double x = p_[i] * r;
        const double d = std::abs(x) < 1e-4 ? -x / 3.0 + x * x * x / 30.0
                                            : (x * std::cos(x) - std::sin(x)) / (x * x);
        sum += w_[i] * p_[i] * d;
    }
    return sum;
}

}  // namespace rotogp
