#pragma once

#include <vector>

namespace rotogp {

// chi(p) = ell(s|p|) with the smooth monotone step
// ell(p) = S(p - 1), S(t) = psi(t) / (psi(t) + psi(1 - t)), psi(t) = exp(-1/t) for t > 0.
// ell = 0 for p <= 1, ell = 1 for p >= 2.
class CutoffFunction {
public:
    explicit CutoffFunction(double s);

    double s() const { return s_; }
    static double ell(double p);
    double chi(double p) const { return ell(s_ * p); }

    // h(r) = (2 pi)^-3 integral (1 - chi(p)) e^{ip.x} dp
    //      = (1 / 2 pi^2) integral_0^{2/s} (1 - chi(p)) p^2 sinc(p r) dp.
    double h(double r) const;
    // dh/dr.
    double h_prime(double r) const;

private:
    double s_;
    std::vector<double> p_;  // quadrature nodes on [0, 2/s]
    std::vector<double> w_;  // weights times (1 - chi) p^2 / (2 pi^2)
};

}  // namespace rotogp
