#pragma once

#include <vector>

namespace rotogp {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

// Composite Gauss-Legendre over consecutive breakpoints, `per_panel` nodes each.
QuadratureRule composite_gauss_legendre(const std::vector<double>& breaks, int per_panel);

}  // namespace rotogp
