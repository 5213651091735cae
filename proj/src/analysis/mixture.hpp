#pragma once

#include <vector>

#include "field/field.hpp"

namespace rotogp {

// gamma = sum_i weight_i |phi_i><phi_i| held through its atoms.
struct MixtureState {
    std::vector<double> weights;
    std::vector<ComplexField> components;
};

// Normalizes weights to sum 1; components must be normalized.
MixtureState build_mixture(const std::vector<double>& weights,
                           const std::vector<ComplexField>& components);
double mixture_trace(const MixtureState& m);
// Nonzero spectrum of gamma (descending) via the weighted Gram matrix.
std::vector<double> mixture_spectrum(const MixtureState& m);
int mixture_rank(const MixtureState& m, double tol = 1e-10);
bool is_extreme(const MixtureState& m);

}  // namespace rotogp
