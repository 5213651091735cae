#pragma once

#include <vector>

#include "field/field.hpp"

namespace rotogp {

enum class Direction { forward, inverse };

// Unitary DFT over all grid axes, buffers of length grid.size(). `in` and
// `out` must not alias.
void fft(const Grid& grid, const cplx* in, cplx* out, Direction dir);

// Unitary 1D DFT of length n.
void fft_line(int n, const cplx* in, cplx* out, Direction dir);

ComplexField spectral_transform(const ComplexField& f, Direction dir);

// Spectral first derivative along `axis`; the Nyquist mode is dropped so that
// real fields stay real and the operator is exactly anti-Hermitian.
ComplexField derivative(const ComplexField& f, int axis);
// Spectral Laplacian (multiplier -|k|^2).
ComplexField laplacian(const ComplexField& f);

// |k|^2 for every grid point in FFT order.
std::vector<double> k_squared(const Grid& grid);
// Per-axis derivative multipliers (k with Nyquist zeroed) in FFT order.
std::vector<double> derivative_symbol(const Grid& grid, int axis);

// Applies a real Fourier multiplier m(k) given per grid point in FFT order.
ComplexField apply_multiplier(const ComplexField& f, const std::vector<double>& m);

}  // namespace rotogp
