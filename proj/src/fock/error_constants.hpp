#pragma once

#include <vector>

#include "field/field.hpp"

namespace rotogp {

struct ErrorInputs {
    double W1 = 0.0;       // ||W||_1
    double Winf = 0.0;     // ||W||_inf
    double delta = 0.0;
    double eta = 0.0;
    int J = 0;
    double M = 0.0;
    double E = 0.0;        // energy bound constant (user input)
    double C = 0.0;        // particle-number penalty weight
    std::vector<double> e; // one-particle spectrum, at least J entries
};

struct ErrorConstants {
    double D1 = 0.0, D2 = 0.0, D3 = 0.0;
};

// The three closed-form error constants of the coherent-state lower bound.
ErrorConstants error_constants(const ErrorInputs& in);

// ||W||_1 = 4 pi a / N, ||W||_inf = 6 a / (R^3 N), R = N^{-1/2}, M = N.
ErrorInputs gp_scaling_inputs(double a, double N, double delta, double eta, double E, double C,
                              std::vector<double> e, int J);

struct SmoothingEstimate {
    double R = 0.0;
    double lhs = 0.0;        // |int int |Phi(x)|^2 |Phi(y)|^2 U_R(x - y) - 4 pi ||Phi||_4^4|
    double convolution = 0.0;
    double rhs = 0.0;        // 8 pi R ||Phi||_6^3 ||grad Phi||_2
    bool holds = false;
};

// Fourier transform of the hat U_R at |k|.
double hat_potential_transform(double R, double k);

// Both sides of the smoothing estimate for a 3D field; the convolution is
// evaluated in Fourier space with the analytic transform of U_R.
SmoothingEstimate smoothing_estimate_check(const ComplexField& phi, double R);

}  // namespace rotogp
