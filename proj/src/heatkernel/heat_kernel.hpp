#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace rotogp {

// Radial confining potential V(|x|) >= 0.
class ConfiningPotential {
public:
    enum class Kind { zero, harmonic, log_growth, tabulated };

    static ConfiningPotential zero();
    // V = w |x|^2.
    static ConfiningPotential harmonic(double w = 1.0);
    // V = C1 ln(1 + |x|), which satisfies V >= C1 ln|x| - C2 for every C2 >= 0.
    static ConfiningPotential log_growth(double C1, double C2 = 0.0);
    // Piecewise linear in r on the given nodes, constant beyond the last one.
    static ConfiningPotential tabulated(std::vector<double> r, std::vector<double> v);

    double operator()(double r) const;
    Kind kind() const { return kind_; }
    double C1() const { return c1_; }
    double C2() const { return c2_; }
    std::string describe() const;

private:
    Kind kind_ = Kind::zero;
    double c1_ = 0.0, c2_ = 0.0;
    std::vector<double> r_, v_;
};

// h_alpha(x) = (2/alpha) int_0^{alpha/4} (1 - 4t/alpha)^{-1/2} j_t(x) dt
//            = int_0^1 j_{t(u)}(x) du,  t(u) = (alpha/4)(1 - u^2),
// with j_t the d-dimensional heat kernel. d in {1, 3}; r > 0 when d = 3.
double h_alpha(double r, double alpha, int d);

struct HAlphaTable {
    double alpha = 0.0;
    int dim = 0;
    std::vector<double> r, h;
    double integral = 0.0;  // int h_alpha over R^d by nested quadrature
};

HAlphaTable build_h_alpha(double alpha, int d, int points = 200);

// (4 pi alpha)^{-d/2} (e^{-alpha V} * h_alpha)(r) for radial V, at |x| = r.
double diag_bound(const ConfiningPotential& V, double alpha, int d, double r);

struct BruteOptions {
    double box = 10.0;  // half-width in 1D, radius in 3D
    int points = 300;
};

struct DiagComparison {
    double alpha = 0.0;
    int dim = 0;
    std::vector<double> x, bound, brute;
    double max_violation = 0.0;  // max(brute - bound)
    double slack = 0.0;
    bool dominated = false;
};

// e^{alpha(Delta - V)}(x, x) on the sine-DVR grid of the box (radial DVR with
// an l-sum for d = 3). Throws when the bound at the box edge exceeds 1e-10 of its peak.
DiagComparison compare_diag(const ConfiningPotential& V, double alpha, int d, const BruteOptions& opts = {});

struct TraceOptions {
    double R0 = 8.0;
    int max_doublings = 10;
    double tol = 1e-4;           // relative tail estimate for convergence
    double divergence = 0.01;    // growth of the last doubling
};

struct WeightedTrace {
    double value = 0.0;
    std::vector<double> radii, partial;
    double last_growth = 0.0;
    double tail_estimate = 0.0;
    bool converged = false;
    bool divergent = false;
};

// int |x|^s diag_bound(x) dx over growing balls.
WeightedTrace weighted_trace(const ConfiningPotential& V, double alpha, double s, int d, const TraceOptions& opts = {});

// Phi(x) = sqrt(B) e^{-D|x|} in 1D and its heat flow (j_t * Phi)(x).
double phi_heat(double x, double t, double B, double D);
// xi_alpha(x) = |Phi|_2^{-1} sup_{0<t<alpha} (j_t * Phi)(x).
double xi_alpha(double x, double alpha, double B, double D);

struct PerturbedReport {
    double phi_norm_sq = 0.0;
    double max_kernel = 0.0;
    double max_violation = 0.0;  // max(|kernel| - bound) over the grid pairs
    double slack = 0.0;
    bool passed = false;
    std::vector<double> x, xi;
};

// 1D: compares |e^{alpha(Delta - V - K)}(x,y)| with
// e^{alpha(Delta - V)}(x,y) + (e^{alpha |Phi|^2} - 1) xi(x) xi(y), K = |Phi><Phi|.
PerturbedReport perturbed_bound_check(const ConfiningPotential& V, double alpha, double B, double D,
                                      const BruteOptions& opts = {});

// Closed forms used as oracles.
double mehler_diag(double x, double alpha);  // V = x^2, d = 1
double free_diag(double alpha, int d);

}  // namespace rotogp
