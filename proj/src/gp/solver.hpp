#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gp/problem.hpp"

namespace rotogp {

struct InitStrategy {
    enum class Kind { gaussian, random_phase, vortex };
    Kind kind = Kind::gaussian;
    int winding = 0;  // vortex only

    static InitStrategy gaussian() { return {Kind::gaussian, 0}; }
    static InitStrategy random_phase() { return {Kind::random_phase, 0}; }
    static InitStrategy vortex(int q) { return {Kind::vortex, q}; }
    // "gaussian", "random", "random-phase", "vortex", "vortex:<q>".
    static InitStrategy parse(const std::string& text);
    std::string name() const;
};

ComplexField initial_field(const Grid& grid, const InitStrategy& init, std::uint64_t seed);

struct SolverOptions {
    double tol = 1e-7;
    int max_iter = 20000;
    int restarts = 1;
    // Initial geodesic step bound (radians on the unit sphere).
    double step = 0.5;
    std::uint64_t seed = 20240601;
    // Strategies for restarts 1, 2, ...; restart 0 uses the caller's init.
    // Empty means every restart reuses the caller's init with a new seed.
    std::vector<InitStrategy> restart_inits;
};

struct GpState {
    ComplexField phi;
    double energy = 0.0;
    double mu = 0.0;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
    bool monotone = true;
    bool boundary_warning = false;
    std::string init_used;
    std::vector<double> restart_energies;
};

// Minimizes the GP functional on the unit L2 sphere starting from phi0.
GpState gp_descend(const GpFunctional& F, ComplexField phi0, const SolverOptions& opts);
// Best state over opts.restarts runs (lowest energy, first on ties).
GpState gp_minimize(const GpProblem& p, const InitStrategy& init, const SolverOptions& opts);

}  // namespace rotogp
