#include "gp/solver.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "field/spectral.hpp"

namespace rotogp {

InitStrategy InitStrategy::parse(const std::string& text) {
    if (text == "gaussian") return gaussian();
    if (text == "random" || text == "random-phase") return random_phase();
    if (text == "vortex") return vortex(1);
    if (text.rfind("vortex:", 0) == 0) {
        try {
            return vortex(std::stoi(text.substr(7)));
        } catch (const std::exception&) {
        }
    }
    throw InvalidArgument("unknown init strategy '" + text + "'");
}

std::string InitStrategy::name() const {
    switch (kind) {
        case Kind::gaussian: return "gaussian";
        case Kind::random_phase: return "random-phase";
        case Kind::vortex: return "vortex:" + std::to_string(winding);
    }
    return "?";
}

namespace {

// Complex polynomial of total degree <= 3 with seeded normal coefficients.
struct RandomPolynomial {
    std::vector<std::array<int, 3>> powers;
    std::vector<cplx> coef;

    RandomPolynomial(int dim, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        for (int i = 0; i <= 3; ++i)
            for (int j = 0; i + j <= 3; ++j)
                for (int k = 0; i + j + k <= 3; ++k) {
                    if (dim == 2 && k > 0) continue;
                    powers.push_back({i, j, k});
                    const double re = normal(rng);
                    const double im = normal(rng);
                    coef.emplace_back(re, im);
                }
    }

    cplx operator()(double x, double y, double z) const {
        cplx acc(0.0, 0.0);
        for (std::size_t m = 0; m < powers.size(); ++m)
            acc += coef[m] * std::pow(x, powers[m][0]) * std::pow(y, powers[m][1]) *
                   std::pow(z, powers[m][2]);
        return acc;
    }
};

}  // namespace

ComplexField initial_field(const Grid& grid, const InitStrategy& init, std::uint64_t seed) {
    ComplexField phi(grid);
    switch (init.kind) {
        case InitStrategy::Kind::gaussian:
            phi = ComplexField::sample(grid, [](double x, double y, double z) {
                return cplx(std::exp(-0.5 * (x * x + y * y + z * z)), 0.0);
            });
            break;
        case InitStrategy::Kind::random_phase: {
            RandomPolynomial poly(grid.dim(), seed);
            phi = ComplexField::sample(grid, [&](double x, double y, double z) {
                return poly(x, y, z) * std::exp(-0.5 * (x * x + y * y + z * z));
            });
            break;
        }
        case InitStrategy::Kind::vortex: {
            // Small seeded perturbation breaks the rotational symmetry of the
            // seed so that multiply-quantized cores can split.
            RandomPolynomial poly(grid.dim(), seed);
            const int q = init.winding;
            phi = ComplexField::sample(grid, [&](double x, double y, double z) {
                const cplx w = q >= 0 ? cplx(x, y) : cplx(x, -y);
                const double g = std::exp(-0.5 * (x * x + y * y + z * z));
                return std::pow(w, std::abs(q)) * g + 0.02 * poly(x, y, z) * g;
            });
            break;
        }
    }
    normalize(phi);
    return phi;
}

namespace {

// Complex projection onto the orthogonal complement of span{phi}.
void project_out(const ComplexField& phi, ComplexField& v) {
    const cplx c = inner(phi, v);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * phi[i];
}

// Energy change along the great circle phi cos t + u sin t, exact for the GP
// functional and written without cancellation against E(0): the linear part
// needs three numbers, the quartic part six moments.
struct GeodesicEnergy {
    double a0, a1, a2;
    double pp, pq, pr, qq, qr, rr;
    double quartic_coef;

    double operator()(double t) const {
        const double c = std::cos(t), s = std::sin(t);
        const double c2 = c * c, s2 = s * s;
        const double lin = s2 * (a2 - a0) + 2.0 * c * s * a1;
        const double quart = -s2 * (1.0 + c2) * pp + 4.0 * c2 * c * s * pq +
                             c2 * s2 * (2.0 * pr + 4.0 * qq) + 4.0 * c * s2 * s * qr + s2 * s2 * rr;
        return lin + quartic_coef * quart;
    }
};

}  // namespace

GpState gp_descend(const GpFunctional& F, ComplexField phi, const SolverOptions& opts) {
    const GpProblem& p = F.problem();
    require_same_grid(phi.grid(), p.grid, "gp_minimize");
    if (!(opts.tol > 0.0)) throw InvalidArgument("solver tolerance must be positive");
    if (opts.max_iter < 0) throw InvalidArgument("max_iter must be >= 0");
    if (!(opts.step > 0.0)) throw InvalidArgument("step must be positive");
    const Grid& grid = p.grid;
    const std::size_t n = grid.size();
    const double dv = grid.cell_volume();
    const double g4 = 4.0 * std::numbers::pi * p.a;
    const KineticOperator& K = F.kinetic();

    normalize(phi);
    ComplexField kphi = K.apply(phi);
    GpState st;
    st.monotone = true;

    auto linear = [&](const ComplexField& f, const ComplexField& kf, const ComplexField& g) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            acc += (std::conj(g[i]) * (kf[i] + p.V[i] * f[i])).real();
        return acc * dv;
    };
    double energy = F.linear_energy(phi, kphi) + g4 * quartic_integral(phi);
    double anchor = energy;
    const double shift = std::max(1.0, F.linear_energy(phi, kphi));
    std::vector<double> precond(n);
    for (std::size_t i = 0; i < n; ++i) precond[i] = 1.0 / (K.k_squared()[i] + shift);

    ComplexField r(grid), g(grid), d(grid), u(grid), ku(grid);
    ComplexField r_prev(grid), g_prev(grid), d_prev(grid);
    bool have_prev = false;
    bool fresh = true;
    double theta_hint = std::min(opts.step, 0.5 * std::numbers::pi);
    int it = 0;
    for (;; ++it) {
        if (!fresh && it % 20 == 0) {
            // Re-anchor the tracked energy on an exact evaluation and audit
            // monotonicity against the previous exact value.
            kphi = K.apply(phi);
            fresh = true;
            const double exact = F.linear_energy(phi, kphi) + g4 * quartic_integral(phi);
            if (exact > anchor + 1e-12 * std::max(1.0, std::abs(anchor))) st.monotone = false;
            anchor = exact;
            energy = exact;
        }
        for (std::size_t i = 0; i < n; ++i)
            r[i] = kphi[i] + (p.V[i] + 2.0 * g4 * std::norm(phi[i])) * phi[i];
        const double mu = inner(phi, r).real();
        for (std::size_t i = 0; i < n; ++i) r[i] -= mu * phi[i];
        double res = norm(r);
        if (!std::isfinite(res) || !std::isfinite(energy)) {
            std::ostringstream msg;
            msg << "non-finite energy/residual at iteration " << it << " (energy " << energy
                << ", residual " << res << ")";
            throw NumericalError(msg.str());
        }
        if (res <= opts.tol) {
            if (fresh) break;
            kphi = K.apply(phi);
            fresh = true;
            --it;
            continue;
        }
        if (it >= opts.max_iter) break;

        g = apply_multiplier(r, precond);
        project_out(phi, g);
        bool steepest = true;
        if (have_prev) {
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                num += (std::conj(r[i]) * (g[i] - g_prev[i])).real();
                den += (std::conj(r_prev[i]) * g_prev[i]).real();
            }
            const double beta = den > 0.0 ? std::max(0.0, num / den) : 0.0;
            project_out(phi, d_prev);
            for (std::size_t i = 0; i < n; ++i) d[i] = -g[i] + beta * d_prev[i];
            steepest = beta == 0.0;
        } else {
            for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
        }

        GeodesicEnergy curve{};
        double best_t = 0.0, best_e = energy;
        for (int attempt = 0; attempt < 2; ++attempt) {
            if (inner(r, d).real() >= 0.0) {
                for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
                steepest = true;
            }
            project_out(phi, d);
            const double dn = norm(d);
            if (!(dn > 0.0)) break;
            for (std::size_t i = 0; i < n; ++i) u[i] = d[i] / dn;
            K.apply(u.data(), ku.data());
            curve.a0 = linear(phi, kphi, phi);
            curve.a1 = linear(u, ku, phi);
            curve.a2 = linear(u, ku, u);
            double pp = 0, pq = 0, pr = 0, qq = 0, qr = 0, rr = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const double P = std::norm(phi[i]);
                const double Q = (std::conj(phi[i]) * u[i]).real();
                const double R = std::norm(u[i]);
                pp += P * P, pq += P * Q, pr += P * R, qq += Q * Q, qr += Q * R, rr += R * R;
            }
            curve.pp = pp * dv, curve.pq = pq * dv, curve.pr = pr * dv;
            curve.qq = qq * dv, curve.qr = qr * dv, curve.rr = rr * dv;
            curve.quartic_coef = g4;
            const double e0 = 0.0;

            // Coarse scan, widening while the minimum sits at the edge.
            double tmax = std::min(4.0 * theta_hint, 0.5 * std::numbers::pi);
            const int samples = 48;
            double lo = 0.0, hi = tmax, tbest = 0.0, ebest = e0;
            for (int widen = 0; widen < 8; ++widen) {
                tbest = 0.0, ebest = e0;
                int jbest = 0;
                for (int j = 1; j <= samples; ++j) {
                    const double t = tmax * j / samples;
                    const double e = curve(t);
                    if (e < ebest) ebest = e, tbest = t, jbest = j;
                }
                lo = tmax * std::max(0, jbest - 1) / samples;
                hi = tmax * std::min(samples, jbest + 1) / samples;
                if (jbest < samples || tmax >= 0.5 * std::numbers::pi) break;
                tmax = std::min(4.0 * tmax, 0.5 * std::numbers::pi);
            }
            auto refined = boost::math::tools::brent_find_minima(curve, lo, hi, 60);
            if (refined.second < ebest) tbest = refined.first, ebest = refined.second;
            if (tbest > 0.0 && ebest < e0) {
                best_t = tbest;
                best_e = energy + ebest;
                break;
            }
            if (steepest) break;
            for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
            steepest = true;
        }
        if (best_t == 0.0) break;  // no descent possible at working precision

        const double c = std::cos(best_t), s = std::sin(best_t);
        const double dn = norm(d);
        for (std::size_t i = 0; i < n; ++i) {
            const cplx ph = phi[i];
            phi[i] = c * ph + s * u[i];
            kphi[i] = c * kphi[i] + s * ku[i];
            d_prev[i] = dn * (-s * ph + c * u[i]);
        }
        const double nn = norm(phi);
        for (std::size_t i = 0; i < n; ++i) phi[i] /= nn, kphi[i] /= nn;
        fresh = false;
        energy = best_e;
        std::swap(r_prev, r);
        std::swap(g_prev, g);
        have_prev = true;
        theta_hint = std::max(best_t, 1e-8);
    }

    st.phi = phi;
    st.iterations = it;
    st.energy = F.energy(phi);
    if (st.energy > anchor + 1e-12 * std::max(1.0, std::abs(anchor))) st.monotone = false;
    st.mu = F.chemical_potential(phi);
    st.residual = F.residual(phi);
    st.converged = st.residual <= opts.tol;
    st.boundary_warning = boundary_ratio(phi) > 1e-10;
    return st;
}

GpState gp_minimize(const GpProblem& p, const InitStrategy& init, const SolverOptions& opts) {
    if (opts.restarts < 1) throw InvalidArgument("restart count must be >= 1");
    GpFunctional F(p);
    std::vector<GpState> runs(opts.restarts);
    parallel_for(runs.size(), [&](std::size_t k) {
        InitStrategy which = init;
        if (k > 0 && !opts.restart_inits.empty())
            which = opts.restart_inits[(k - 1) % opts.restart_inits.size()];
        const std::uint64_t seed = opts.seed + k;
        runs[k] = gp_descend(F, initial_field(p.grid, which, seed), opts);
        runs[k].init_used = which.name();
    });
    std::size_t best = 0;
    for (std::size_t k = 1; k < runs.size(); ++k)
        if (runs[k].energy < runs[best].energy - opts.tol) best = k;
    GpState out = runs[best];
    out.restart_energies.clear();
    for (const auto& r : runs) out.restart_energies.push_back(r.energy);
    return out;
}

}  // namespace rotogp
