#include "analysis/scans.hpp"

#include <algorithm>
#include <cmath>

#include "analysis/vortex.hpp"
#include "core/errors.hpp"
#include "core/parallel.hpp"

namespace rotogp {

GpState best_minimizer(const GpProblem& p, const std::vector<InitStrategy>& inits,
                       const SolverOptions& opts) {
    if (inits.empty()) throw InvalidArgument("at least one init strategy is required");
    SolverOptions o = opts;
    o.restarts = static_cast<int>(inits.size());
    o.restart_inits.assign(inits.begin() + 1, inits.end());
    return gp_minimize(p, inits.front(), o);
}

ScanRow summarize(double param, const GpState& st) {
    ScanRow row;
    row.param = param;
    row.energy = st.energy;
    row.mu = st.mu;
    row.residual = st.residual;
    row.Lz = angular_momentum_z(st.phi);
    row.total_winding = detect_vortices(st.phi).total_winding;
    row.converged = st.converged;
    row.init = st.init_used;
    return row;
}

std::vector<ScanRow> scan_omega(const GpProblem& base, const std::vector<double>& omega_z,
                                const std::vector<InitStrategy>& inits, const SolverOptions& opts) {
    std::vector<ScanRow> rows(omega_z.size());
    parallel_for(omega_z.size(), [&](std::size_t k) {
        GpProblem p = base;
        p.omega = {0.0, 0.0, omega_z[k]};
        rows[k] = summarize(omega_z[k], best_minimizer(p, inits, opts));
    });
    return rows;
}

Threshold locate_lz_threshold(const GpProblem& base, double omega_lo, double omega_hi,
                              double lz_level, const std::vector<InitStrategy>& inits,
                              const SolverOptions& opts, double width) {
    if (!(width > 0.0)) throw InvalidArgument("bisection width must be positive");
    const double sign = std::abs(omega_hi) >= std::abs(omega_lo) ? (omega_hi < 0 ? -1.0 : 1.0)
                                                                 : (omega_lo < 0 ? -1.0 : 1.0);
    Threshold th;
    auto eval = [&](double w) {
        GpProblem p = base;
        p.omega = {0.0, 0.0, w};
        ++th.evaluations;
        return summarize(w, best_minimizer(p, inits, opts));
    };
    // Lz carries the sign opposite to Omega_z in this gauge.
    auto has = [&](const ScanRow& r) { return -sign * r.Lz >= lz_level; };
    th.row_below = eval(omega_lo);
    th.row_above = eval(omega_hi);
    if (has(th.row_below) || !has(th.row_above))
        throw InvalidArgument("threshold bracket does not straddle the transition");
    double lo = omega_lo, hi = omega_hi;
    while (std::abs(hi - lo) > width) {
        const double mid = 0.5 * (lo + hi);
        ScanRow r = eval(mid);
        if (has(r)) {
            hi = mid;
            th.row_above = r;
        } else {
            lo = mid;
            th.row_below = r;
        }
    }
    th.below = lo;
    th.above = hi;
    return th;
}

ConcavityReport concavity_scan(const GpProblem& base, const std::vector<double>& a_values,
                               const std::vector<InitStrategy>& inits, const SolverOptions& opts) {
    if (a_values.size() < 3) throw InvalidArgument("concavity scan needs at least 3 samples");
    std::vector<double> a = a_values;
    std::sort(a.begin(), a.end());
    if (a.front() < 0.0) throw InvalidArgument("coupling samples must be >= 0");
    ConcavityReport rep;
    rep.tolerance = 2.0 * opts.tol;
    rep.rows.resize(a.size());
    parallel_for(a.size(), [&](std::size_t k) {
        GpProblem p = base;
        p.a = a[k];
        rep.rows[k] = summarize(a[k], best_minimizer(p, inits, opts));
    });
    const auto& r = rep.rows;
    for (const auto& row : r) rep.all_converged = rep.all_converged && row.converged;
    for (std::size_t k = 0; k + 1 < r.size(); ++k)
        rep.worst_monotone = std::max(rep.worst_monotone, r[k].energy - r[k + 1].energy);
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = i + 1; j < r.size(); ++j)
            for (std::size_t k = j + 1; k < r.size(); ++k) {
                const double t = (a[j] - a[i]) / (a[k] - a[i]);
                const double chord = (1.0 - t) * r[i].energy + t * r[k].energy;
                rep.worst_concavity = std::max(rep.worst_concavity, chord - r[j].energy);
            }
    // E(l a) >= (1 - l) E(0) + l E(a) whenever both l a and a are samples,
    // and the weaker E(l a) >= l E(a).
    for (std::size_t j = 0; j < r.size(); ++j)
        for (std::size_t k = j + 1; k < r.size(); ++k) {
            if (a[k] <= 0.0) continue;
            const double l = a[j] / a[k];
            double viol = l * r[k].energy - r[j].energy;
            if (a.front() == 0.0) viol = std::max(viol, (1.0 - l) * r[0].energy + l * r[k].energy - r[j].energy);
            rep.worst_scaling = std::max(rep.worst_scaling, viol);
        }
    rep.monotone = rep.worst_monotone <= rep.tolerance;
    rep.concave = rep.worst_concavity <= rep.tolerance;
    rep.scaling = rep.worst_scaling <= rep.tolerance;
    return rep;
}

}  // namespace rotogp
