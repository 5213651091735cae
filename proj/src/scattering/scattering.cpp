#include "scattering/scattering.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>

#include "core/errors.hpp"

namespace rotogp {

namespace odeint = boost::numeric::odeint;

RadialPotential RadialPotential::hard_sphere(double R0) {
    RadialPotential p;
    p.R0 = R0;
    p.hard_core_radius = R0;
    p.w = [](double) { return 0.0; };
    p.label = "hardcore";
    return p;
}

RadialPotential RadialPotential::square_barrier(double R0, double W0) {
    RadialPotential p;
    p.R0 = R0;
    p.w = [W0](double) { return W0; };
    p.label = "square";
    return p;
}

RadialPotential RadialPotential::zero(double R0) {
    RadialPotential p;
    p.R0 = R0;
    p.w = [](double) { return 0.0; };
    p.label = "zero";
    return p;
}

RadialPotential RadialPotential::tabulated(std::vector<double> r, std::vector<double> w,
                                           double hard_core_radius) {
    if (r.size() != w.size() || r.size() < 2) throw InvalidArgument("tabulated potential needs >= 2 samples");
    for (std::size_t i = 1; i < r.size(); ++i)
        if (!(r[i] > r[i - 1])) throw InvalidArgument("tabulated radii must increase");
    RadialPotential p;
    p.R0 = r.back();
    p.hard_core_radius = hard_core_radius;
    p.label = "file";
    p.w = [r = std::move(r), w = std::move(w)](double x) {
        if (x <= r.front()) return w.front();
        if (x >= r.back()) return w.back();
        auto it = std::upper_bound(r.begin(), r.end(), x);
        const std::size_t k = static_cast<std::size_t>(it - r.begin());
        const double t = (x - r[k - 1]) / (r[k] - r[k - 1]);
        return (1.0 - t) * w[k - 1] + t * w[k];
    };
    return p;
}

double RadialPotential::operator()(double r) const {
    if (r < hard_core_radius) return std::numeric_limits<double>::infinity();
    if (r > R0) return 0.0;
    return w(r);
}

void RadialPotential::validate() const {
    if (!(R0 > 0.0) || !std::isfinite(R0)) throw InvalidArgument("potential range R0 must be positive");
    if (!(hard_core_radius >= 0.0) || hard_core_radius > R0)
        throw InvalidArgument("hard-core radius must lie in [0, R0]");
    if (!w) throw InvalidArgument("potential has no profile");
    const int probes = 2000;
    for (int k = 0; k <= probes; ++k) {
        const double r = hard_core_radius + (R0 - hard_core_radius) * k / probes;
        if (r <= 0.0 && hard_core_radius == 0.0 && k == 0) continue;
        const double v = w(r);
        if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("potential must be finite and nonnegative");
    }
}

double square_barrier_length(double R0, double W0, double factor) {
    if (W0 == 0.0) return 0.0;
    const double kappa = std::sqrt(factor * W0);
    return R0 - std::tanh(kappa * R0) / kappa;
}

RadialPotential scale_interaction(const RadialPotential& pot, double N) {
    if (!(N >= 1.0) || !std::isfinite(N)) throw InvalidArgument("scaling parameter N must be >= 1");
    RadialPotential out;
    out.R0 = pot.R0 / N;
    out.hard_core_radius = pot.hard_core_radius / N;
    out.label = pot.label;
    auto w = pot.w;
    out.w = [w, N](double r) { return N * N * w(N * r); };
    for (double b : pot.breakpoints) out.breakpoints.push_back(b / N);
    return out;
}

ScatteringResult scattering_length(const RadialPotential& pot, double tol, double factor) {
    pot.validate();
    if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
    if (!(factor > 0.0)) throw InvalidArgument("equation factor must be positive");
    using State = std::array<double, 2>;  // (u, u')
    const double R0 = pot.R0;
    auto rhs = [&](const State& y, State& dy, double r) {
        const double v = pot.w(r);
        if (v < 0.0) throw InvalidArgument("potential must be nonnegative");
        dy[0] = y[1];
        dy[1] = factor * v * y[0];
    };
    auto free_rhs = [](const State& y, State& dy, double) {
        dy[0] = y[1];
        dy[1] = 0.0;
    };

    std::vector<double> knots{pot.hard_core_radius};
    for (double b : pot.breakpoints)
        if (b > pot.hard_core_radius && b < R0) knots.push_back(b);
    knots.push_back(R0);
    std::sort(knots.begin(), knots.end());

    ScatteringResult res;
    State y{0.0, 1.0};
    std::vector<double> us;
    auto stepper = odeint::make_controlled(1e-3 * tol, 1e-3 * tol, odeint::runge_kutta_dopri5<State>());
    const double min_step = 1e-15 * R0;
    auto run = [&](auto&& f, double r0, double r1, bool record) {
        double r = r0;
        double dt = std::max((r1 - r0) * 1e-4, min_step);
        if (record) res.r.push_back(r), us.push_back(y[0]);
        while (r < r1) {
            if (r + dt > r1) dt = r1 - r;
            auto outcome = stepper.try_step(f, y, r, dt);
            if (outcome == odeint::success) {
                ++res.steps;
                const double mag = std::max(std::abs(y[0]), std::abs(y[1]));
                if (mag > 1e100) {
                    y[0] /= mag, y[1] /= mag;
                    for (double& u : us) u /= mag;
                }
                if (record) res.r.push_back(r), us.push_back(y[0]);
            } else if (dt < min_step) {
                throw NumericalError("scattering integrator step size underflow");
            }
            if (res.steps > 50000000) throw NumericalError("scattering integrator exceeded step budget");
        }
    };
    for (std::size_t k = 0; k + 1 < knots.size(); ++k)
        if (knots[k + 1] > knots[k]) run(rhs, knots[k], knots[k + 1], true);
    if (res.r.empty()) res.r.push_back(R0), us.push_back(y[0]);

    // Exterior samples on [R0, 2 R0] and least-squares affine fit.
    const int m = 65;
    std::vector<double> xr(m), xu(m);
    State ext = y;
    double r = R0;
    for (int k = 0; k < m; ++k) {
        const double target = R0 * (1.0 + double(k) / (m - 1));
        if (target > r) odeint::integrate_adaptive(stepper, free_rhs, ext, r, target, (target - r));
        r = target;
        xr[k] = r;
        xu[k] = ext[0];
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = 0; k < m; ++k) sx += xr[k], sy += xu[k], sxx += xr[k] * xr[k], sxy += xr[k] * xu[k];
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double icpt = (sy - slope * sx) / m;
    if (!(std::abs(slope) > 0.0) || !std::isfinite(slope)) throw NumericalError("degenerate exterior solution");
    res.a = -icpt / slope;
    double rss = 0.0;
    for (int k = 0; k < m; ++k) rss += std::pow(xu[k] - (slope * xr[k] + icpt), 2);
    res.match_residual = std::sqrt(rss / m) / (std::abs(slope) * R0);
    for (int k = 0; k < m; ++k) res.r.push_back(xr[k]), us.push_back(xu[k]);
    res.f.resize(res.r.size());
    for (std::size_t k = 0; k < res.r.size(); ++k)
        res.f[k] = res.r[k] > 0.0 ? us[k] / (slope * res.r[k]) : 0.0;
    if (res.match_residual > std::max(tol, 1e-9)) throw NumericalError("exterior affine fit residual above tolerance");
    return res;
}

}  // namespace rotogp
