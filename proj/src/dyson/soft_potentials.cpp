#include "dyson/soft_potentials.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "core/errors.hpp"
#include "core/quadrature.hpp"

namespace rotogp {

namespace {

constexpr int kSteps = 750;           // table intervals (even, for Simpson)
constexpr double kSpan = 30.0;        // table extent in units of s

// Distinct x-components of the unit directions on the cube shell.
std::vector<double> direction_cosines(int shell) {
    std::set<double> out;
    for (int i = -shell; i <= shell; ++i)
        for (int j = -shell; j <= shell; ++j)
            for (int k = -shell; k <= shell; ++k) {
                if (std::max({std::abs(i), std::abs(j), std::abs(k)}) != shell) continue;
                const double len = std::sqrt(double(i * i + j * j + k * k));
                out.insert(std::round(i / len * 1e15) / 1e15);
            }
    return {out.begin(), out.end()};
}

double simpson_radial(const std::vector<double>& r, const std::vector<double>& f) {
    const double dr = r[1] - r[0];
    double sum = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) {
        const double w = (k == 0 || k + 1 == r.size()) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        sum += w * r[k] * r[k] * f[k];
    }
    return 4.0 * std::numbers::pi * sum * dr / 3.0;
}

double interpolate(const std::vector<double>& r, const std::vector<double>& f, double x) {
    if (x < 0.0) x = -x;
    if (x >= r.back()) return 0.0;
    const double dr = r[1] - r[0];
    const std::size_t k = std::min(static_cast<std::size_t>(x / dr), r.size() - 2);
    const double t = (x - r[k]) / dr;
    return (1.0 - t) * f[k] + t * f[k + 1];
}

}  // namespace

double SoftPotentials::fR_at(double x) const { return interpolate(r, fR, x); }
double SoftPotentials::wR_at(double x) const { return interpolate(r, wR, x); }

double hat_potential(double R, double r) {
    return (r <= R && r >= std::cbrt(0.5) * R) ? 6.0 / (R * R * R) : 0.0;
}

SoftPotentials build_soft_potentials(const CutoffFunction& chi, double R, double epsilon,
                                     SupSampling sampling) {
    const double s = chi.s();
    if (!(R > 0.0)) throw InvalidArgument("R must be positive");
    if (R > s) throw InvalidArgument("R > s is outside the validity range R <= const s");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
    if (sampling.shell < 1 || sampling.radii < 1) throw InvalidArgument("bad sup sampling");

    SoftPotentials sp;
    sp.s = s;
    sp.R = R;
    sp.epsilon = epsilon;
    const double dr = kSpan * s / kSteps;
    const std::vector<double> cosines = direction_cosines(sampling.shell);
    sp.r.resize(kSteps + 1);
    sp.h.resize(kSteps + 1);
    sp.fR.resize(kSteps + 1);
    for (int k = 0; k <= kSteps; ++k) {
        const double x = k * dr;
        sp.r[k] = x;
        sp.h[k] = chi.h(x);
        // x = (x, 0, 0), y = rho d: |x - y|^2 = x^2 - 2 x rho d_x + rho^2.
        double best = 0.0;
        for (int m = 1; m <= sampling.radii; ++m) {
            const double rho = R * m / sampling.radii;
            for (double c : cosines) {
                const double dist = std::sqrt(std::max(0.0, x * x - 2.0 * x * rho * c + rho * rho));
                best = std::max(best, std::abs(chi.h(dist) - sp.h[k]));
            }
        }
        sp.fR[k] = best;
    }
    sp.int_fR = simpson_radial(sp.r, sp.fR);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    sp.wR.resize(sp.fR.size());
    for (std::size_t k = 0; k < sp.fR.size(); ++k) sp.wR[k] = 2.0 / pi2 * sp.fR[k] * sp.int_fR;
    sp.int_wR = 2.0 / pi2 * sp.int_fR * sp.int_fR;

    sp.UR.resize(sp.r.size());
    for (std::size_t k = 0; k < sp.r.size(); ++k) sp.UR[k] = hat_potential(R, sp.r[k]);
    const QuadratureRule q = gauss_legendre(8, std::cbrt(0.5) * R, R);
    for (std::size_t i = 0; i < q.nodes.size(); ++i)
        sp.int_UR += 4.0 * std::numbers::pi * q.weights[i] * q.nodes[i] * q.nodes[i] *
                     hat_potential(R, q.nodes[i]);
    sp.UR_sup = 6.0 / (R * R * R);
    return sp;
}

WrScaling verify_wr_scaling(const CutoffFunction& chi, std::vector<double> Rs) {
    if (Rs.size() < 2) throw InvalidArgument("R sweep needs at least two values");
    std::sort(Rs.begin(), Rs.end());
    if (Rs.front() <= 0.0) throw InvalidArgument("R values must be positive");
    if (Rs.back() / Rs.front() < 10.0) throw InvalidArgument("R sweep too narrow (needs one decade)");
    WrScaling out;
    out.s = chi.s();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double R : Rs) {
        const SoftPotentials sp = build_soft_potentials(chi, R, 0.5);
        const double ratio = sp.int_wR / ((R / out.s) * (R / out.s));
        out.R.push_back(R);
        out.int_wR.push_back(sp.int_wR);
        out.ratio.push_back(ratio);
        const double x = std::log(R), y = std::log(sp.int_wR);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(Rs.size());
    out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.ratio_min = *std::min_element(out.ratio.begin(), out.ratio.end());
    out.ratio_max = *std::max_element(out.ratio.begin(), out.ratio.end());
    return out;
}

}  // namespace rotogp
