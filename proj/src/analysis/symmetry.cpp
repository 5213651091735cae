#include "analysis/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/errors.hpp"
#include "field/spectral.hpp"

namespace rotogp {

namespace {

// In-place layer operations on an n x n slab (x index slow, y index fast).
void quarter_turn(std::vector<cplx>& a, int n) {
    std::vector<cplx> out(a.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[i * n + j] = a[j * n + (n - 1 - i)];
    a.swap(out);
}

// f(x, y) -> f(x + s(y), y) with s = alpha * y when along_x, else
// f(x, y) -> f(x, y + alpha * x).
void shear(std::vector<cplx>& a, const Grid& g, double alpha, bool along_x) {
    const int n = g.n();
    std::vector<cplx> line(n), hat(n);
    for (int m = 0; m < n; ++m) {
        const double shift = alpha * g.coord(m);
        for (int t = 0; t < n; ++t) line[t] = along_x ? a[t * n + m] : a[m * n + t];
        fft_line(n, line.data(), hat.data(), Direction::forward);
        for (int t = 0; t < n; ++t) {
            const double k = g.wavenumber(t);
            // Nyquist mode kept real so real data stays real.
            hat[t] *= t == n / 2 ? cplx(std::cos(k * shift), 0.0) : std::exp(cplx(0.0, k * shift));
        }
        fft_line(n, hat.data(), line.data(), Direction::inverse);
        for (int t = 0; t < n; ++t) (along_x ? a[t * n + m] : a[m * n + t]) = line[t];
    }
}

}  // namespace

ComplexField rotate_about_z(const ComplexField& phi, double angle) {
    const Grid& g = phi.grid();
    const int n = g.n();
    const double half_pi = 0.5 * std::numbers::pi;
    long turns = std::lround(angle / half_pi);
    const double rest = angle - turns * half_pi;
    turns = ((turns % 4) + 4) % 4;
    const int layers = g.dim() == 3 ? n : 1;
    ComplexField out(g);
    std::vector<cplx> slab(static_cast<std::size_t>(n) * n);
    for (int z = 0; z < layers; ++z) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) slab[i * n + j] = phi[g.ravel({i, j, z})];
        for (long t = 0; t < turns; ++t) quarter_turn(slab, n);
        if (rest != 0.0) {
            // R(-rest) = Sx(tan(rest/2)) Sy(-sin(rest)) Sx(tan(rest/2))
            shear(slab, g, std::tan(0.5 * rest), true);
            shear(slab, g, -std::sin(rest), false);
            shear(slab, g, std::tan(0.5 * rest), true);
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out[g.ravel({i, j, z})] = slab[i * n + j];
    }
    return out;
}

OrbitReport symmetry_orbit_check(const ComplexField& phi, const GpProblem& p,
                                 const std::vector<double>& angles) {
    if (p.omega[0] != 0.0 || p.omega[1] != 0.0)
        throw InvalidArgument("symmetry orbit check needs Omega parallel to z");
    if (!p.axisymmetric()) throw InvalidArgument("trap potential is not axially symmetric about z");
    GpFunctional F(p);
    OrbitReport rep;
    rep.base_energy = F.energy(phi);
    for (double ang : angles) {
        ComplexField rot = rotate_about_z(phi, ang);
        const double e = F.energy(rot);
        const double overlap = std::abs(inner(phi, rot));
        const double dist = std::sqrt(std::max(0.0, 2.0 - 2.0 * overlap));
        rep.angles.push_back(ang);
        rep.energies.push_back(e);
        rep.distances.push_back(dist);
        rep.max_spread = std::max(rep.max_spread, std::abs(e - rep.base_energy));
        rep.max_distance = std::max(rep.max_distance, dist);
    }
    return rep;
}

}  // namespace rotogp
