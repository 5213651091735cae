#include "analysis/vortex.hpp"

#include <cmath>
#include <memory>
#include <numbers>

#include "core/errors.hpp"
#include "field/spectral.hpp"

namespace rotogp {

namespace {

double wrapped(double d) {
    // fold into (-pi, pi]
    d = std::remainder(d, 2.0 * std::numbers::pi);
    if (d <= -std::numbers::pi) d += 2.0 * std::numbers::pi;
    return d;
}

// Band-limited (trigonometric) interpolant of one xy-slice.
class SliceInterpolant {
public:
    SliceInterpolant(const ComplexField& phi, int z_layer) : g_(phi.grid()), n_(g_.n()) {
        std::vector<cplx> slab(static_cast<std::size_t>(n_) * n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) slab[i * n_ + j] = phi[g_.ravel({i, j, z_layer})];
        hat_.resize(slab.size());
        Grid plane(2, n_, g_.extent());
        fft(plane, slab.data(), hat_.data(), Direction::forward);
    }

    cplx operator()(double x, double y) const {
        // Offsets relative to the first sample so the phase convention
        // matches the DFT index origin.
        const double x0 = g_.coord(0);
        std::vector<cplx> ex(n_), ey(n_);
        for (int k = 0; k < n_; ++k) {
            const double kk = g_.wavenumber(k);
            const double damp = k == n_ / 2 ? 0.0 : 1.0;
            ex[k] = damp * std::exp(cplx(0.0, kk * (x - x0)));
            ey[k] = damp * std::exp(cplx(0.0, kk * (y - x0)));
        }
        cplx acc(0.0, 0.0);
        for (int i = 0; i < n_; ++i) {
            cplx row(0.0, 0.0);
            for (int j = 0; j < n_; ++j) row += hat_[i * n_ + j] * ey[j];
            acc += row * ex[i];
        }
        return acc / static_cast<double>(n_);
    }

private:
    const Grid& g_;
    int n_;
    std::vector<cplx> hat_;
};

}  // namespace

VortexReport detect_vortices(const ComplexField& phi, double floor_fraction, int z_layer) {
    const Grid& g = phi.grid();
    const int n = g.n();
    VortexReport rep;
    rep.z_layer = g.dim() == 3 ? (z_layer < 0 ? n / 2 : z_layer) : 0;
    if (rep.z_layer >= n && g.dim() == 3) throw InvalidArgument("z layer out of range");
    const double floor = floor_fraction * max_abs(phi);
    if (floor <= 0.0) return rep;
    auto at = [&](int i, int j) -> cplx {
        return phi[g.ravel({i, j, rep.z_layer})];
    };
    const double h = g.spacing();
    std::unique_ptr<SliceInterpolant> interp;
    for (int i = 0; i + 1 < n; ++i) {
        for (int j = 0; j + 1 < n; ++j) {
            const cplx c[4] = {at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)};
            bool ok = true;
            for (const auto& v : c) ok = ok && std::abs(v) >= floor;
            if (!ok) continue;
            double circ = 0.0;
            bool ambiguous = false;
            for (int k = 0; k < 4; ++k) {
                const double d = wrapped(std::arg(c[(k + 1) % 4]) - std::arg(c[k]));
                ambiguous = ambiguous || std::abs(d) > 0.75 * std::numbers::pi;
                circ += d;
            }
            if (ambiguous) {
                // Phase steps near pi cannot be folded reliably (e.g. a
                // charge-2 core at a plaquette centre); walk the plaquette
                // boundary on the band-limited interpolant instead.
                if (!interp) interp = std::make_unique<SliceInterpolant>(phi, rep.z_layer);
                const int sub = 16;
                const double xs[4] = {g.coord(i), g.coord(i + 1), g.coord(i + 1), g.coord(i)};
                const double ys[4] = {g.coord(j), g.coord(j), g.coord(j + 1), g.coord(j + 1)};
                circ = 0.0;
                double prev = std::arg(c[0]);
                for (int k = 0; k < 4; ++k) {
                    for (int m = 1; m <= sub; ++m) {
                        const double t = double(m) / sub;
                        const double x = xs[k] + t * (xs[(k + 1) % 4] - xs[k]);
                        const double y = ys[k] + t * (ys[(k + 1) % 4] - ys[k]);
                        const double ph = m == sub ? std::arg(c[(k + 1) % 4]) : std::arg((*interp)(x, y));
                        circ += wrapped(ph - prev);
                        prev = ph;
                    }
                }
            }
            const int w = static_cast<int>(std::lround(circ / (2.0 * std::numbers::pi)));
            if (w != 0) {
                rep.vortices.push_back({g.coord(i) + 0.5 * h, g.coord(j) + 0.5 * h, w});
                rep.total_winding += w;
            }
        }
    }
    return rep;
}

double angular_momentum_z(const ComplexField& phi) {
    const Grid& g = phi.grid();
    ComplexField dx = derivative(phi, 0), dy = derivative(phi, 1);
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < phi.size(); ++i) {
        auto x = g.position(i);
        acc += std::conj(phi[i]) * cplx(0.0, -1.0) * (x[0] * dy[i] - x[1] * dx[i]);
    }
    return acc.real() * g.cell_volume();
}

}  // namespace rotogp
