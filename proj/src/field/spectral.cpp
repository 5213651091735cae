#include "field/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "core/errors.hpp"

namespace rotogp {

namespace {

// Plans are created once per (dim, n, sign) and executed through the
// new-array interface, which FFTW guarantees to be thread-safe.
fftw_plan plan_for(int rank, int n, int sign) {
    static std::mutex mutex;
    static std::map<std::tuple<int, int, int>, fftw_plan> plans;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_tuple(rank, n, sign);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    int dims[3] = {n, n, n};
    std::size_t total = 1;
    for (int d = 0; d < rank; ++d) total *= static_cast<std::size_t>(n);
    std::vector<cplx> a(total), b(total);
    fftw_plan p = fftw_plan_dft(rank, dims, reinterpret_cast<fftw_complex*>(a.data()),
                                reinterpret_cast<fftw_complex*>(b.data()), sign,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw NumericalError("fftw plan creation failed");
    plans.emplace(key, p);
    return p;
}

}  // namespace

void fft(const Grid& grid, const cplx* in, cplx* out, Direction dir) {
    const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    fftw_plan p = plan_for(grid.dim(), grid.n(), sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
    const double scale = 1.0 / std::sqrt(static_cast<double>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] *= scale;
}

void fft_line(int n, const cplx* in, cplx* out, Direction dir) {
    const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    fftw_plan p = plan_for(1, n, sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i) out[i] *= scale;
}

ComplexField spectral_transform(const ComplexField& f, Direction dir) {
    ComplexField out(f.grid());
    fft(f.grid(), f.data(), out.data(), dir);
    return out;
}

std::vector<double> k_squared(const Grid& grid) {
    std::vector<double> k2(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        auto k = grid.wavevector(i);
        k2[i] = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    }
    return k2;
}

std::vector<double> derivative_symbol(const Grid& grid, int axis) {
    if (axis < 0 || axis >= grid.dim()) throw InvalidArgument("derivative axis out of range");
    std::vector<double> k(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const int j = grid.unravel(i)[axis];
        k[i] = j == grid.n() / 2 ? 0.0 : grid.wavenumber(j);
    }
    return k;
}

ComplexField apply_multiplier(const ComplexField& f, const std::vector<double>& m) {
    if (m.size() != f.size()) throw GridMismatch("multiplier size does not match field");
    std::vector<cplx> hat(f.size());
    fft(f.grid(), f.data(), hat.data(), Direction::forward);
    for (std::size_t i = 0; i < hat.size(); ++i) hat[i] *= m[i];
    ComplexField out(f.grid());
    fft(f.grid(), hat.data(), out.data(), Direction::inverse);
    return out;
}

ComplexField derivative(const ComplexField& f, int axis) {
    auto k = derivative_symbol(f.grid(), axis);
    std::vector<cplx> hat(f.size());
    fft(f.grid(), f.data(), hat.data(), Direction::forward);
    for (std::size_t i = 0; i < hat.size(); ++i) hat[i] *= cplx(0.0, k[i]);
    ComplexField out(f.grid());
    fft(f.grid(), hat.data(), out.data(), Direction::inverse);
    return out;
}

ComplexField laplacian(const ComplexField& f) {
    auto k2 = k_squared(f.grid());
    for (auto& v : k2) v = -v;
    return apply_multiplier(f, k2);
}

}  // namespace rotogp
