#include "heatkernel/heat_kernel.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/quadrature.hpp"

namespace rotogp {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double z_cut = 8.5;  // e^{-z^2} < 1e-31 beyond

void check_dim(int d) { require(d == 1 || d == 3, "dimension must be 1 or 3"); }

void check_alpha(double alpha) { require(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive"); }

// Log space so that tiny r and t do not meet as inf * 0.
double heat_kernel(double r, double t, int d) { return std::exp(-r * r / (4.0 * t) - 0.5 * d * std::log(4.0 * pi * t)); }

// t(u) = (alpha/4)(1 - u^2), taking 1 - u from the tanh-sinh complement near u = 1.
double time_of(double alpha, double u, double uc) {
    const double one_minus = uc > 0.0 ? uc : 1.0 - u;
    return 0.25 * alpha * one_minus * (1.0 + u);
}

boost::math::quadrature::tanh_sinh<double>& tanh_sinh_rule() {
    thread_local boost::math::quadrature::tanh_sinh<double> rule;
    return rule;
}

// (j_t * g)(x) = pi^{-1/2} int e^{-z^2} g(x + w z) dz, w = 2 sqrt(t), over z_lo <= z <= z_max.
// The offset variable keeps x - y exact. With g <= e^{gain} g(x) across the range, cutting
// at z_max^2 = z_cut^2 + gain drops at most e^{-z_cut^2} of the total, even when the peak
// of e^{-alpha V} at the origin dominates far outside the Gaussian window. Panels break
// where y = 0 and |y| = 10^k to resolve the features there.
template <class G>
double gauss_window(const G& g, double x, double t, double gain, double z_lo = -INFINITY) {
    const double w = 2.0 * std::sqrt(t);
    const double z_max = std::sqrt(z_cut * z_cut + std::max(gain, 0.0));
    if (w * z_max < 1e-14 * (1.0 + std::abs(x))) return g(x);
    auto f = [&](double z) { return std::exp(-z * z) * g(x + w * z); };
    z_lo = std::max(z_lo, -z_max);
    std::vector<double> cuts{z_lo, z_max, 0.0, -x / w};
    for (int k = -4; k <= 4; ++k) {
        cuts.push_back((std::pow(10.0, k) - x) / w);
        cuts.push_back((-std::pow(10.0, k) - x) / w);
    }
    std::sort(cuts.begin(), cuts.end());
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    std::vector<std::pair<double, double>> panels;
    double l1 = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = std::max(cuts[i], z_lo), b = std::min(cuts[i + 1], z_max);
        if (b <= a) continue;
        panels.emplace_back(a, b);
        double l1_panel = 0.0;
        GK::integrate(f, a, b, 0, 0.0, nullptr, &l1_panel);
        l1 += l1_panel;
    }
    // Tolerance absolute in the total, so panels deep in a Gaussian tail stop at once.
    // |K - G| overstates the Kronrod error; (200 |K - G| / L1)^{3/2} <= 1e-12 as in QUADPACK.
    const double abs_tol = std::max(5e-11 * l1, 1e-300);
    std::function<double(double, double, int)> adapt = [&](double a, double b, int depth) {
        double err = 0.0;
        const double v = GK::integrate(f, a, b, 0, 0.0, &err);
        if (err <= abs_tol || depth == 0) return v;
        const double m = 0.5 * (a + b);
        return adapt(a, m, depth - 1) + adapt(m, b, depth - 1);
    };
    double sum = 0.0;
    for (const auto& [a, b] : panels) sum += adapt(a, b, 20);
    return sum / std::sqrt(pi);
}

// Sine-DVR kinetic matrix for -d^2/dx^2 on an interval of the given length
// with Dirichlet ends; grid spacing length / (m + 1).
Eigen::MatrixXd sine_dvr_kinetic(int m, double length) {
    Eigen::MatrixXd S(m, m);
    const double c = std::sqrt(2.0 / (m + 1));
    for (int j = 0; j < m; ++j)
        for (int n = 0; n < m; ++n) S(j, n) = c * std::sin(double(j + 1) * (n + 1) * pi / (m + 1));
    Eigen::VectorXd k2(m);
    for (int n = 0; n < m; ++n) k2(n) = std::pow((n + 1) * pi / length, 2);
    return S * k2.asDiagonal() * S;
}

// Spectral kernel sum_n e^{-alpha lambda_n} v_n v_n^T / dx.
Eigen::MatrixXd spectral_kernel(const Eigen::MatrixXd& H, double alpha, double dx) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
    const Eigen::VectorXd w = (-alpha * es.eigenvalues().array()).exp();
    return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().transpose() / dx;
}

// The free kernel never decays; Dirichlet walls only lower the brute-force
// kernel, so dominance is unaffected and the check is skipped for V = 0.
void check_box(const ConfiningPotential& V, double alpha, int d, double box) {
    if (V.kind() == ConfiningPotential::Kind::zero) return;
    const double peak = diag_bound(V, alpha, d, d == 1 ? 0.0 : 1e-3 * box);
    const double edge = diag_bound(V, alpha, d, box);
    if (!(edge <= 1e-10 * peak)) {
        std::ostringstream os;
        os << "box too small: kernel bound at the boundary is " << edge / peak << " of its peak";
        throw InvalidArgument(os.str());
    }
}

}  // namespace

ConfiningPotential ConfiningPotential::zero() { return {}; }

ConfiningPotential ConfiningPotential::harmonic(double w) {
    require(w > 0.0, "harmonic strength must be positive");
    ConfiningPotential p;
    p.kind_ = Kind::harmonic;
    p.c1_ = w;
    return p;
}

ConfiningPotential ConfiningPotential::log_growth(double C1, double C2) {
    require(C1 > 0.0, "C1 must be positive");
    require(C2 >= 0.0, "C2 must be nonnegative for V = C1 ln(1 + |x|)");
    ConfiningPotential p;
    p.kind_ = Kind::log_growth;
    p.c1_ = C1;
    p.c2_ = C2;
    return p;
}

ConfiningPotential ConfiningPotential::tabulated(std::vector<double> r, std::vector<double> v) {
    require(r.size() >= 2 && r.size() == v.size(), "tabulated potential needs matching r and V of length >= 2");
    require(r.front() == 0.0, "tabulated potential must start at r = 0");
    for (std::size_t i = 0; i < r.size(); ++i) {
        require(v[i] >= 0.0 && std::isfinite(v[i]), "tabulated potential must be finite and nonnegative");
        if (i > 0) require(r[i] > r[i - 1], "tabulated radii must increase");
    }
    ConfiningPotential p;
    p.kind_ = Kind::tabulated;
    p.r_ = std::move(r);
    p.v_ = std::move(v);
    return p;
}

double ConfiningPotential::operator()(double r) const {
    r = std::abs(r);
    switch (kind_) {
        case Kind::zero: return 0.0;
        case Kind::harmonic: return c1_ * r * r;
        case Kind::log_growth: return c1_ * std::log1p(r);
        case Kind::tabulated: {
            if (r >= r_.back()) return v_.back();
            const auto it = std::upper_bound(r_.begin(), r_.end(), r);
            const std::size_t i = it - r_.begin();
            const double f = (r - r_[i - 1]) / (r_[i] - r_[i - 1]);
            return (1.0 - f) * v_[i - 1] + f * v_[i];
        }
    }
    return 0.0;
}

std::string ConfiningPotential::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::zero: os << "zero"; break;
        case Kind::harmonic: os << "harmonic " << c1_; break;
        case Kind::log_growth: os << "log " << c1_ << " " << c2_; break;
        case Kind::tabulated: os << "tabulated (" << r_.size() << " nodes)"; break;
    }
    return os.str();
}

double h_alpha(double r, double alpha, int d) {
    check_alpha(alpha);
    check_dim(d);
    r = std::abs(r);
    require(d == 1 || r > 0.0, "h_alpha diverges at the origin in 3D");
    auto f = [&](double u, double uc) {
        const double t = time_of(alpha, u, uc);
        return t > 0.0 ? heat_kernel(r, t, d) : 0.0;
    };
    return tanh_sinh_rule().integrate(f, 0.0, 1.0, 1e-12);
}

HAlphaTable build_h_alpha(double alpha, int d, int points) {
    check_alpha(alpha);
    check_dim(d);
    require(points >= 2, "table needs at least 2 points");
    HAlphaTable tab;
    tab.alpha = alpha;
    tab.dim = d;
    const double r_max = std::sqrt(60.0 * alpha);
    for (int i = 0; i < points; ++i) {
        const double r = r_max * (i + 1) / points;
        tab.r.push_back(r);
        tab.h.push_back(h_alpha(r, alpha, d));
        if (!(tab.h.back() >= 0.0)) throw NumericalError("h_alpha quadrature failed");
    }
    auto radial = [&](double r) {
        // 4 pi r^2 h_alpha ~ r near the origin in 3D.
        if (d == 3 && r < 1e-100) return 0.0;
        if (r <= 0.0) return 2.0 * h_alpha(0.0, alpha, 1);
        return d == 1 ? 2.0 * h_alpha(r, alpha, 1) : 4.0 * pi * r * r * h_alpha(r, alpha, 3);
    };
    boost::math::quadrature::tanh_sinh<double> outer;
    tab.integral = outer.integrate(radial, 0.0, r_max, 1e-11);
    return tab;
}

double diag_bound(const ConfiningPotential& V, double alpha, int d, double r) {
    check_alpha(alpha);
    check_dim(d);
    r = std::abs(r);
    // Swapping the u and y integrations: (e^{-aV} * h_alpha)(x) = int_0^1 (e^{-aV} * j_t(u))(x) du.
    std::function<double(double, double)> smoothed;
    if (d == 1) {
        smoothed = [&V, alpha](double x, double t) {
            auto g = [&](double y) { return std::exp(-alpha * V(y)); };
            if (t < 1e-300) return g(x);
            return gauss_window(g, x, t, alpha * V(x));
        };
    } else {
        // Radial 3D convolution over rho >= 0 with the positive kernel
        // rho e^{-aV(rho)} j_t^{1D}(r - rho) (1 - e^{-r rho / t}) / r, free of cancellation at small r.
        require(r > 0.0, "3D bound needs r > 0");
        smoothed = [&V, alpha](double x, double t) {
            auto g = [&](double rho) { return rho <= 0.0 ? 0.0 : rho * std::exp(-alpha * V(rho)) * -std::expm1(-x * rho / t) / x; };
            if (t < 1e-300) return g(x);
            // g <= 1 below x and g <= (rho / x) e^{-aV} above; g(x) = e^{-aV(x)} (1 - e^{-x^2/t}).
            const double w = 2.0 * std::sqrt(t);
            const double gain = alpha * V(x) - std::log(-std::expm1(-x * x / t)) + 2.0 * std::log1p(w * z_cut / x);
            return gauss_window(g, x, t, gain, -x / w);
        };
    }
    auto integrand = [&](double u, double uc) { return smoothed(r, time_of(alpha, u, uc)); };
    const double v = tanh_sinh_rule().integrate(integrand, 0.0, 1.0, 1e-11);
    if (!std::isfinite(v)) throw NumericalError("diagonal bound quadrature failed");
    return std::max(v, 0.0) * free_diag(alpha, d);
}

DiagComparison compare_diag(const ConfiningPotential& V, double alpha, int d, const BruteOptions& opts) {
    check_alpha(alpha);
    check_dim(d);
    require(opts.box > 0.0 && opts.points >= 16, "brute force needs a positive box and >= 16 points");
    check_box(V, alpha, d, opts.box);
    const int m = opts.points;
    DiagComparison out;
    out.alpha = alpha;
    out.dim = d;
    out.x.resize(m);
    out.brute.assign(m, 0.0);
    if (d == 1) {
        const double dx = 2.0 * opts.box / (m + 1);
        for (int j = 0; j < m; ++j) out.x[j] = -opts.box + (j + 1) * dx;
        Eigen::MatrixXd H = sine_dvr_kinetic(m, 2.0 * opts.box);
        for (int j = 0; j < m; ++j) H(j, j) += V(out.x[j]);
        const Eigen::MatrixXd P = spectral_kernel(H, alpha, dx);
        for (int j = 0; j < m; ++j) out.brute[j] = P(j, j);
    } else {
        const double dr = opts.box / (m + 1);
        for (int j = 0; j < m; ++j) out.x[j] = (j + 1) * dr;
        const Eigen::MatrixXd T = sine_dvr_kinetic(m, opts.box);
        // Full diagonal = sum_l (2l + 1) / (4 pi r^2) sum_n e^{-alpha lambda_nl} |u_nl(r)|^2.
        double total_max = 0.0;
        for (int l = 0; l <= 2000; ++l) {
            Eigen::MatrixXd H = T;
            for (int j = 0; j < m; ++j) H(j, j) += V(out.x[j]) + l * (l + 1.0) / (out.x[j] * out.x[j]);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
            if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
            const Eigen::VectorXd w = (-alpha * es.eigenvalues().array()).exp();
            double term_max = 0.0;
            for (int j = 0; j < m; ++j) {
                const double term = (2.0 * l + 1.0) / (4.0 * pi * out.x[j] * out.x[j]) *
                                    es.eigenvectors().row(j).array().square().matrix().dot(w) / dr;
                out.brute[j] += term;
                term_max = std::max(term_max, term);
            }
            total_max = std::max(total_max, *std::max_element(out.brute.begin(), out.brute.end()));
            if (term_max < 1e-15 * total_max) break;
            if (l == 2000) throw NotConverged("angular momentum sum did not converge");
        }
    }
    out.bound.assign(m, 0.0);
    parallel_for(m, [&](std::size_t j) { out.bound[j] = diag_bound(V, alpha, d, out.x[j]); });
    const double peak = *std::max_element(out.brute.begin(), out.brute.end());
    out.slack = 1e-8 * peak;
    out.max_violation = -INFINITY;
    for (int j = 0; j < m; ++j) out.max_violation = std::max(out.max_violation, out.brute[j] - out.bound[j]);
    out.dominated = out.max_violation <= out.slack;
    return out;
}

WeightedTrace weighted_trace(const ConfiningPotential& V, double alpha, double s, int d, const TraceOptions& opts) {
    check_alpha(alpha);
    check_dim(d);
    require(s >= 0.0, "weight exponent s must be nonnegative");
    require(opts.R0 > 0.0 && opts.max_doublings >= 2, "trace needs R0 > 0 and >= 2 doublings");
    auto density = [&](double r) {
        const double b = diag_bound(V, alpha, d, r);
        return d == 1 ? 2.0 * std::pow(r, s) * b : 4.0 * pi * std::pow(r, 2.0 + s) * b;
    };
    auto panel = [&](double a, double b, int n) {
        const QuadratureRule q = gauss_legendre(n, a, b);
        std::vector<double> vals(q.nodes.size());
        parallel_for(vals.size(), [&](std::size_t i) { vals[i] = density(q.nodes[i]); });
        double sum = 0.0;
        for (std::size_t i = 0; i < vals.size(); ++i) sum += q.weights[i] * vals[i];
        return sum;
    };
    WeightedTrace out;
    double R = opts.R0;
    double total = panel(0.0, R, 64);
    out.radii.push_back(R);
    out.partial.push_back(total);
    double prev_inc = NAN;
    for (int k = 0; k < opts.max_doublings; ++k) {
        const double inc = panel(R, 2.0 * R, 48);
        R *= 2.0;
        out.last_growth = total > 0.0 ? inc / total : INFINITY;
        total += inc;
        out.radii.push_back(R);
        out.partial.push_back(total);
        // Geometric tail from the ratio of successive shell contributions.
        const double g = std::isnan(prev_inc) ? NAN : (prev_inc > 0.0 ? inc / prev_inc : 0.0);
        out.tail_estimate = (g >= 0.0 && g < 1.0) ? inc * g / (1.0 - g) : INFINITY;
        prev_inc = inc;
        if (!std::isfinite(total)) throw NumericalError("weighted trace overflow");
        if (out.tail_estimate <= opts.tol * total) {
            out.converged = true;
            break;
        }
    }
    out.value = total;
    out.divergent = !out.converged && out.last_growth > opts.divergence;
    return out;
}

double phi_heat(double x, double t, double B, double D) {
    require(B >= 0.0 && D > 0.0 && t >= 0.0, "need B >= 0, D > 0, t >= 0");
    x = std::abs(x);
    if (t == 0.0) return std::sqrt(B) * std::exp(-D * x);
    // e^{-D|y|} * j_t = (1/2) e^{D^2 t} [e^{-Dx} erfc((2Dt - x)/2 sqrt t) + e^{Dx} erfc((2Dt + x)/2 sqrt t)].
    const double st = 2.0 * std::sqrt(t);
    auto term = [&](double sgn) {
        const double e = std::erfc((2.0 * D * t - sgn * x) / st);
        return e == 0.0 ? 0.0 : std::exp(D * D * t - sgn * D * x + std::log(e));
    };
    return 0.5 * std::sqrt(B) * (term(1.0) + term(-1.0));
}

double xi_alpha(double x, double alpha, double B, double D) {
    check_alpha(alpha);
    require(B > 0.0 && D > 0.0, "need B > 0 and D > 0");
    const int n = 200;
    std::vector<double> lt(n), val(n);
    double best = phi_heat(x, 0.0, B, D);
    int arg = -1;
    for (int k = 0; k < n; ++k) {
        lt[k] = std::log(alpha) - 18.0 * (n - 1 - k) / (n - 1);
        val[k] = phi_heat(x, std::exp(lt[k]), B, D);
        if (val[k] > best) {
            best = val[k];
            arg = k;
        }
    }
    if (arg > 0 && arg < n - 1) {
        auto neg = [&](double l) { return -phi_heat(x, std::exp(l), B, D); };
        const auto r = boost::math::tools::brent_find_minima(neg, lt[arg - 1], lt[arg + 1], 52);
        best = std::max(best, -r.second);
    }
    return best / std::sqrt(B / D);
}

PerturbedReport perturbed_bound_check(const ConfiningPotential& V, double alpha, double B, double D,
                                      const BruteOptions& opts) {
    check_alpha(alpha);
    require(B >= 0.0 && D > 0.0, "need B >= 0 and D > 0");
    require(opts.box > 0.0 && opts.points >= 16, "brute force needs a positive box and >= 16 points");
    check_box(V, alpha, 1, opts.box);
    const int m = opts.points;
    const double dx = 2.0 * opts.box / (m + 1);
    PerturbedReport out;
    out.x.resize(m);
    for (int j = 0; j < m; ++j) out.x[j] = -opts.box + (j + 1) * dx;
    out.phi_norm_sq = B / D;
    Eigen::MatrixXd H0 = sine_dvr_kinetic(m, 2.0 * opts.box);
    for (int j = 0; j < m; ++j) H0(j, j) += V(out.x[j]);
    Eigen::VectorXd phi(m);
    for (int j = 0; j < m; ++j) phi(j) = std::sqrt(B) * std::exp(-D * std::abs(out.x[j]));
    const Eigen::MatrixXd L = spectral_kernel(H0, alpha, dx);
    const Eigen::MatrixXd P = spectral_kernel(H0 + dx * phi * phi.transpose(), alpha, dx);
    out.xi.assign(m, 0.0);
    if (B > 0.0) parallel_for(m, [&](std::size_t j) { out.xi[j] = xi_alpha(out.x[j], alpha, B, D); });
    const double amp = std::expm1(alpha * out.phi_norm_sq);
    out.max_kernel = P.cwiseAbs().maxCoeff();
    out.slack = 1e-8 * out.max_kernel;
    out.max_violation = -INFINITY;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            out.max_violation = std::max(out.max_violation, std::abs(P(i, j)) - (L(i, j) + amp * out.xi[i] * out.xi[j]));
    out.passed = out.max_violation <= out.slack;
    return out;
}

double mehler_diag(double x, double alpha) {
    return std::exp(-x * x * std::tanh(alpha)) / std::sqrt(2.0 * pi * std::sinh(2.0 * alpha));
}

double free_diag(double alpha, int d) { return std::pow(4.0 * pi * alpha, -0.5 * d); }

}  // namespace rotogp
