#include "core/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "core/errors.hpp"

namespace rotogp {

namespace {

// Reference rule on [-1, 1] by Newton iteration on P_n.
QuadratureRule reference_rule(int n) {
    QuadratureRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute the derivative at the converged node.
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    return r;
}

const QuadratureRule& cached_reference(int n) {
    static std::mutex mutex;
    static std::map<int, QuadratureRule> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, reference_rule(n)).first;
    return it->second;
}

}  // namespace

QuadratureRule gauss_legendre(int n, double a, double b) {
    require(n >= 1, "gauss_legendre: n must be positive");
    if (n == 1) return {{0.5 * (a + b)}, {b - a}};
    const QuadratureRule& ref = cached_reference(n);
    QuadratureRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 0; i < n; ++i) {
        r.nodes[i] = mid + half * ref.nodes[i];
        r.weights[i] = half * ref.weights[i];
    }
    return r;
}

QuadratureRule composite_gauss_legendre(const std::vector<double>& breaks, int per_panel) {
    QuadratureRule r;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        if (breaks[k + 1] <= breaks[k]) continue;
        QuadratureRule panel = gauss_legendre(per_panel, breaks[k], breaks[k + 1]);
        r.nodes.insert(r.nodes.end(), panel.nodes.begin(), panel.nodes.end());
        r.weights.insert(r.weights.end(), panel.weights.begin(), panel.weights.end());
    }
    return r;
}

}  // namespace rotogp
