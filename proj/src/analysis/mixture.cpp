#include "analysis/mixture.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace rotogp {

MixtureState build_mixture(const std::vector<double>& weights,
                           const std::vector<ComplexField>& components) {
    if (weights.size() != components.size() || weights.empty())
        throw InvalidArgument("mixture needs one weight per component");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("mixture weights must be >= 0");
        total += w;
    }
    if (total <= 0.0) throw InvalidArgument("mixture weights are all zero");
    for (const auto& c : components) {
        require_same_grid(c.grid(), components.front().grid(), "build_mixture");
        if (std::abs(norm(c) - 1.0) > 1e-8) throw InvalidArgument("mixture components must be normalized");
    }
    MixtureState m{weights, components};
    for (double& w : m.weights) w /= total;
    return m;
}

double mixture_trace(const MixtureState& m) {
    double t = 0.0;
    for (std::size_t i = 0; i < m.weights.size(); ++i) t += m.weights[i] * std::pow(norm(m.components[i]), 2);
    return t;
}

std::vector<double> mixture_spectrum(const MixtureState& m) {
    // gamma = Phi W Phi^*, nonzero spectrum equals that of W^(1/2) G W^(1/2).
    const std::size_t k = m.weights.size();
    Eigen::MatrixXcd S(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            S(i, j) = std::sqrt(m.weights[i] * m.weights[j]) * inner(m.components[i], m.components[j]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + k);
    std::sort(ev.rbegin(), ev.rend());
    return ev;
}

int mixture_rank(const MixtureState& m, double tol) {
    int r = 0;
    for (double v : mixture_spectrum(m)) r += v > tol ? 1 : 0;
    return r;
}

bool is_extreme(const MixtureState& m) { return mixture_rank(m) == 1; }

}  // namespace rotogp
