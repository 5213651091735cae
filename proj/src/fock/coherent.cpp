#include "fock/coherent.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>

#include "core/errors.hpp"
#include "core/quadrature.hpp"

namespace rotogp {

namespace {

// e^{-|z|^2/2} z^n / sqrt(n!) per mode.
cplx amplitude(const std::vector<cplx>& z, const Occupation& n) {
    cplx out = 1.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
        out *= std::exp(-0.5 * std::norm(z[j])) * std::pow(z[j], n[j]) / std::sqrt(std::tgamma(n[j] + 1.0));
    }
    return out;
}

}  // namespace

CoherentVector coherent_state(const std::vector<cplx>& z, const FockBasis& basis, double max_tail) {
    if (static_cast<int>(z.size()) != basis.modes()) throw InvalidArgument("z length differs from mode count");
    double lambda = 0.0;
    for (cplx v : z) lambda += std::norm(v);
    CoherentVector out;
    out.z = z;
    out.truncation_error = lambda == 0.0 ? 0.0 : boost::math::gamma_p(basis.n_max() + 1.0, lambda);
    if (out.truncation_error > max_tail)
        throw InvalidArgument("coherent state tail " + std::to_string(out.truncation_error) +
                              " exceeds the bound; increase n_max or reduce |z|");
    out.state.resize(basis.size());
    for (int i = 0; i < basis.size(); ++i) out.state(i) = amplitude(z, basis.state(i));
    return out;
}

cplx coherent_overlap(const std::vector<cplx>& z, const std::vector<cplx>& zp) {
    if (z.size() != zp.size()) throw InvalidArgument("overlap arguments differ in length");
    cplx e = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) e += -0.5 * std::norm(z[j]) - 0.5 * std::norm(zp[j]) + std::conj(z[j]) * zp[j];
    return std::exp(e);
}

cplx expectation(const CoherentVector& v, const FockOperator& A) {
    return v.state.dot(A.matrix * v.state);
}

ResolutionReport verify_resolution(const OperatorPolynomial& op, const ResolutionOptions& opts) {
    const int J = op.modes();
    if (J > 2) throw InvalidArgument("resolution check supports J <= 2");
    if (!(opts.Z > 0.0) || opts.radial < 4 || opts.angular < 4 || opts.n_cut < 0)
        throw InvalidArgument("bad resolution quadrature options");
    if (opts.angular <= 2 * opts.n_cut + op.degree())
        throw InvalidArgument("insufficient quadrature: angular nodes must exceed 2 n_cut + degree");
    const SymbolPolynomial U = upper_symbol(op);
    const FockBasis small(J, opts.n_cut);
    const int B = small.size();

    // One-mode node list: z = r e^{i theta}, weight r dr dtheta / pi.
    // The tensor-product rule factorizes over modes: for each mode tabulate
    // mom[m][n](r, c) = sum_q w_q conj(z)^m z^n a_r(z) conj(a_c(z)) with
    // a_r(z) = e^{-|z|^2/2} z^r / sqrt(r!) and weight r dr dtheta / pi.
    const QuadratureRule rq = gauss_legendre(opts.radial, 0.0, opts.Z);
    const int P = 4, nc = opts.n_cut;
    std::vector<Eigen::MatrixXcd> mom((P + 1) * (P + 1), Eigen::MatrixXcd::Zero(nc + 1, nc + 1));
    std::vector<cplx> a(nc + 1);
    for (std::size_t i = 0; i < rq.nodes.size(); ++i)
        for (int k = 0; k < opts.angular; ++k) {
            const cplx z = std::polar(rq.nodes[i], 2.0 * std::numbers::pi * k / opts.angular);
            const double w = rq.weights[i] * rq.nodes[i] * 2.0 / opts.angular;
            for (int r = 0; r <= nc; ++r) a[r] = amplitude({z}, Occupation{r});
            for (int m = 0; m <= P; ++m)
                for (int n = 0; n <= P; ++n) {
                    const cplx f = w * std::pow(std::conj(z), m) * std::pow(z, n);
                    Eigen::MatrixXcd& M = mom[m * (P + 1) + n];
                    for (int r = 0; r <= nc; ++r)
                        for (int c = 0; c <= nc; ++c) M(r, c) += f * a[r] * std::conj(a[c]);
                }
        }
    Eigen::MatrixXcd S(B, B), T = Eigen::MatrixXcd::Zero(B, B);
    for (int r = 0; r < B; ++r)
        for (int c = 0; c < B; ++c) {
            const Occupation& sr = small.state(r);
            const Occupation& sc = small.state(c);
            cplx id = 1.0;
            for (int j = 0; j < J; ++j) id *= mom[0](sr[j], sc[j]);
            S(r, c) = id;
            for (const auto& [key, coeff] : U.coefficients()) {
                cplx t = coeff;
                for (int j = 0; j < J; ++j) t *= mom[key.first[j] * (P + 1) + key.second[j]](sr[j], sc[j]);
                T(r, c) += t;
            }
        }
    // Exact matrix elements of op on the block, from a basis large enough
    // that no creator leaves the truncation.
    const FockBasis big(J, opts.n_cut + op.degree());
    const Eigen::MatrixXcd Abig = Eigen::MatrixXcd(op.to_operator(big).matrix);
    Eigen::MatrixXcd Aexact(B, B);
    for (int r = 0; r < B; ++r)
        for (int c = 0; c < B; ++c) Aexact(r, c) = Abig(big.index(small.state(r)), big.index(small.state(c)));
    ResolutionReport out;
    out.block = B;
    Eigen::JacobiSVD<Eigen::MatrixXcd> s1(S - Eigen::MatrixXcd::Identity(B, B));
    Eigen::JacobiSVD<Eigen::MatrixXcd> s2(T - Aexact);
    out.identity_error = s1.singularValues()(0);
    out.operator_error = s2.singularValues()(0);
    return out;
}

}  // namespace rotogp
