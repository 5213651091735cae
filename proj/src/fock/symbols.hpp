#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fock/basis.hpp"

namespace rotogp {

// One ladder factor: creator (a^dagger) or annihilator of a 0-based mode.
struct Ladder {
    bool dagger = false;
    int mode = 0;
};

// coeff * a^dagger_{c1} ... a^dagger_{cp} a_{d1} ... a_{dq}, mode lists sorted.
struct NormalTerm {
    cplx coeff;
    std::vector<int> creators;
    std::vector<int> annihilators;
    int degree() const { return static_cast<int>(creators.size() + annihilators.size()); }
};

// Operator polynomial kept in normal-ordered canonical form.
class OperatorPolynomial {
public:
    OperatorPolynomial() = default;
    explicit OperatorPolynomial(int modes) : modes_(modes) {}

    int modes() const { return modes_; }
    const std::vector<NormalTerm>& terms() const { return terms_; }
    int degree() const;

    // Adds coeff * word after normal ordering with [a_i, a_j^dagger] = delta_ij.
    void add_word(cplx coeff, const std::vector<Ladder>& word);

    // Grammar: terms joined by "+" / "-", each a product of factors
    // "adag", "a", "adag_k", "a_k" (k 1-based), "1", real numbers or
    // "(re,im)". Factors may come in any order.
    static OperatorPolynomial parse(const std::string& text, int modes);

    FockOperator to_operator(const FockBasis& basis) const;

private:
    int modes_ = 1;
    std::vector<NormalTerm> terms_;
    void add_normal(cplx coeff, std::vector<int> creators, std::vector<int> annihilators);
};

// Polynomial in (conj(z_j), z_j): key = (exponents of conj z, exponents of z).
class SymbolPolynomial {
public:
    using Key = std::pair<std::vector<int>, std::vector<int>>;

    explicit SymbolPolynomial(int modes) : modes_(modes) {}
    int modes() const { return modes_; }
    const std::map<Key, cplx>& coefficients() const { return c_; }
    void add(const Key& k, cplx v);
    cplx operator()(const std::vector<cplx>& z) const;
    // exp(sign * sum_j d/dz_j d/dconj(z_j)) applied exactly (finite series).
    SymbolPolynomial heat(int sign) const;
    // max |coefficient difference|.
    double distance(const SymbolPolynomial& other) const;

private:
    int modes_;
    std::map<Key, cplx> c_;
};

// Lower symbol <z|op|z>: conj(z) for each creator, z for each annihilator.
SymbolPolynomial lower_symbol(const OperatorPolynomial& op);
// Upper symbol U = exp(-d dbar) u of the lower symbol u; degree <= 4.
SymbolPolynomial upper_symbol(const OperatorPolynomial& op);

}  // namespace rotogp
