#include "fock/symbols.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "core/errors.hpp"

namespace rotogp {

namespace {

double falling(int n, int k) {
    double out = 1.0;
    for (int i = 0; i < k; ++i) out *= n - i;
    return out;
}

double factorial(int k) { return falling(k, k); }

}  // namespace

int OperatorPolynomial::degree() const {
    int d = 0;
    for (const NormalTerm& t : terms_) d = std::max(d, t.degree());
    return d;
}

void OperatorPolynomial::add_normal(cplx coeff, std::vector<int> creators, std::vector<int> annihilators) {
    std::sort(creators.begin(), creators.end());
    std::sort(annihilators.begin(), annihilators.end());
    for (NormalTerm& t : terms_)
        if (t.creators == creators && t.annihilators == annihilators) {
            t.coeff += coeff;
            return;
        }
    terms_.push_back({coeff, std::move(creators), std::move(annihilators)});
}

void OperatorPolynomial::add_word(cplx coeff, const std::vector<Ladder>& word) {
    for (const Ladder& f : word)
        if (f.mode < 0 || f.mode >= modes_) throw InvalidArgument("ladder factor mode out of range");
    // First annihilator immediately followed by a creator.
    for (std::size_t i = 0; i + 1 < word.size(); ++i) {
        if (!word[i].dagger && word[i + 1].dagger) {
            std::vector<Ladder> swapped = word;
            std::swap(swapped[i], swapped[i + 1]);
            add_word(coeff, swapped);
            if (word[i].mode == word[i + 1].mode) {
                std::vector<Ladder> contracted;
                for (std::size_t k = 0; k < word.size(); ++k)
                    if (k != i && k != i + 1) contracted.push_back(word[k]);
                add_word(coeff, contracted);
            }
            return;
        }
    }
    std::vector<int> c, a;
    for (const Ladder& f : word) (f.dagger ? c : a).push_back(f.mode);
    add_normal(coeff, std::move(c), std::move(a));
}

OperatorPolynomial OperatorPolynomial::parse(const std::string& text, int modes) {
    if (modes < 1) throw InvalidArgument("modes must be >= 1");
    OperatorPolynomial out(modes);
    std::string spaced;
    for (char ch : text) {
        if (ch == '*') ch = ' ';
        if (ch == '+' || ch == '-') {
            // Signs inside "(re,im)" or exponents stay attached.
            const bool in_number = !spaced.empty() && (spaced.back() == '(' || spaced.back() == ',' ||
                                                       spaced.back() == 'e' || spaced.back() == 'E');
            if (!in_number) {
                spaced += ' ';
                spaced += ch;
                spaced += ' ';
                continue;
            }
        }
        spaced += ch;
    }
    std::istringstream in(spaced);
    std::string tok;
    cplx coeff = 1.0;
    std::vector<Ladder> word;
    bool have_factor = false, any = false;
    auto flush = [&]() {
        if (!have_factor) throw InvalidArgument("empty term in operator '" + text + "'");
        out.add_word(coeff, word);
        coeff = 1.0;
        word.clear();
        have_factor = false;
        any = true;
    };
    auto mode_of = [&](const std::string& t, std::size_t prefix) {
        if (t.size() == prefix) return 0;
        if (t[prefix] != '_') throw InvalidArgument("bad ladder factor '" + t + "'");
        const int k = std::stoi(t.substr(prefix + 1));
        if (k < 1 || k > modes) throw InvalidArgument("mode index out of range in '" + t + "'");
        return k - 1;
    };
    bool negate_next = false;
    while (in >> tok) {
        if (tok == "+" || tok == "-") {
            if (have_factor) flush();
            negate_next = tok == "-";
            coeff = negate_next ? -1.0 : 1.0;
            continue;
        }
        have_factor = true;
        if (tok.rfind("adag", 0) == 0) {
            word.push_back({true, mode_of(tok, 4)});
        } else if (tok[0] == 'a') {
            word.push_back({false, mode_of(tok, 1)});
        } else if (tok[0] == '(') {
            double re = 0, im = 0;
            char c1 = 0, c2 = 0, c3 = 0;
            std::istringstream num(tok);
            if (!(num >> c1 >> re >> c2 >> im >> c3) || c2 != ',' || c3 != ')')
                throw InvalidArgument("bad complex coefficient '" + tok + "'");
            coeff *= cplx(re, im);
        } else {
            std::size_t used = 0;
            double v = 0;
            try {
                v = std::stod(tok, &used);
            } catch (const std::exception&) {
                throw InvalidArgument("bad token '" + tok + "' in operator");
            }
            if (used != tok.size()) throw InvalidArgument("bad token '" + tok + "' in operator");
            coeff *= v;
        }
    }
    if (have_factor) flush();
    if (!any) throw InvalidArgument("empty operator");
    return out;
}

FockOperator OperatorPolynomial::to_operator(const FockBasis& basis) const {
    if (basis.modes() != modes_) throw InvalidArgument("operator and basis mode counts differ");
    std::vector<Eigen::Triplet<cplx>> trip;
    for (int i = 0; i < basis.size(); ++i) {
        for (const NormalTerm& t : terms_) {
            Occupation n = basis.state(i);
            double amp = 1.0;
            bool zero = false;
            for (int m : t.annihilators) {
                if (n[m] == 0) {
                    zero = true;
                    break;
                }
                amp *= std::sqrt(double(n[m]));
                --n[m];
            }
            if (zero) continue;
            for (int m : t.creators) {
                ++n[m];
                amp *= std::sqrt(double(n[m]));
            }
            const int k = basis.index(n);
            if (k >= 0) trip.emplace_back(k, i, t.coeff * amp);
        }
    }
    FockOperator out;
    out.matrix.resize(basis.size(), basis.size());
    out.matrix.setFromTriplets(trip.begin(), trip.end());
    out.hermitian = out.hermiticity_defect() <= 1e-12;
    return out;
}

void SymbolPolynomial::add(const Key& k, cplx v) {
    if (static_cast<int>(k.first.size()) != modes_ || static_cast<int>(k.second.size()) != modes_)
        throw InvalidArgument("symbol exponent length differs from mode count");
    c_[k] += v;
}

cplx SymbolPolynomial::operator()(const std::vector<cplx>& z) const {
    if (static_cast<int>(z.size()) != modes_) throw InvalidArgument("symbol argument has wrong length");
    cplx sum = 0.0;
    for (const auto& [key, v] : c_) {
        cplx term = v;
        for (int j = 0; j < modes_; ++j) term *= std::pow(std::conj(z[j]), key.first[j]) * std::pow(z[j], key.second[j]);
        sum += term;
    }
    return sum;
}

SymbolPolynomial SymbolPolynomial::heat(int sign) const {
    SymbolPolynomial out(modes_);
    for (const auto& [key, v] : c_) {
        // Product over modes of sum_k sign^k / k! m!/(m-k)! n!/(n-k)! zbar^(m-k) z^(n-k).
        std::vector<std::pair<Key, cplx>> partial{{Key(std::vector<int>(modes_), std::vector<int>(modes_)), v}};
        for (int j = 0; j < modes_; ++j) {
            const int m = key.first[j], n = key.second[j];
            std::vector<std::pair<Key, cplx>> next;
            for (const auto& [pk, pv] : partial)
                for (int k = 0; k <= std::min(m, n); ++k) {
                    Key nk = pk;
                    nk.first[j] = m - k;
                    nk.second[j] = n - k;
                    const double c = std::pow(double(sign), k) / factorial(k) * falling(m, k) * falling(n, k);
                    next.emplace_back(nk, pv * c);
                }
            partial = std::move(next);
        }
        for (const auto& [pk, pv] : partial) out.c_[pk] += pv;
    }
    return out;
}

double SymbolPolynomial::distance(const SymbolPolynomial& other) const {
    std::map<Key, cplx> diff = c_;
    for (const auto& [k, v] : other.c_) diff[k] -= v;
    double worst = 0.0;
    for (const auto& [k, v] : diff) worst = std::max(worst, std::abs(v));
    return worst;
}

SymbolPolynomial lower_symbol(const OperatorPolynomial& op) {
    SymbolPolynomial out(op.modes());
    for (const NormalTerm& t : op.terms()) {
        SymbolPolynomial::Key key(std::vector<int>(op.modes()), std::vector<int>(op.modes()));
        for (int m : t.creators) ++key.first[m];
        for (int m : t.annihilators) ++key.second[m];
        out.add(key, t.coeff);
    }
    return out;
}

SymbolPolynomial upper_symbol(const OperatorPolynomial& op) {
    if (op.degree() > 4) throw InvalidArgument("upper symbol supports polynomials of degree <= 4");
    return lower_symbol(op).heat(-1);
}

}  // namespace rotogp
