#pragma once

#include <vector>

#include "rlnclab/rational.hpp"

namespace rlnclab {

// Dense polynomial with exact rational coefficients; coefficient k multiplies
// p^k. Trailing zero coefficients are trimmed, so equal polynomials compare
// equal structurally.
class RationalPolynomial {
public:
    RationalPolynomial() = default;
    explicit RationalPolynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
        trim();
    }
    static RationalPolynomial constant(Rational c) { return RationalPolynomial({std::move(c)}); }

    // w * p^a * (1-p)^b, expanded.
    static RationalPolynomial bernoulli_weight(const Rational& w, unsigned a, unsigned b) {
        std::vector<Rational> c(a + b + 1, Rational(0));
        // binomial expansion of (1-p)^b
        Rational binom(1);
        for (unsigned j = 0; j <= b; ++j) {
            Rational term = w * binom;
            if (j % 2 == 1) term = -term;
            c[a + j] = term;
            binom *= Rational(static_cast<long long>(b - j));
            binom /= Rational(static_cast<long long>(j + 1));
        }
        return RationalPolynomial(std::move(c));
    }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }  // -1 for zero
    const std::vector<Rational>& coefficients() const { return coeffs_; }
    Rational coefficient(std::size_t k) const {
        return k < coeffs_.size() ? coeffs_[k] : Rational(0);
    }

    Rational evaluate(const Rational& p) const {
        Rational acc(0);
        for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * p + coeffs_[k];
        return acc;
    }

    RationalPolynomial& operator+=(const RationalPolynomial& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rational(0));
        for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
        trim();
        return *this;
    }
    friend RationalPolynomial operator+(RationalPolynomial a, const RationalPolynomial& b) {
        return a += b;
    }
    RationalPolynomial& operator-=(const RationalPolynomial& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rational(0));
        for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
        trim();
        return *this;
    }
    friend RationalPolynomial operator-(RationalPolynomial a, const RationalPolynomial& b) {
        return a -= b;
    }

    RationalPolynomial& operator*=(const Rational& c) {
        for (auto& x : coeffs_) x *= c;
        trim();
        return *this;
    }

    friend bool operator==(const RationalPolynomial& a, const RationalPolynomial& b) {
        return a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const RationalPolynomial& a, const RationalPolynomial& b) {
        return !(a == b);
    }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    }

    std::vector<Rational> coeffs_;
};

}  // namespace rlnclab
