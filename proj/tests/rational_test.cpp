#include <doctest.h>

#include "rlnclab/polynomial.hpp"
#include "rlnclab/rational.hpp"

using rlnclab::BigInt;
using rlnclab::Rational;
using rlnclab::RationalPolynomial;

TEST_SUITE("rational") {

TEST_CASE("construction reduces and normalizes sign") {
    Rational r(BigInt(6), BigInt(-8));
    CHECK(r.num() == -3);
    CHECK(r.den() == 4);
    CHECK(Rational(BigInt(0), BigInt(-5)) == Rational(0));
    CHECK_THROWS_AS(Rational(BigInt(1), BigInt(0)), rlnclab::Error);
}

TEST_CASE("from_string accepts fractions, integers, and decimals") {
    CHECK(Rational::from_string("9/10") == Rational(BigInt(9), BigInt(10)));
    CHECK(Rational::from_string("-3/6") == Rational(BigInt(-1), BigInt(2)));
    CHECK(Rational::from_string("42") == Rational(42));
    CHECK(Rational::from_string("0.25") == Rational(BigInt(1), BigInt(4)));
    CHECK(Rational::from_string("-0.5") == Rational(BigInt(-1), BigInt(2)));
    CHECK(Rational::from_string(" 1/10 ") == Rational(BigInt(1), BigInt(10)));
    CHECK(Rational::from_string(".5") == Rational(BigInt(1), BigInt(2)));
    CHECK_THROWS_AS(Rational::from_string("abc"), rlnclab::ParseError);
    CHECK_THROWS_AS(Rational::from_string("1/0"), rlnclab::ParseError);
    CHECK_THROWS_AS(Rational::from_string(""), rlnclab::ParseError);
    CHECK_THROWS_AS(Rational::from_string("1.2.3"), rlnclab::ParseError);
}

TEST_CASE("arithmetic and comparisons") {
    const Rational half(BigInt(1), BigInt(2));
    const Rational third(BigInt(1), BigInt(3));
    CHECK(half + third == Rational(BigInt(5), BigInt(6)));
    CHECK(half - third == Rational(BigInt(1), BigInt(6)));
    CHECK(half * third == Rational(BigInt(1), BigInt(6)));
    CHECK(half / third == Rational(BigInt(3), BigInt(2)));
    CHECK(third < half);
    CHECK(half <= half);
    CHECK(-half == Rational(BigInt(-1), BigInt(2)));
    CHECK(Rational::pow(half, 10) == Rational(BigInt(1), BigInt(1024)));
    CHECK(Rational::pow(Rational(0), 0) == Rational(1));
    CHECK_THROWS_AS(half / Rational(0), rlnclab::Error);
}

TEST_CASE("fraction strings are reduced") {
    CHECK(Rational(BigInt(4096), BigInt(531441)).to_fraction_string() == "4096/531441");
    CHECK(Rational(BigInt(12288), BigInt(531441)).to_fraction_string() == "4096/177147");
    CHECK(Rational(6).to_fraction_string() == "6");
}

TEST_CASE("decimal rendering uses round-half-even significant digits") {
    CHECK(Rational(BigInt(3), BigInt(2048)).to_decimal_string(6) == "0.00146484");
    CHECK(Rational(BigInt(125), BigInt(128)).to_decimal_string(6) == "0.976562");  // ...625 ties to even
    CHECK(Rational(BigInt(1), BigInt(8)).to_decimal_string(2) == "0.12");   // 0.125 ties to even
    CHECK(Rational(BigInt(3), BigInt(8)).to_decimal_string(2) == "0.38");   // 0.375 ties to even
    CHECK(Rational(BigInt(4096), BigInt(177147)).to_decimal_string(6) == "0.023122");
    CHECK(Rational(BigInt(295245), BigInt(4194304)).to_decimal_string(6) == "0.0703919");
    CHECK(Rational(0).to_decimal_string(6) == "0");
    CHECK(Rational(-1, 1).to_decimal_string(3) == "-1");
    CHECK(Rational(BigInt(1), BigInt(2)).to_decimal_string(6) == "0.5");
    CHECK(Rational(BigInt(999999), BigInt(1000)).to_decimal_string(3) == "1000");  // carry ripple
    CHECK(Rational(12345).to_decimal_string(3) == "12300");
}

TEST_CASE("fixed rendering") {
    CHECK(Rational(BigInt(4096), BigInt(177147)).to_fixed_string(3) == "0.023");
    CHECK(Rational(BigInt(295245), BigInt(4194304)).to_fixed_string(3) == "0.070");
    CHECK(Rational(BigInt(1), BigInt(2)).to_fixed_string(0) == "0");  // 0.5 ties to even 0
    CHECK(Rational(BigInt(3), BigInt(2)).to_fixed_string(0) == "2");
    CHECK(Rational(BigInt(-1), BigInt(4)).to_fixed_string(2) == "-0.25");
}

TEST_CASE("polynomial arithmetic and evaluation") {
    // (1-p)^2 = 1 - 2p + p^2
    RationalPolynomial sq = RationalPolynomial::bernoulli_weight(Rational(1), 0, 2);
    CHECK(sq.coefficients() == std::vector<Rational>{Rational(1), Rational(-2), Rational(1)});
    CHECK(sq.evaluate(Rational(BigInt(1), BigInt(3))) == Rational(BigInt(4), BigInt(9)));

    // p^2 (1-p)
    RationalPolynomial w = RationalPolynomial::bernoulli_weight(Rational(1), 2, 1);
    CHECK(w.coefficient(2) == Rational(1));
    CHECK(w.coefficient(3) == Rational(-1));
    CHECK(w.degree() == 3);

    // sum over all k of C(2,k) p^k (1-p)^(2-k) is identically 1
    RationalPolynomial total;
    total += RationalPolynomial::bernoulli_weight(Rational(1), 0, 2);
    total += RationalPolynomial::bernoulli_weight(Rational(2), 1, 1);
    total += RationalPolynomial::bernoulli_weight(Rational(1), 2, 0);
    CHECK(total == RationalPolynomial::constant(Rational(1)));

    RationalPolynomial zero;
    CHECK(zero.degree() == -1);
    CHECK(zero.evaluate(Rational(5)) == Rational(0));
}

}  // TEST_SUITE
