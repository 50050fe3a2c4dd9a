#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include "rlnclab/errors.hpp"

namespace rlnclab {

using BigInt = boost::multiprecision::cpp_int;

// Arbitrary-precision rational, always kept reduced with a positive
// denominator. All probability bookkeeping in the library goes through this
// type; floating point only ever appears as a rendering of it.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}  // NOLINT: implicit by design
    Rational(BigInt n) : num_(std::move(n)), den_(1) {}
    Rational(BigInt num, BigInt den);

    // Accepts "a/b", a plain integer, or a decimal such as "0.25".
    static Rational from_string(std::string_view text);

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    int sign() const { return num_ == 0 ? 0 : (num_ > 0 ? 1 : -1); }

    Rational operator-() const;
    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return a.num_ * b.den_ < b.num_ * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    static Rational pow(const Rational& base, unsigned exponent);

    Rational abs() const { return num_ < 0 ? -*this : *this; }

    // "a/b", or just "a" when the denominator is 1.
    std::string to_fraction_string() const;

    // Decimal rendering with `significant_digits` significant digits,
    // round-half-even. Plain notation, e.g. "0.00146484".
    std::string to_decimal_string(int significant_digits) const;

    // Fixed-point rendering with exactly `decimal_places` digits after the
    // point, round-half-even. E.g. to_fixed_string(3) of 4096/177147 is "0.023".
    std::string to_fixed_string(int decimal_places) const;

    double to_double() const;

private:
    void reduce();

    BigInt num_;
    BigInt den_;
};

}  // namespace rlnclab
