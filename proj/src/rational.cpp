#include "rlnclab/rational.hpp"

#include <algorithm>
#include <cctype>

namespace rlnclab {

namespace {

using boost::multiprecision::gcd;

BigInt pow10(unsigned k) {
    BigInt r = 1;
    for (unsigned i = 0; i < k; ++i) r *= 10;
    return r;
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

BigInt parse_integer(std::string_view s, std::string_view original) {
    bool neg = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) throw ParseError("not a rational number: '" + std::string(original) + "'");
    BigInt v{std::string(s)};
    if (neg) v = -v;
    return v;
}

}  // namespace

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_ == 0) throw Error("rational with zero denominator");
    reduce();
}

void Rational::reduce() {
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    if (num_ == 0) {
        den_ = 1;
        return;
    }
    BigInt g = gcd(boost::multiprecision::abs(num_), den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

Rational Rational::from_string(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) throw ParseError("empty rational");

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        BigInt n = parse_integer(s.substr(0, slash), text);
        BigInt d = parse_integer(s.substr(slash + 1), text);
        if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
        return Rational(std::move(n), std::move(d));
    }
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view head = s.substr(0, dot);
        std::string_view frac = s.substr(dot + 1);
        bool neg = false;
        if (!head.empty() && (head.front() == '+' || head.front() == '-')) {
            neg = head.front() == '-';
            head.remove_prefix(1);
        }
        if (!all_digits(frac) || (!head.empty() && !all_digits(head)))
            throw ParseError("not a rational number: '" + std::string(text) + "'");
        BigInt whole = head.empty() ? BigInt(0) : BigInt(std::string(head));
        BigInt num = whole * pow10(static_cast<unsigned>(frac.size())) + BigInt(std::string(frac));
        if (neg) num = -num;
        return Rational(std::move(num), pow10(static_cast<unsigned>(frac.size())));
    }
    return Rational(parse_integer(s, text));
}

Rational Rational::operator-() const {
    Rational r = *this;
    r.num_ = -r.num_;
    return r;
}

Rational& Rational::operator+=(const Rational& o) {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ *= o.den_;
    reduce();
    return *this;
}

Rational& Rational::operator-=(const Rational& o) {
    num_ = num_ * o.den_ - o.num_ * den_;
    den_ *= o.den_;
    reduce();
    return *this;
}

Rational& Rational::operator*=(const Rational& o) {
    num_ *= o.num_;
    den_ *= o.den_;
    reduce();
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.num_ == 0) throw Error("rational division by zero");
    num_ *= o.den_;
    den_ *= o.num_;
    reduce();
    return *this;
}

Rational Rational::pow(const Rational& base, unsigned exponent) {
    Rational result(1);
    Rational b = base;
    unsigned e = exponent;
    while (e > 0) {
        if (e & 1u) result *= b;
        b *= b;
        e >>= 1u;
    }
    return result;
}

std::string Rational::to_fraction_string() const {
    if (den_ == 1) return num_.str();
    return num_.str() + "/" + den_.str();
}

namespace {

// Rounds a/b (a >= 0, b > 0) to an integer, half-even.
BigInt divide_half_even(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    BigInt r = a % b;
    BigInt twice = r * 2;
    if (twice > b || (twice == b && (q & 1) == 1)) ++q;
    return q;
}

}  // namespace

std::string Rational::to_decimal_string(int significant_digits) const {
    if (significant_digits < 1) significant_digits = 1;
    if (num_ == 0) return "0";

    BigInt a = boost::multiprecision::abs(num_);
    const BigInt& b = den_;

    // Exact floor(log10(a/b)).
    long e = static_cast<long>(a.str().size()) - static_cast<long>(b.str().size());
    auto less_than_pow10 = [&](long k) {
        // a/b < 10^k ?
        if (k >= 0) return a < b * pow10(static_cast<unsigned>(k));
        return a * pow10(static_cast<unsigned>(-k)) < b;
    };
    while (less_than_pow10(e)) --e;
    while (!less_than_pow10(e + 1)) ++e;

    // digits = round(a/b * 10^(sig-1-e)), a sig-digit integer.
    long shift = significant_digits - 1 - e;
    BigInt scaled_num = a;
    BigInt scaled_den = b;
    if (shift >= 0)
        scaled_num *= pow10(static_cast<unsigned>(shift));
    else
        scaled_den *= pow10(static_cast<unsigned>(-shift));
    BigInt digits = divide_half_even(scaled_num, scaled_den);
    if (digits == pow10(static_cast<unsigned>(significant_digits))) {
        digits /= 10;
        ++e;
    }

    std::string ds = digits.str();
    std::string out;
    if (e >= significant_digits - 1) {
        out = ds + std::string(static_cast<std::size_t>(e - significant_digits + 1), '0');
    } else if (e >= 0) {
        std::string frac = ds.substr(static_cast<std::size_t>(e + 1));
        while (!frac.empty() && frac.back() == '0') frac.pop_back();
        out = ds.substr(0, static_cast<std::size_t>(e + 1));
        if (!frac.empty()) out += "." + frac;
    } else {
        std::string frac = std::string(static_cast<std::size_t>(-e - 1), '0') + ds;
        while (!frac.empty() && frac.back() == '0') frac.pop_back();
        out = frac.empty() ? "0" : "0." + frac;
    }
    return (num_ < 0 ? "-" : "") + out;
}

std::string Rational::to_fixed_string(int decimal_places) const {
    if (decimal_places < 0) decimal_places = 0;
    BigInt a = boost::multiprecision::abs(num_);
    BigInt scaled = divide_half_even(a * pow10(static_cast<unsigned>(decimal_places)), den_);
    std::string ds = scaled.str();
    std::string out;
    if (decimal_places == 0) {
        out = ds;
    } else {
        if (ds.size() <= static_cast<std::size_t>(decimal_places))
            ds = std::string(static_cast<std::size_t>(decimal_places) + 1 - ds.size(), '0') + ds;
        out = ds.substr(0, ds.size() - static_cast<std::size_t>(decimal_places)) + "." +
              ds.substr(ds.size() - static_cast<std::size_t>(decimal_places));
    }
    bool negative = num_ < 0 && scaled != 0;
    return (negative ? "-" : "") + out;
}

double Rational::to_double() const {
    using boost::multiprecision::cpp_rational;
    return static_cast<double>(cpp_rational(num_, den_));
}

}  // namespace rlnclab
