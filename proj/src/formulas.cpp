#include "rlnclab/formulas.hpp"

#include <algorithm>

namespace rlnclab {

std::string target_name(Target t) {
    switch (t) {
        case Target::Sink: return "sink";
        case Target::Network: return "network";
        case Target::Average: return "average";
    }
    return "?";
}

Target parse_target(const std::string& s) {
    if (s == "sink") return Target::Sink;
    if (s == "network") return Target::Network;
    if (s == "average") return Target::Average;
    throw ParseError("unknown target '" + s + "'; expected sink, network, or average");
}

FormulaInput::FormulaInput(BigInt order, Rational erasure_p)
    : q(std::move(order)), p(std::move(erasure_p)) {
    if (q < 2) throw Error("formula requires q >= 2, got " + q.str());
    if (p < Rational(0) || p > Rational(1))
        throw Error("erasure probability must lie in [0, 1], got " + p.to_fraction_string());
}

namespace {

BigInt bigint_pow(const BigInt& base, unsigned exp) {
    BigInt r = 1;
    for (unsigned i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace

Rational invertible_probability(int n, const BigInt& q) {
    if (n < 1) throw InvalidDimension("matrix dimension must be >= 1, got " + std::to_string(n));
    if (q < 2) throw Error("invertible_probability requires q >= 2, got " + q.str());
    Rational result(1);
    for (int i = 1; i <= n; ++i) {
        const BigInt qi = bigint_pow(q, static_cast<unsigned>(i));
        result *= Rational(qi - 1, qi);
    }
    return result;
}

Rational butterfly_success(const FormulaInput& input, Target target) {
    const BigInt& q = input.q;
    const Rational alive = Rational(1) - input.p;
    if (target == Target::Network)
        return Rational((q + 1) * bigint_pow(q - 1, 10), bigint_pow(q, 11)) *
               Rational::pow(alive, 9);
    return Rational((q + 1) * bigint_pow(q - 1, 6), bigint_pow(q, 7)) * Rational::pow(alive, 6);
}

Rational butterfly_failure(const FormulaInput& input, Target target) {
    return Rational(1) - butterfly_success(input, target);
}

Rational limit_failure(const Rational& p, Target target) {
    if (p < Rational(0) || p > Rational(1))
        throw Error("erasure probability must lie in [0, 1], got " + p.to_fraction_string());
    const Rational alive = Rational(1) - p;
    if (target == Target::Network) return Rational(1) - Rational::pow(alive, 9);
    return Rational(1) - Rational::pow(alive, 6);
}

std::vector<std::pair<BigInt, Rational>> convergence_rate_check(Target target,
                                                                const std::vector<BigInt>& qs) {
    std::vector<std::pair<BigInt, Rational>> table;
    table.reserve(qs.size());
    for (const BigInt& q : qs) {
        const Rational failure = butterfly_failure(FormulaInput(q), target);
        table.emplace_back(q, Rational(q) * failure);
    }
    return table;
}

bool is_prime_power_bigint(const BigInt& q) {
    if (q < 2) return false;
    BigInt x = q;
    BigInt factor = 0;
    for (BigInt d = 2; d * d <= x; ++d) {
        if (x % d == 0) {
            factor = d;
            break;
        }
    }
    if (factor == 0) return true;  // prime
    while (x % factor == 0) x /= factor;
    return x == 1;
}

ThresholdResult threshold_search(const Rational& target_success) {
    if (target_success <= Rational(0) || target_success >= Rational(1))
        throw ParseError("threshold target must satisfy 0 < target < 1, got " +
                         target_success.to_fraction_string());

    auto success = [](const BigInt& q) {
        return butterfly_success(FormulaInput(q), Target::Network);
    };

    // Double until the target is bracketed, then binary search the boundary.
    BigInt hi = 2;
    while (success(hi) < target_success) hi *= 2;
    BigInt lo = hi / 2;
    if (lo < 2) lo = 2;
    // Invariant: success(hi) >= target; lo is 2 or known to be below target.
    while (lo + 1 < hi) {
        const BigInt mid = (lo + hi) / 2;
        if (success(mid) >= target_success)
            hi = mid;
        else
            lo = mid;
    }
    const BigInt minimal = (success(lo) >= target_success) ? lo : hi;

    ThresholdResult result;
    result.minimal_integer_q = minimal;
    result.success_at = success(minimal);
    result.success_below = minimal > 2 ? success(minimal - 1) : Rational(0);
    BigInt pp = minimal;
    while (!is_prime_power_bigint(pp)) ++pp;
    result.minimal_prime_power_q = pp;
    return result;
}

}  // namespace rlnclab
