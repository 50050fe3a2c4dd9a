#pragma once

#include <string>
#include <vector>

#include "rlnclab/rational.hpp"

namespace rlnclab {

enum class Target { Sink, Network, Average };

std::string target_name(Target t);
Target parse_target(const std::string& s);

// Field order q and per-channel erasure probability p. Any integer q >= 2 is
// accepted here: the closed forms are defined for every q, including orders
// where no finite field exists (realizability is a separate query).
struct FormulaInput {
    BigInt q;
    Rational p = Rational(0);

    FormulaInput(BigInt order, Rational erasure_p = Rational(0));
};

// Probability that a uniformly random n x n matrix over a field of order q is
// invertible: prod_{i=1..n} (1 - q^-i). For n = 2 this is the familiar
// (q+1)(q-1)^2 / q^3.
Rational invertible_probability(int n, const BigInt& q);

// Exact failure probability of random linear coding on the rate-2 butterfly:
//   sink / average: 1 - (q+1)(q-1)^6  / q^7  * (1-p)^6
//   network:        1 - (q+1)(q-1)^10 / q^11 * (1-p)^9
Rational butterfly_failure(const FormulaInput& input, Target target);
Rational butterfly_success(const FormulaInput& input, Target target);

// Limit of the failure probabilities as q -> infinity, at fixed p.
Rational limit_failure(const Rational& p, Target target);

// q * failure(q, p=0) per requested q; approaches 5 for sinks/average and 9
// for the network as q grows.
std::vector<std::pair<BigInt, Rational>> convergence_rate_check(Target target,
                                                                const std::vector<BigInt>& qs);

struct ThresholdResult {
    BigInt minimal_integer_q;
    BigInt minimal_prime_power_q;
    Rational success_below;  // network success at minimal_integer_q - 1
    Rational success_at;     // network success at minimal_integer_q
};

// Least integer q >= 2 whose network success probability (at p = 0) reaches
// target_success, plus the least prime power at or above it. Network success
// is strictly increasing in q, so a doubling bracket plus binary search finds
// the boundary with exact rational comparisons only.
ThresholdResult threshold_search(const Rational& target_success);

bool is_prime_power_bigint(const BigInt& q);

}  // namespace rlnclab
