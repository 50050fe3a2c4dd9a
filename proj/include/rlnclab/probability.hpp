#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "rlnclab/field.hpp"
#include "rlnclab/network.hpp"
#include "rlnclab/polynomial.hpp"
#include "rlnclab/rational.hpp"

namespace rlnclab {

// I.i.d. per-channel failure probability. Only real channels can fail.
struct ErasureModel {
    Rational p;

    explicit ErasureModel(Rational probability);
};

// Monte Carlo point estimate of a probability in [0, 1].
struct Estimate {
    double mean = 0.0;
    std::uint64_t trials = 0;
    double std_error = 0.0;  // sqrt(mean (1-mean) / trials)
    std::uint64_t seed = 0;
};

// Normal-approximation confidence interval, replaced by a Wilson score
// interval when either tail has fewer than 10 expected events (rare-event
// estimates at large field orders would otherwise get degenerate intervals).
struct ConfidenceInterval {
    double low = 0.0;
    double high = 0.0;
    bool wilson = false;
};
ConfidenceInterval confidence_interval(const Estimate& e, double z = 1.96);

// The three estimands: per-sink failure, whole-network failure (some sink
// fails), and the arithmetic mean of the per-sink failures.
template <typename P>
struct FailureProbabilities {
    std::map<std::string, P> per_sink;
    P network{};
    P average{};
};

using ExactProbabilities = FailureProbabilities<Rational>;
using EstimatedProbabilities = FailureProbabilities<Estimate>;

struct EnumerationOptions {
    // Maximum number of (assignment, pattern) propagations. With an erasure
    // model, coefficients feeding an erased channel cannot influence any
    // outcome, so each pattern is enumerated over its relevant pairs only and
    // the budget counts those reduced spaces.
    std::uint64_t max_evaluations = 1ULL << 26;
    int workers = 0;  // 0 = resolve from environment
};

struct MonteCarloOptions {
    int workers = 0;
};

struct EnumerationResult {
    ExactProbabilities probabilities;
    BigInt total_assignments;     // q^(#pairs)
    std::uint64_t evaluations;    // propagations actually performed
    // Raw counts over the full assignment space; only present without an
    // erasure model (weighted counts are not integers).
    std::optional<std::map<std::string, BigInt>> sink_success_counts;
    std::optional<BigInt> network_success_count;
};

struct MonteCarloResult {
    EstimatedProbabilities probabilities;
    std::map<std::string, std::uint64_t> sink_failure_counts;
    std::uint64_t network_failure_count = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

// Exact failure probabilities for each sink / the network / the average,
// per-channel erasure patterns included when a model is given.
struct ErasurePolynomials {
    std::map<std::string, RationalPolynomial> sink_failure;
    RationalPolynomial network_failure;
    RationalPolynomial average_failure;
};

// Iterates every coefficient assignment (all q^#pairs of them, as a
// mixed-radix counter in canonical pair order) and, with an erasure model,
// every erasure pattern with its exact rational weight p^|S| (1-p)^(R-|S|).
// Returns exact reduced rationals. Throws SearchSpaceTooLarge when the work
// would exceed options.max_evaluations.
EnumerationResult enumerate_detailed(const NetworkSpec& spec, const FieldPtr& field,
                                     const std::optional<ErasureModel>& erasure = std::nullopt,
                                     const EnumerationOptions& options = {});

ExactProbabilities enumerate_exact(const NetworkSpec& spec, const FieldPtr& field,
                                   const std::optional<ErasureModel>& erasure = std::nullopt,
                                   const EnumerationOptions& options = {});

// Seeded simulation: trial t draws its own substream from (seed, t), samples
// a fresh code (and erasure pattern, when modeled), and tallies decoding
// failures. Results are identical for a given (seed, trials) at any worker
// count.
MonteCarloResult monte_carlo_detailed(const NetworkSpec& spec, const FieldPtr& field,
                                      const std::optional<ErasureModel>& erasure,
                                      std::uint64_t trials, std::uint64_t seed,
                                      const MonteCarloOptions& options = {});

EstimatedProbabilities monte_carlo(const NetworkSpec& spec, const FieldPtr& field,
                                   const std::optional<ErasureModel>& erasure,
                                   std::uint64_t trials, std::uint64_t seed,
                                   const MonteCarloOptions& options = {});

// Failure probabilities as exact polynomials in the per-channel erasure
// probability p: for each erasure pattern the conditional failure probability
// is computed by coefficient enumeration and accumulated against the
// pattern's weight polynomial. Degree is at most the real channel count.
ErasurePolynomials erasure_polynomial(const NetworkSpec& spec, const FieldPtr& field,
                                      const EnumerationOptions& options = {});

}  // namespace rlnclab
