#include "rlnclab/probability.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "rlnclab/rlnc.hpp"
#include "rlnclab/threads.hpp"

namespace rlnclab {

ErasureModel::ErasureModel(Rational probability) : p(std::move(probability)) {
    if (p < Rational(0) || p > Rational(1))
        throw Error("erasure probability must lie in [0, 1], got " + p.to_fraction_string());
}

ConfidenceInterval confidence_interval(const Estimate& e, double z) {
    ConfidenceInterval ci;
    const double n = static_cast<double>(e.trials);
    if (e.trials == 0) return ci;
    const double k = e.mean * n;
    if (std::min(k, n - k) < 10.0) {
        // Wilson score interval.
        ci.wilson = true;
        const double z2 = z * z;
        const double denom = n + z2;
        const double center = (k + z2 / 2) / denom;
        const double half = z / denom * std::sqrt(k * (n - k) / n + z2 / 4);
        ci.low = std::max(0.0, center - half);
        ci.high = std::min(1.0, center + half);
    } else {
        ci.low = std::max(0.0, e.mean - z * e.std_error);
        ci.high = std::min(1.0, e.mean + z * e.std_error);
    }
    return ci;
}

namespace {

BigInt bigint_pow(std::uint64_t base, std::uint64_t exp) {
    BigInt result = 1;
    for (std::uint64_t i = 0; i < exp; ++i) result *= base;
    return result;
}

// Integer tallies for one slice of an enumeration or simulation.
struct Tally {
    std::vector<std::uint64_t> sink_success;
    std::uint64_t joint_success = 0;
    std::vector<std::uint64_t> sink_failure;
    std::uint64_t network_failure = 0;
};

// Walks assignments [lo, hi) of the mixed-radix counter over the given pair
// positions (the first position is the most significant digit; untouched
// positions keep their preset value) and counts decoding successes.
Tally count_successes(const CodingPlan& plan, const Field& field,
                      const std::vector<int>& positions, std::vector<std::uint32_t>& values,
                      std::uint64_t erased_mask, std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t q = field.order();
    const int w = plan.width();
    const auto num_sinks = plan.sinks().size();

    Tally tally;
    tally.sink_success.assign(num_sinks, 0);

    // Decode `lo` into digits, least significant digit last.
    std::uint64_t n = lo;
    for (std::size_t i = positions.size(); i-- > 0;) {
        values[static_cast<std::size_t>(positions[i])] = static_cast<std::uint32_t>(n % q);
        n /= q;
    }

    std::vector<std::uint32_t> kernels(static_cast<std::size_t>(plan.channel_count()) * w);
    std::size_t max_cols = 1;
    for (const auto& sink : plan.sinks()) max_cols = std::max(max_cols, sink.incoming.size());
    std::vector<std::uint32_t> scratch(static_cast<std::size_t>(w) * max_cols);

    for (std::uint64_t index = lo; index < hi; ++index) {
        detail::propagate_codes(plan, field, values.data(), erased_mask, kernels.data());
        bool all = true;
        for (std::size_t s = 0; s < num_sinks; ++s) {
            const bool ok =
                detail::sink_rank(plan, field, kernels.data(), plan.sinks()[s], scratch.data()) == w;
            if (ok)
                ++tally.sink_success[s];
            else
                all = false;
        }
        if (all) ++tally.joint_success;

        // Odometer increment over the enumerated positions.
        for (std::size_t i = positions.size(); i-- > 0;) {
            auto& digit = values[static_cast<std::size_t>(positions[i])];
            if (++digit < q) break;
            digit = 0;
        }
    }
    return tally;
}

Rational rational_ratio(std::uint64_t count, const BigInt& total) {
    return Rational(BigInt(count), total);
}

}  // namespace

EnumerationResult enumerate_detailed(const NetworkSpec& spec, const FieldPtr& field,
                                     const std::optional<ErasureModel>& erasure,
                                     const EnumerationOptions& options) {
    auto plan = CodingPlan::build(spec);
    const std::uint64_t q = field->order();
    const int num_pairs = plan->pair_count();
    const BigInt total_assignments = bigint_pow(q, static_cast<std::uint64_t>(num_pairs));
    const int workers = resolve_worker_count(options.workers);

    EnumerationResult result;
    result.total_assignments = total_assignments;

    const auto& sinks = plan->sinks();

    if (!erasure.has_value()) {
        if (total_assignments > BigInt(options.max_evaluations))
            throw SearchSpaceTooLarge(total_assignments.str(),
                                      std::to_string(options.max_evaluations));
        const auto total = static_cast<std::uint64_t>(total_assignments);
        result.evaluations = total;

        std::vector<int> positions(static_cast<std::size_t>(num_pairs));
        for (int i = 0; i < num_pairs; ++i) positions[static_cast<std::size_t>(i)] = i;

        auto tallies = run_partitioned<Tally>(
            total, workers, [&](int, std::uint64_t lo, std::uint64_t hi) {
                std::vector<std::uint32_t> values(static_cast<std::size_t>(num_pairs), 0);
                return count_successes(*plan, *field, positions, values, 0, lo, hi);
            });

        std::vector<std::uint64_t> sink_success(sinks.size(), 0);
        std::uint64_t joint = 0;
        for (const auto& t : tallies) {
            if (t.sink_success.empty()) continue;
            for (std::size_t s = 0; s < sinks.size(); ++s) sink_success[s] += t.sink_success[s];
            joint += t.joint_success;
        }

        std::map<std::string, BigInt> counts;
        Rational fail_sum(0);
        for (std::size_t s = 0; s < sinks.size(); ++s) {
            const Rational failure =
                Rational(1) - rational_ratio(sink_success[s], total_assignments);
            result.probabilities.per_sink.emplace(sinks[s].id, failure);
            counts.emplace(sinks[s].id, BigInt(sink_success[s]));
            fail_sum += failure;
        }
        result.probabilities.network = Rational(1) - rational_ratio(joint, total_assignments);
        result.probabilities.average =
            fail_sum / Rational(static_cast<long long>(sinks.size()));
        result.sink_success_counts = std::move(counts);
        result.network_success_count = BigInt(joint);
        return result;
    }

    // With erasures: one conditional enumeration per pattern. Coefficients
    // feeding an erased channel cannot change any outcome, so each pattern
    // enumerates its relevant pairs only; the skipped dimensions cancel in
    // the conditional probability cnt / q^(#relevant).
    const int num_real = plan->real_count();
    if (num_real >= 63) throw SearchSpaceTooLarge("2^" + std::to_string(num_real), "2^63");

    // Bit of the out-channel of each pair.
    std::vector<int> pair_out_bit(static_cast<std::size_t>(num_pairs));
    for (int ci = plan->width(); ci < plan->channel_count(); ++ci)
        for (const auto& term : plan->terms()[static_cast<std::size_t>(ci)])
            pair_out_bit[static_cast<std::size_t>(term.pair)] = plan->erasure_bit(ci);

    const std::uint64_t num_patterns = 1ULL << num_real;
    BigInt required = 0;
    {
        // sum over patterns of q^(#relevant pairs) = prod over channels of
        // (q^indeg + 1), since every pair belongs to exactly one out-channel.
        required = 1;
        std::vector<std::uint64_t> indeg(static_cast<std::size_t>(num_real), 0);
        for (int i = 0; i < num_pairs; ++i) ++indeg[static_cast<std::size_t>(pair_out_bit[i])];
        for (int b = 0; b < num_real; ++b)
            required *= bigint_pow(q, indeg[static_cast<std::size_t>(b)]) + 1;
    }
    if (required > BigInt(options.max_evaluations))
        throw SearchSpaceTooLarge(required.str(), std::to_string(options.max_evaluations));
    result.evaluations = static_cast<std::uint64_t>(required);

    struct PatternTally {
        std::vector<std::uint64_t> sink_success;
        std::uint64_t joint_success = 0;
        std::uint64_t space = 0;  // q^(#relevant pairs)
    };
    using PatternSlice = std::vector<PatternTally>;

    auto slices = run_partitioned<PatternSlice>(
        num_patterns, workers, [&](int, std::uint64_t lo, std::uint64_t hi) {
            PatternSlice slice;
            slice.reserve(static_cast<std::size_t>(hi - lo));
            for (std::uint64_t mask = lo; mask < hi; ++mask) {
                std::vector<int> positions;
                positions.reserve(static_cast<std::size_t>(num_pairs));
                for (int i = 0; i < num_pairs; ++i)
                    if (!((mask >> pair_out_bit[static_cast<std::size_t>(i)]) & 1u))
                        positions.push_back(i);
                std::uint64_t space = 1;
                for (std::size_t i = 0; i < positions.size(); ++i) space *= q;
                std::vector<std::uint32_t> values(static_cast<std::size_t>(num_pairs), 0);
                Tally t = count_successes(*plan, *field, positions, values, mask, 0, space);
                slice.push_back(PatternTally{std::move(t.sink_success), t.joint_success, space});
            }
            return slice;
        });

    const Rational p = erasure->p;
    const Rational one_minus_p = Rational(1) - p;
    std::map<std::string, Rational> sink_failure;
    for (const auto& sink : sinks) sink_failure.emplace(sink.id, Rational(0));
    Rational network_failure(0);

    std::uint64_t mask = 0;
    for (const auto& slice : slices) {
        for (const auto& pt : slice) {
            const int erased = std::popcount(mask);
            const Rational weight = Rational::pow(p, static_cast<unsigned>(erased)) *
                                    Rational::pow(one_minus_p,
                                                  static_cast<unsigned>(num_real - erased));
            if (!weight.is_zero()) {
                const BigInt space(pt.space);
                for (std::size_t s = 0; s < sinks.size(); ++s)
                    sink_failure.at(sinks[s].id) +=
                        weight * (Rational(1) - rational_ratio(pt.sink_success[s], space));
                network_failure +=
                    weight * (Rational(1) - rational_ratio(pt.joint_success, space));
            }
            ++mask;
        }
    }

    Rational fail_sum(0);
    for (const auto& [id, failure] : sink_failure) {
        result.probabilities.per_sink.emplace(id, failure);
        fail_sum += failure;
    }
    result.probabilities.network = network_failure;
    result.probabilities.average = fail_sum / Rational(static_cast<long long>(sinks.size()));
    return result;
}

ExactProbabilities enumerate_exact(const NetworkSpec& spec, const FieldPtr& field,
                                   const std::optional<ErasureModel>& erasure,
                                   const EnumerationOptions& options) {
    return enumerate_detailed(spec, field, erasure, options).probabilities;
}

ErasurePolynomials erasure_polynomial(const NetworkSpec& spec, const FieldPtr& field,
                                      const EnumerationOptions& options) {
    auto plan = CodingPlan::build(spec);
    const std::uint64_t q = field->order();
    const int num_pairs = plan->pair_count();
    const int num_real = plan->real_count();
    const int workers = resolve_worker_count(options.workers);
    if (num_real >= 63) throw SearchSpaceTooLarge("2^" + std::to_string(num_real), "2^63");

    std::vector<int> pair_out_bit(static_cast<std::size_t>(num_pairs));
    for (int ci = plan->width(); ci < plan->channel_count(); ++ci)
        for (const auto& term : plan->terms()[static_cast<std::size_t>(ci)])
            pair_out_bit[static_cast<std::size_t>(term.pair)] = plan->erasure_bit(ci);

    BigInt required = 1;
    {
        std::vector<std::uint64_t> indeg(static_cast<std::size_t>(num_real), 0);
        for (int i = 0; i < num_pairs; ++i) ++indeg[static_cast<std::size_t>(pair_out_bit[i])];
        for (int b = 0; b < num_real; ++b)
            required *= bigint_pow(q, indeg[static_cast<std::size_t>(b)]) + 1;
    }
    if (required > BigInt(options.max_evaluations))
        throw SearchSpaceTooLarge(required.str(), std::to_string(options.max_evaluations));

    struct PatternTally {
        std::vector<std::uint64_t> sink_success;
        std::uint64_t joint_success = 0;
        std::uint64_t space = 0;
    };
    using PatternSlice = std::vector<PatternTally>;
    const std::uint64_t num_patterns = 1ULL << num_real;

    auto slices = run_partitioned<PatternSlice>(
        num_patterns, workers, [&](int, std::uint64_t lo, std::uint64_t hi) {
            PatternSlice slice;
            slice.reserve(static_cast<std::size_t>(hi - lo));
            for (std::uint64_t mask = lo; mask < hi; ++mask) {
                std::vector<int> positions;
                for (int i = 0; i < num_pairs; ++i)
                    if (!((mask >> pair_out_bit[static_cast<std::size_t>(i)]) & 1u))
                        positions.push_back(i);
                std::uint64_t space = 1;
                for (std::size_t i = 0; i < positions.size(); ++i) space *= q;
                std::vector<std::uint32_t> values(static_cast<std::size_t>(num_pairs), 0);
                Tally t = count_successes(*plan, *field, positions, values, mask, 0, space);
                slice.push_back(PatternTally{std::move(t.sink_success), t.joint_success, space});
            }
            return slice;
        });

    const auto& sinks = plan->sinks();
    ErasurePolynomials result;
    for (const auto& sink : sinks) result.sink_failure.emplace(sink.id, RationalPolynomial());

    std::uint64_t mask = 0;
    for (const auto& slice : slices) {
        for (const auto& pt : slice) {
            const auto erased = static_cast<unsigned>(std::popcount(mask));
            const auto alive = static_cast<unsigned>(num_real) - erased;
            const BigInt space(pt.space);
            for (std::size_t s = 0; s < sinks.size(); ++s) {
                const Rational fail = Rational(1) - rational_ratio(pt.sink_success[s], space);
                if (!fail.is_zero())
                    result.sink_failure.at(sinks[s].id) +=
                        RationalPolynomial::bernoulli_weight(fail, erased, alive);
            }
            const Rational fail = Rational(1) - rational_ratio(pt.joint_success, space);
            if (!fail.is_zero())
                result.network_failure += RationalPolynomial::bernoulli_weight(fail, erased, alive);
            ++mask;
        }
    }

    for (const auto& [id, poly] : result.sink_failure) result.average_failure += poly;
    result.average_failure *= Rational(BigInt(1), BigInt(static_cast<long long>(sinks.size())));
    return result;
}

MonteCarloResult monte_carlo_detailed(const NetworkSpec& spec, const FieldPtr& field,
                                      const std::optional<ErasureModel>& erasure,
                                      std::uint64_t trials, std::uint64_t seed,
                                      const MonteCarloOptions& options) {
    if (trials < 1) throw Error("monte carlo requires at least one trial");
    auto plan = CodingPlan::build(spec);
    const int workers = resolve_worker_count(options.workers);
    const int num_pairs = plan->pair_count();
    const int num_real = plan->real_count();
    const int w = plan->width();
    const auto& sinks = plan->sinks();

    std::uint64_t erasure_num = 0, erasure_den = 1;
    if (erasure.has_value()) {
        if (erasure->p.den() > BigInt(UINT64_MAX))
            throw Error("erasure probability denominator too large to sample exactly");
        erasure_num = static_cast<std::uint64_t>(erasure->p.num());
        erasure_den = static_cast<std::uint64_t>(erasure->p.den());
    }

    auto tallies = run_partitioned<Tally>(
        trials, workers, [&](int, std::uint64_t lo, std::uint64_t hi) {
            Tally tally;
            tally.sink_failure.assign(sinks.size(), 0);
            std::vector<std::uint32_t> values(static_cast<std::size_t>(num_pairs));
            std::vector<std::uint32_t> kernels(static_cast<std::size_t>(plan->channel_count()) * w);
            std::size_t max_cols = 1;
            for (const auto& sink : sinks) max_cols = std::max(max_cols, sink.incoming.size());
            std::vector<std::uint32_t> scratch(static_cast<std::size_t>(w) * max_cols);

            for (std::uint64_t t = lo; t < hi; ++t) {
                RandomStream stream = RandomStream::substream(seed, t);
                // Coefficients first (canonical pair order), then the erasure
                // pattern (erasure bit order); this draw order is part of the
                // replay contract.
                for (auto& v : values) v = field->sample_code(stream);
                std::uint64_t mask = 0;
                if (erasure.has_value()) {
                    for (int b = 0; b < num_real; ++b)
                        if (stream.uniform_below(erasure_den) < erasure_num) mask |= 1ULL << b;
                }
                detail::propagate_codes(*plan, *field, values.data(), mask, kernels.data());
                bool all = true;
                for (std::size_t s = 0; s < sinks.size(); ++s) {
                    const bool ok = detail::sink_rank(*plan, *field, kernels.data(), sinks[s],
                                                      scratch.data()) == w;
                    if (!ok) {
                        ++tally.sink_failure[s];
                        all = false;
                    }
                }
                if (!all) ++tally.network_failure;
            }
            return tally;
        });

    MonteCarloResult result;
    result.trials = trials;
    result.seed = seed;
    std::vector<std::uint64_t> sink_failure(sinks.size(), 0);
    for (const auto& t : tallies) {
        if (t.sink_failure.empty()) continue;
        for (std::size_t s = 0; s < sinks.size(); ++s) sink_failure[s] += t.sink_failure[s];
        result.network_failure_count += t.network_failure;
    }

    const double n = static_cast<double>(trials);
    auto make_estimate = [&](double mean) {
        Estimate e;
        e.mean = mean;
        e.trials = trials;
        e.std_error = std::sqrt(mean * (1.0 - mean) / n);
        e.seed = seed;
        return e;
    };

    double mean_sum = 0.0;
    for (std::size_t s = 0; s < sinks.size(); ++s) {
        const double mean = static_cast<double>(sink_failure[s]) / n;
        result.probabilities.per_sink.emplace(sinks[s].id, make_estimate(mean));
        result.sink_failure_counts.emplace(sinks[s].id, sink_failure[s]);
        mean_sum += mean;
    }
    result.probabilities.network =
        make_estimate(static_cast<double>(result.network_failure_count) / n);
    result.probabilities.average = make_estimate(mean_sum / static_cast<double>(sinks.size()));
    return result;
}

EstimatedProbabilities monte_carlo(const NetworkSpec& spec, const FieldPtr& field,
                                   const std::optional<ErasureModel>& erasure,
                                   std::uint64_t trials, std::uint64_t seed,
                                   const MonteCarloOptions& options) {
    return monte_carlo_detailed(spec, field, erasure, trials, seed, options).probabilities;
}

}  // namespace rlnclab
