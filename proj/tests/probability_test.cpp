#include <doctest.h>

#include <cmath>

#include "rlnclab/formulas.hpp"
#include "rlnclab/probability.hpp"

using rlnclab::BigInt;
using rlnclab::ErasureModel;
using rlnclab::Estimate;
using rlnclab::Field;
using rlnclab::NetworkSpec;
using rlnclab::Rational;
using rlnclab::RationalPolynomial;

namespace {

const Rational kOne(1);

Rational frac(long long n, long long d) { return Rational(BigInt(n), BigInt(d)); }

}  // namespace

TEST_SUITE("probability") {

TEST_CASE("GF(2) butterfly enumeration reproduces the exact counts") {
    const NetworkSpec bf = NetworkSpec::butterfly();
    auto field = Field::of_order(2);
    const auto result = rlnclab::enumerate_detailed(bf, field);

    CHECK(result.total_assignments == 4096);
    CHECK(result.evaluations == 4096);
    REQUIRE(result.network_success_count.has_value());
    CHECK(*result.network_success_count == 6);
    REQUIRE(result.sink_success_counts.has_value());
    CHECK(result.sink_success_counts->at("t1") == 96);
    CHECK(result.sink_success_counts->at("t2") == 96);

    CHECK(kOne - result.probabilities.network == frac(3, 2048));
    CHECK(kOne - result.probabilities.per_sink.at("t1") == frac(3, 128));
    CHECK(kOne - result.probabilities.per_sink.at("t2") == frac(3, 128));
    CHECK(result.probabilities.average == result.probabilities.per_sink.at("t1"));
    CHECK(result.probabilities.network >= result.probabilities.per_sink.at("t1"));
}

TEST_CASE("enumeration invariants at q = 3") {
    const NetworkSpec bf = NetworkSpec::butterfly();
    auto field = Field::of_order(3);
    const auto probs = rlnclab::enumerate_exact(bf, field);
    CHECK(probs.per_sink.at("t1") == probs.per_sink.at("t2"));  // symmetry
    CHECK(probs.network >= probs.per_sink.at("t1"));
    CHECK(probs.average ==
          (probs.per_sink.at("t1") + probs.per_sink.at("t2")) / Rational(2));
    CHECK(kOne - probs.network == frac(4096, 177147));
}

TEST_CASE("everything is erased at p = 1") {
    const NetworkSpec bf = NetworkSpec::butterfly();
    auto field = Field::of_order(2);
    const auto probs = rlnclab::enumerate_exact(bf, field, ErasureModel(Rational(1)));
    CHECK(probs.network == kOne);
    CHECK(probs.average == kOne);
    CHECK(probs.per_sink.at("t1") == kOne);
    CHECK(probs.per_sink.at("t2") == kOne);
}

TEST_CASE("budget violations report both sides") {
    const NetworkSpec bf = NetworkSpec::butterfly();
    auto field = Field::of_order(89);
    BigInt expected = 1;
    for (int i = 0; i < 12; ++i) expected *= 89;  // 89^12 assignments
    try {
        rlnclab::enumerate_exact(bf, field);
        FAIL("expected SearchSpaceTooLarge");
    } catch (const rlnclab::SearchSpaceTooLarge& e) {
        CHECK(e.required_evaluations == expected.str());
        CHECK(e.allowed_evaluations == std::to_string(1ULL << 26));
    }
}

TEST_CASE("weighted enumeration equals the closed form with erasures") {
    const NetworkSpec bf = NetworkSpec::butterfly();
    for (std::uint64_t q : {2ull, 3ull}) {
        auto field = Field::of_order(q);
        for (const Rational& p : {frac(1, 10), frac(1, 2)}) {
            const auto probs = rlnclab::enumerate_exact(bf, field, ErasureModel(p));
            const rlnclab::FormulaInput input(BigInt(q), p);
            CHECK(probs.per_sink.at("t1") ==
                  rlnclab::butterfly_failure(input, rlnclab::Target::Sink));
            CHECK(probs.per_sink.at("t2") ==
                  rlnclab::butterfly_failure(input, rlnclab::Target::Sink));
            CHECK(probs.network == rlnclab::butterfly_failure(input, rlnclab::Target::Network));
            CHECK(probs.average == rlnclab::butterfly_failure(input, rlnclab::Target::Average));
        }
    }
}

TEST_CASE("erasure polynomials match the factored forms at q = 2") {
    const NetworkSpec bf = NetworkSpec::butterfly();
    auto field = Field::of_order(2);
    const auto polys = rlnclab::erasure_polynomial(bf, field);

    const RationalPolynomial network_success =
        RationalPolynomial::bernoulli_weight(frac(3, 2048), 0, 9);
    const RationalPolynomial sink_success =
        RationalPolynomial::bernoulli_weight(frac(3, 128), 0, 6);
    const RationalPolynomial one = RationalPolynomial::constant(kOne);

    CHECK(one - polys.network_failure == network_success);
    CHECK(one - polys.sink_failure.at("t1") == sink_success);
    CHECK(one - polys.sink_failure.at("t2") == sink_success);
    CHECK(one - polys.average_failure == sink_success);

    // Evaluating the polynomial at any rational p agrees with direct
    // enumeration, exactly.
    for (const Rational& p : {Rational(0), frac(1, 10), frac(1, 3), Rational(1)}) {
        const auto probs = rlnclab::enumerate_exact(bf, field, ErasureModel(p));
        CHECK(polys.network_failure.evaluate(p) == probs.network);
        CHECK(polys.sink_failure.at("t1").evaluate(p) == probs.per_sink.at("t1"));
        CHECK(polys.average_failure.evaluate(p) == probs.average);
    }

    // p = 0 degenerates to the no-erasure enumeration.
    const auto no_erasure = rlnclab::enumerate_exact(bf, field);
    CHECK(polys.network_failure.evaluate(Rational(0)) == no_erasure.network);
}

TEST_CASE("monte carlo replays exactly and is worker-count independent") {
    const NetworkSpec bf = NetworkSpec::butterfly();
    auto field = Field::of_order(4);
    rlnclab::MonteCarloOptions one_worker;
    one_worker.workers = 1;
    rlnclab::MonteCarloOptions five_workers;
    five_workers.workers = 5;

    const auto a = rlnclab::monte_carlo_detailed(bf, field, std::nullopt, 20000, 9, one_worker);
    const auto b = rlnclab::monte_carlo_detailed(bf, field, std::nullopt, 20000, 9, five_workers);
    CHECK(a.network_failure_count == b.network_failure_count);
    CHECK(a.sink_failure_counts == b.sink_failure_counts);
    CHECK(a.probabilities.network.mean == b.probabilities.network.mean);

    const auto with_erasure_1 = rlnclab::monte_carlo_detailed(
        bf, field, ErasureModel(frac(1, 10)), 20000, 9, one_worker);
    const auto with_erasure_5 = rlnclab::monte_carlo_detailed(
        bf, field, ErasureModel(frac(1, 10)), 20000, 9, five_workers);
    CHECK(with_erasure_1.network_failure_count == with_erasure_5.network_failure_count);
    CHECK(with_erasure_1.sink_failure_counts == with_erasure_5.sink_failure_counts);
}

TEST_CASE("single-trial estimates are 0 or 1") {
    const NetworkSpec bf = NetworkSpec::butterfly();
    auto field = Field::of_order(2);
    const auto probs = rlnclab::monte_carlo(bf, field, std::nullopt, 1, 1);
    CHECK((probs.network.mean == 0.0 || probs.network.mean == 1.0));
    CHECK_THROWS_AS(rlnclab::monte_carlo(bf, field, std::nullopt, 0, 1), rlnclab::Error);
}

TEST_CASE("monte carlo agrees with exact values within 5 standard errors") {
    const NetworkSpec bf = NetworkSpec::butterfly();
    const std::uint64_t trials = 200000;
    for (std::uint64_t q : {2ull, 3ull}) {
        auto field = Field::of_order(q);
        for (const Rational& p : {Rational(0), frac(1, 10)}) {
            const auto erasure =
                p.is_zero() ? std::optional<ErasureModel>() : std::optional(ErasureModel(p));
            const auto probs = rlnclab::monte_carlo(bf, field, erasure, trials, 31337);
            const rlnclab::FormulaInput input(BigInt(q), p);
            const double exact =
                rlnclab::butterfly_failure(input, rlnclab::Target::Network).to_double();
            const double sigma = std::sqrt(exact * (1 - exact) / static_cast<double>(trials));
            CHECK(std::abs(probs.network.mean - exact) < 5 * sigma + 1e-12);

            const double sink_exact =
                rlnclab::butterfly_failure(input, rlnclab::Target::Sink).to_double();
            const double sink_sigma =
                std::sqrt(sink_exact * (1 - sink_exact) / static_cast<double>(trials));
            CHECK(std::abs(probs.per_sink.at("t1").mean - sink_exact) < 5 * sink_sigma + 1e-12);
        }
    }
}

TEST_CASE("estimate bookkeeping") {
    const NetworkSpec bf = NetworkSpec::butterfly();
    auto field = Field::of_order(2);
    const auto result = rlnclab::monte_carlo_detailed(bf, field, std::nullopt, 5000, 77);
    const Estimate& net = result.probabilities.network;
    CHECK(net.trials == 5000);
    CHECK(net.seed == 77);
    CHECK(net.std_error ==
          doctest::Approx(std::sqrt(net.mean * (1 - net.mean) / 5000.0)).epsilon(1e-12));
    const double sink_mean_sum = result.probabilities.per_sink.at("t1").mean +
                                 result.probabilities.per_sink.at("t2").mean;
    CHECK(result.probabilities.average.mean == doctest::Approx(sink_mean_sum / 2).epsilon(1e-12));
    CHECK(net.mean >= result.probabilities.per_sink.at("t1").mean);
}

TEST_CASE("confidence intervals fall back to Wilson for rare events") {
    Estimate rare{2.0 / 1e6, 1000000, std::sqrt((2.0 / 1e6) * (1 - 2.0 / 1e6) / 1e6), 1};
    const auto wilson = rlnclab::confidence_interval(rare);
    CHECK(wilson.wilson);
    CHECK(wilson.low >= 0.0);
    CHECK(wilson.high > rare.mean);

    Estimate common{0.4, 10000, std::sqrt(0.4 * 0.6 / 10000), 1};
    const auto normal = rlnclab::confidence_interval(common);
    CHECK_FALSE(normal.wilson);
    CHECK(normal.low == doctest::Approx(0.4 - 1.96 * common.std_error));
    CHECK(normal.high == doctest::Approx(0.4 + 1.96 * common.std_error));
}

TEST_CASE("erasure model validates its probability") {
    CHECK_THROWS_AS(ErasureModel(frac(3, 2)), rlnclab::Error);
    CHECK_THROWS_AS(ErasureModel(frac(-1, 2)), rlnclab::Error);
    CHECK(ErasureModel(frac(1, 2)).p == frac(1, 2));
}

}  // TEST_SUITE
