#include "doctest.h"
#include "example_data.hpp"
#include "fairscore/bias.hpp"
#include "fairscore/error.hpp"
#include "oracles.hpp"

using namespace fairscore;

TEST_CASE("metric names") {
    for (auto k : {BiasMetricKind::DP, BiasMetricKind::EO, BiasMetricKind::FPRGap,
                   BiasMetricKind::EOD}) {
        CHECK(parse_metric(to_string(k)) == k);
    }
    CHECK_FALSE(parse_metric("auc").has_value());
    CHECK_FALSE(needs_labels(BiasMetricKind::DP));
    CHECK(needs_labels(BiasMetricKind::EOD));
}

TEST_CASE("worked example demographic-parity bias") {
    CHECK(score_bias(testdata::example(testdata::kRawScores), BiasMetricKind::DP) ==
          doctest::Approx(47.0 / 300.0).epsilon(1e-12));
    CHECK(score_bias(testdata::example(testdata::kNoisyScores), BiasMetricKind::DP) ==
          doctest::Approx(71.0 / 450.0).epsilon(1e-12));
}

TEST_CASE("identical groups have zero bias, separated groups have the mean gap") {
    const auto same = testdata::two_groups({0.2, 0.6, 0.7}, {0.7, 0.2, 0.6});
    CHECK(score_bias(same, BiasMetricKind::DP) == 0.0);
    const auto apart = testdata::two_groups({0.9}, {0.1});
    CHECK(score_bias(apart, BiasMetricKind::DP) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(threshold_bias(apart, BiasMetricKind::DP, 0.5) == 1.0);
    CHECK(threshold_bias(apart, BiasMetricKind::DP, 0.95) == 0.0);
}

TEST_CASE("threshold bias validates theta") {
    const auto d = testdata::example(testdata::kRawScores);
    for (double bad : {-0.1, 1.1}) {
        try {
            threshold_bias(d, BiasMetricKind::DP, bad);
            FAIL("expected ThetaOutOfRange");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ThetaOutOfRange);
        }
    }
    CHECK_NOTHROW(threshold_bias(d, BiasMetricKind::DP, 0.0));
    CHECK_NOTHROW(threshold_bias(d, BiasMetricKind::DP, 1.0));
}

TEST_CASE("label-conditioned metrics on unlabeled data fail") {
    const auto d = testdata::example(testdata::kRawScores);
    for (auto k : {BiasMetricKind::EO, BiasMetricKind::FPRGap, BiasMetricKind::EOD}) {
        try {
            score_bias(d, k);
            FAIL("expected UnlabeledDataset");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::UnlabeledDataset);
        }
    }
}

TEST_CASE("empty group fails") {
    try {
        score_bias(testdata::two_groups({0.3}, {}), BiasMetricKind::DP);
        FAIL("expected EmptyGroup");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyGroup);
    }
}

TEST_CASE("risk estimate") {
    CHECK(risk_estimate(std::vector<double>{0.1, 0.5}, std::vector<double>{0.2, 0.2}) ==
          doctest::Approx(0.2).epsilon(1e-15));
    CHECK(risk_estimate(std::vector<double>{}, std::vector<double>{}) == 0.0);
    CHECK_THROWS_AS(risk_estimate(std::vector<double>{0.1}, std::vector<double>{}), Error);
}

TEST_CASE("property: bias is in [0,1], symmetric and EOD is the sum of its parts") {
    oracle::RandomData gen(17);
    for (int t = 0; t < 60; ++t) {
        const auto d = gen.dataset(gen.size(2, 60), gen.size(2, 60));
        std::vector<ScoredPair> swapped(d.pairs().begin(), d.pairs().end());
        for (auto& p : swapped) p.group = other(p.group);
        const ScoreDataset flipped(std::move(swapped));
        for (auto k : {BiasMetricKind::DP, BiasMetricKind::EO, BiasMetricKind::FPRGap,
                       BiasMetricKind::EOD}) {
            const double b = score_bias(d, k);
            CHECK(b >= 0.0);
            CHECK(b <= (k == BiasMetricKind::EOD ? 2.0 : 1.0));
            CHECK(b == doctest::Approx(score_bias(flipped, k)).epsilon(1e-15));
        }
        CHECK(score_bias(d, BiasMetricKind::EOD) ==
              doctest::Approx(score_bias(d, BiasMetricKind::EO) +
                              score_bias(d, BiasMetricKind::FPRGap))
                  .epsilon(1e-15));
    }
}

TEST_CASE("property: DP bias equals the W1 distance between group scores") {
    oracle::RandomData gen(19);
    for (int t = 0; t < 60; ++t) {
        const auto d = gen.dataset(gen.size(2, 80), gen.size(2, 80));
        const auto a = d.scores(GroupId::Minority);
        const auto b = d.scores(GroupId::Majority);
        CHECK(score_bias(d, BiasMetricKind::DP) ==
              doctest::Approx(oracle::quantile_w1(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("property: exact integral agrees with a fine midpoint Riemann sum") {
    oracle::RandomData gen(23);
    constexpr int kGrid = 10000;
    for (int t = 0; t < 20; ++t) {
        const auto d = gen.dataset(gen.size(2, 30), gen.size(2, 30));
        for (auto k : {BiasMetricKind::DP, BiasMetricKind::EO, BiasMetricKind::FPRGap}) {
            const auto c = metric_curves(d, k);
            // Midpoint error per cell is at most half a cell times the gap's
            // variation inside it; each rate curve varies by at most one.
            const double variation = (c.minority.values().front() - c.minority.values().back()) +
                                     (c.majority.values().front() - c.majority.values().back());
            const double exact = score_bias(d, k);
            const double approx = oracle::riemann_bias(d, k, kGrid);
            CHECK(std::abs(exact - approx) <= variation / (2.0 * kGrid) + 1e-12);
        }
    }
}

TEST_CASE("a single breakpoint per group meets the tight Riemann bound") {
    oracle::RandomData gen(24);
    constexpr int kGrid = 10000;
    for (int t = 0; t < 50; ++t) {
        const auto d = testdata::two_groups({gen.uniform(0, 1)}, {gen.uniform(0, 1)});
        const double approx = oracle::riemann_bias(d, BiasMetricKind::DP, kGrid);
        CHECK(std::abs(score_bias(d, BiasMetricKind::DP) - approx) <= 2.0 / kGrid);
    }
}

TEST_CASE("threshold bias agrees with the curves") {
    oracle::RandomData gen(29);
    const auto d = gen.dataset(25, 31);
    const auto c = metric_curves(d, BiasMetricKind::EO);
    for (double theta : {0.0, 0.1, 0.33, 0.5, 0.77, 1.0}) {
        CHECK(threshold_bias(d, BiasMetricKind::EO, theta) ==
              doctest::Approx(std::abs(c.minority(theta) - c.majority(theta))).epsilon(1e-15));
    }
}
