#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "doctest.h"
#include "example_data.hpp"
#include "fairscore/bias.hpp"
#include "fairscore/calib.hpp"
#include "fairscore/error.hpp"
#include "oracles.hpp"

using namespace fairscore;

namespace {

CalibModel example_model() { return fit_calib(testdata::example(testdata::kNoisyScores), 0.0, 0); }

}  // namespace

TEST_CASE("worked example model") {
    const auto m = example_model();
    const auto& gs = m.group_scores();
    CHECK(gs.alpha == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(gs.scores_a.size() == 6);
    CHECK(gs.scores_b.size() == 9);
}

TEST_CASE("worked example queries") {
    const auto m = example_model();
    CHECK(m.own_position(0.34, GroupId::Majority) == 6);
    CHECK(m.cross_position(6, GroupId::Majority) == 4);
    CHECK(std::abs(calibrate(m, 0.34, GroupId::Majority) - (0.4 * 0.46 + 0.6 * 0.31)) <= 1e-12);
    CHECK(std::abs(calibrate(m, 0.99, GroupId::Majority) - (0.4 * 0.80 + 0.6 * 0.97)) <= 1e-12);
    // Below every score: both positions clamp to the last element.
    CHECK(std::abs(calibrate(m, 0.0, GroupId::Minority) - (0.4 * 0.28 + 0.6 * 0.18)) <= 1e-12);
    CHECK(std::abs(calibrate(m, 1.0, GroupId::Minority) - (0.4 * 0.80 + 0.6 * 0.89)) <= 1e-12);
}

TEST_CASE("worked example, whole dataset") {
    const auto m = example_model();
    const auto out = calibrate_dataset(m, testdata::example(testdata::kNoisyScores));
    const std::vector<double> expected{0.37, 0.854, 0.822, 0.798, 0.798, 0.47,  0.482, 0.902,
                                       0.394, 0.288, 0.37, 0.22, 0.306, 0.244, 0.22};
    REQUIRE(out.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(out[i].score == doctest::Approx(expected[i]).epsilon(1e-12));
        CHECK(out[i].id == "p" + std::to_string(i + 1));
    }
}

TEST_CASE("query validation") {
    const auto m = example_model();
    for (double bad : {-0.01, 1.01}) {
        try {
            calibrate(m, bad, GroupId::Minority);
            FAIL("expected ScoreOutOfRange");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ScoreOutOfRange);
        }
    }
}

TEST_CASE("fitting needs both groups") {
    try {
        fit_calib(testdata::two_groups({}, {0.5}), 0.0, 0);
        FAIL("expected EmptyGroup");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyGroup);
    }
}

TEST_CASE("model validation") {
    CHECK_THROWS_AS(CalibModel(GroupScores{{}, {0.5}, 0.0}), Error);
    CHECK_THROWS_AS(CalibModel(GroupScores{{0.2, 0.5}, {0.5}, 2.0 / 3.0}), Error);  // ascending
    CHECK_THROWS_AS(CalibModel(GroupScores{{0.5}, {0.5}, 0.3}), Error);             // alpha
    CHECK_NOTHROW(CalibModel(GroupScores{{0.5}, {0.5}, 0.5}));
}

TEST_CASE("singleton groups map everything to the blend of the two scores") {
    const auto m = fit_calib(testdata::two_groups({0.8}, {0.2}), 0.0, 0);
    for (double q : {0.0, 0.3, 0.9}) {
        CHECK(calibrate(m, q, GroupId::Minority) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(calibrate(m, q, GroupId::Majority) == doctest::Approx(0.5).epsilon(1e-15));
    }
}

TEST_CASE("json round trip") {
    const auto m = fit_calib(testdata::example(testdata::kRawScores), 0.05, 9);
    const auto json = calib_model_to_json(m);
    const auto back = calib_model_from_json(json);
    CHECK(back.group_scores().scores_a == m.group_scores().scores_a);
    CHECK(back.group_scores().scores_b == m.group_scores().scores_b);
    CHECK(back.group_scores().alpha == m.group_scores().alpha);
    CHECK(back.group_scores().seed == 9);
    CHECK(calib_model_to_json(back) == json);
    CHECK_THROWS_AS(calib_model_from_json("{"), Error);
    CHECK_THROWS_AS(calib_model_from_json(R"({"alpha":0.5})"), Error);
}

TEST_CASE("property: calibrate matches the literal linear scan") {
    oracle::RandomData gen(31);
    for (int t = 0; t < 200; ++t) {
        const auto d = gen.dataset(gen.size(1, 40), gen.size(1, 40));
        const auto m = fit_calib(d, 0.0, 0);
        const auto& gs = m.group_scores();
        for (int q = 0; q < 20; ++q) {
            // Mix fresh queries with exact hits on fitted scores.
            const double s = q % 2 ? gen.uniform(0, 1) : d[gen.size(0, d.size() - 1)].score;
            for (auto g : {GroupId::Minority, GroupId::Majority}) {
                CHECK(calibrate(m, s, g) == oracle::scan_calibrate(gs.scores_a, gs.scores_b, s,
                                                                   g == GroupId::Minority));
            }
        }
    }
}

TEST_CASE("property: output stays in the range spanned by the fitted lists") {
    oracle::RandomData gen(37);
    for (int t = 0; t < 100; ++t) {
        const auto d = gen.dataset(gen.size(1, 30), gen.size(1, 30));
        const auto m = fit_calib(d, 0.05, t);
        const auto& gs = m.group_scores();
        const double lo = std::min(gs.scores_a.back(), gs.scores_b.back());
        const double hi = std::max(gs.scores_a.front(), gs.scores_b.front());
        for (int q = 0; q < 10; ++q) {
            const double v = calibrate(m, gen.uniform(0, 1), q % 2 ? GroupId::Minority : GroupId::Majority);
            CHECK(v >= lo);
            CHECK(v <= hi);
        }
    }
}

TEST_CASE("property: within-group monotonicity and preserved per-group AUC") {
    oracle::RandomData gen(41);
    for (int t = 0; t < 200; ++t) {
        const auto d = gen.dataset(gen.size(2, 40), gen.size(2, 40));
        const auto m = fit_calib(d, 0.05, t);
        for (int q = 0; q < 5; ++q) {
            double s1 = gen.uniform(0, 1);
            double s2 = gen.uniform(0, 1);
            if (s1 > s2) std::swap(s1, s2);
            for (auto g : {GroupId::Minority, GroupId::Majority}) {
                CHECK(calibrate(m, s1, g) <= calibrate(m, s2, g));
            }
        }
    }
}

TEST_CASE("property: self-fit without jitter removes DP bias on tie-free data") {
    oracle::RandomData gen(43);
    for (int t = 0; t < 50; ++t) {
        const auto n_a = gen.size(2, 60);
        const auto n_b = gen.size(2, 60);
        const auto d = gen.dataset(n_a, n_b);
        const auto out = calibrate_dataset(fit_calib(d, 0.0, 0), d);
        // Both groups land on the same barycenter quantiles; the only residue
        // comes from the coarser of the two quantile grids.
        CHECK(score_bias(out, BiasMetricKind::DP) <= 1.0 / static_cast<double>(std::min(n_a, n_b)) + 1e-12);
        if (n_a == n_b) CHECK(score_bias(out, BiasMetricKind::DP) <= 1e-12);
    }
}

TEST_CASE("property: barycenter risk is no larger than the weighted trivial maps") {
    oracle::RandomData gen(47);
    int literal_failures = 0;
    for (int t = 0; t < 100; ++t) {
        const auto d = gen.dataset(gen.size(2, 60), gen.size(2, 60));
        const auto m = fit_calib(d, 0.0, 0);
        const auto& gs = m.group_scores();
        const auto orig = d.scores();
        std::vector<double> bary, to_a, to_b;
        for (const auto& p : d.pairs()) {
            bary.push_back(calibrate(m, p.score, p.group));
            // Trivial maps: evaluate the target group's quantile at the
            // query's own quantile.
            const auto own = m.own_position(p.score, p.group);
            auto pick = [&](GroupId target) {
                const auto pos = target == p.group ? own : m.cross_position(own, p.group);
                return gs.list(target)[pos - 1];
            };
            to_a.push_back(pick(GroupId::Minority));
            to_b.push_back(pick(GroupId::Majority));
        }
        const double r = risk_estimate(orig, bary);
        const double ra = risk_estimate(orig, to_a);
        const double rb = risk_estimate(orig, to_b);
        CHECK(r <= gs.alpha * ra + (1.0 - gs.alpha) * rb + 1e-12);
        if (r > gs.alpha * rb + (1.0 - gs.alpha) * ra + 1e-12) ++literal_failures;
    }
    MESSAGE("swapped-weight form violated in " << literal_failures << " of 100 datasets");
}
