#include "fairscore/synth.hpp"

#include <algorithm>
#include <boost/random/bernoulli_distribution.hpp>
#include <boost/random/beta_distribution.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <cmath>
#include <string>
#include <vector>

#include "fairscore/error.hpp"

namespace fairscore {

namespace {

void check_shape(const BetaParams& p, const char* name) {
    if (!(p.shape1 > 0.0) || !(p.shape2 > 0.0) || !std::isfinite(p.shape1) ||
        !std::isfinite(p.shape2)) {
        throw Error(ErrorCode::InvalidSpec, std::string(name) + " Beta shapes must be positive");
    }
}

}  // namespace

void SynthSpec::validate() const {
    if (n_minority == 0 || n_majority == 0) {
        throw Error(ErrorCode::InvalidSpec, "both group counts must be at least 1");
    }
    for (double r : {pos_rate_a, pos_rate_b}) {
        if (!(r >= 0.0 && r <= 1.0)) {
            throw Error(ErrorCode::InvalidSpec, "positive rates must lie in [0,1]");
        }
    }
    check_shape(minority_pos, "minority positive");
    check_shape(minority_neg, "minority negative");
    check_shape(majority_pos, "majority positive");
    check_shape(majority_neg, "majority negative");
}

ScoreDataset generate(const SynthSpec& spec) {
    spec.validate();
    boost::random::mt19937_64 engine(spec.seed);
    std::vector<ScoredPair> pairs;
    pairs.reserve(spec.n_minority + spec.n_majority);

    auto emit = [&](GroupId group, std::size_t count, double pos_rate, const BetaParams& pos,
                    const BetaParams& neg) {
        boost::random::bernoulli_distribution<double> coin(pos_rate);
        boost::random::beta_distribution<double> pos_dist(pos.shape1, pos.shape2);
        boost::random::beta_distribution<double> neg_dist(neg.shape1, neg.shape2);
        for (std::size_t i = 0; i < count; ++i) {
            const int label = coin(engine) ? 1 : 0;
            const double score = label ? pos_dist(engine) : neg_dist(engine);
            pairs.push_back({"p" + std::to_string(pairs.size() + 1), std::clamp(score, 0.0, 1.0),
                             group, label});
        }
    };
    emit(GroupId::Minority, spec.n_minority, spec.pos_rate_a, spec.minority_pos,
         spec.minority_neg);
    emit(GroupId::Majority, spec.n_majority, spec.pos_rate_b, spec.majority_pos,
         spec.majority_neg);
    return ScoreDataset(std::move(pairs));
}

}  // namespace fairscore
