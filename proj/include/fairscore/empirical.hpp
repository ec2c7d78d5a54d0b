#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "fairscore/dataset.hpp"

namespace fairscore {

/// Per-group descending score lists fitted from a dataset. The minority list
/// is `scores_a`, the majority list `scores_b`; `alpha` is the minority share.
struct GroupScores {
    std::vector<double> scores_a;
    std::vector<double> scores_b;
    double alpha = 0.5;
    double sigma = 0.0;
    std::uint64_t seed = 0;

    const std::vector<double>& list(GroupId g) const noexcept {
        return g == GroupId::Minority ? scores_a : scores_b;
    }
};

/// Piecewise-constant function on [0,1].
///
/// With breakpoints b_1 < ... < b_k (all in [0,1)), the curve is values[0]
/// on [0, b_1], values[i] on (b_i, b_{i+1}] and values[k] on (b_k, 1]. The
/// value at a breakpoint therefore belongs to the interval ending there, which
/// is the ">= theta" convention of a positive-rate curve.
class StepCurve {
public:
    StepCurve() : values_{0.0} {}
    StepCurve(std::vector<double> breakpoints, std::vector<double> values);

    double operator()(double theta) const noexcept;

    const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
    const std::vector<double>& values() const noexcept { return values_; }

    /// Largest absolute change between adjacent intervals.
    double max_jump() const noexcept;

    friend bool operator==(const StepCurve&, const StepCurve&) = default;

private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
};

/// Adds N(0, sigma^2) noise to each score and clamps to [0,1]. The noise
/// stream is boost::random::mt19937_64 seeded with `seed`, consumed in input
/// order. sigma == 0 returns the input unchanged.
std::vector<double> add_jitter(std::span<const double> scores, double sigma, std::uint64_t seed);

/// Jitters every score of `d` (in dataset order) and splits them into sorted
/// per-group lists. Throws EmptyGroup when either group is absent.
GroupScores build_group_scores(const ScoreDataset& d, double sigma, std::uint64_t seed);

/// Sorts the two lists descending and derives alpha from their sizes.
GroupScores make_group_scores(std::vector<double> minority, std::vector<double> majority,
                              double sigma, std::uint64_t seed);

/// theta -> |{x : x >= theta}| / |scores|.
StepCurve pr_curve(std::span<const double> scores);

/// Positive-rate curve of one (group, label) stratum: TPR for label 1, FPR for 0.
StepCurve conditional_curve(const ScoreDataset& d, GroupId group, int label);

/// Exact integral over [0,1] of |f - g|.
double integrate_abs_difference(const StepCurve& f, const StepCurve& g);

/// Rank-statistic AUC, P(S+ > S-) + P(S+ = S-)/2.
double auc(std::span<const double> positives, std::span<const double> negatives);
double auc(const ScoreDataset& d);

/// Wasserstein-1 distance between two empirical distributions on [0,1],
/// computed exactly as the integral of |F_x - F_y|.
double w1_distance(std::span<const double> x, std::span<const double> y);

/// CSV `theta,value`: a θ=0 row holding values[0], then one row per breakpoint
/// holding the value on the interval that begins there.
void write_curve(std::ostream& out, const StepCurve& c);
StepCurve read_curve(std::istream& in);

}  // namespace fairscore
