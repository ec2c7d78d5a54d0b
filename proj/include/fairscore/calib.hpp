#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "fairscore/dataset.hpp"
#include "fairscore/empirical.hpp"

namespace fairscore {

/// Quantile-barycenter calibration model: the two fitted group score lists.
///
/// A query is located in its own group's descending list, the resulting
/// quantile is mapped to the other list, and the two selected scores are
/// blended with weights alpha (minority) and 1 - alpha (majority). That blend
/// is the barycenter quantile function evaluated at the query's quantile.
class CalibModel {
public:
    /// Validates the invariants of `gs`: both lists non-empty, sorted
    /// non-increasing, inside [0,1], alpha equal to the minority share.
    explicit CalibModel(GroupScores gs);

    const GroupScores& group_scores() const noexcept { return gs_; }

    /// 1-based position of `score` in the group's list: one past the number of
    /// strictly greater entries, clamped to the list length.
    std::size_t own_position(double score, GroupId group) const;

    /// ceil(pos * n_other / n_own) clamped to [1, n_other].
    std::size_t cross_position(std::size_t own_pos, GroupId group) const noexcept;

private:
    GroupScores gs_;
};

CalibModel fit_calib(const ScoreDataset& d, double sigma, std::uint64_t seed);

double calibrate(const CalibModel& model, double score, GroupId group);

/// Every score replaced by its calibrated value; ids, groups and labels kept.
ScoreDataset calibrate_dataset(const CalibModel& model, const ScoreDataset& d);

/// `{alpha, sigma, seed, scores_a, scores_b}` with shortest round-trip numbers.
std::string calib_model_to_json(const CalibModel& model);
CalibModel calib_model_from_json(std::string_view json);

}  // namespace fairscore
