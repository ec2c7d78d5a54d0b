#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "fairscore/calib.hpp"
#include "fairscore/dataset.hpp"

namespace fairscore {

/// One-dimensional Gaussian-kernel mean shift settings.
struct MeanshiftConfig {
    double bandwidth = 0.1;
    int max_iterations = 500;
    double convergence_tol = 1e-4;
    double merge_radius = 0.05;

    /// Throws InvalidArgument unless every field is positive and
    /// merge_radius <= bandwidth.
    void validate() const;
};

/// Splits the scores into the two heaviest mean-shift modes and returns the
/// midpoint of their centers. Throws SingleMode when fewer than two modes
/// remain after merging and EmptyInput for no scores.
double meanshift_threshold(std::span<const double> scores, const MeanshiftConfig& cfg = {});

/// How the fit population is split into the matched and unmatched halves.
enum class PartitionSource {
    PredictedLabels,  // s >= gamma
    TrueLabels,       // label == 1; needs a labeled dataset
};

/// Label-conditioned calibration: one barycenter model per side of gamma.
struct CondCalibModel {
    double gamma = 0.5;
    CalibModel matched;
    CalibModel unmatched;
    MeanshiftConfig meanshift;
};

CondCalibModel fit_conditional(const ScoreDataset& d, double sigma, std::uint64_t seed,
                               std::optional<double> gamma_override,
                               const MeanshiftConfig& cfg = {},
                               PartitionSource partition = PartitionSource::PredictedLabels);

/// Routes the query to the matched model when score >= gamma, otherwise to the
/// unmatched model, and calibrates it there.
double cond_calibrate(const CondCalibModel& model, double score, GroupId group);

ScoreDataset cond_calibrate_dataset(const CondCalibModel& model, const ScoreDataset& d);

/// `{gamma, matched, unmatched, meanshift:{bandwidth, tol, max_iter, merge_radius}}`.
std::string cond_model_to_json(const CondCalibModel& model);
CondCalibModel cond_model_from_json(std::string_view json);

}  // namespace fairscore
